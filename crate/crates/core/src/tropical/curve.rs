use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{block_positions, MixedSubdivision};
use crate::error::{Error, Result};
use crate::geometry::{Block, Geometry};
use crate::triangulation::{Cell, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    /// Three first-factor and two second-factor vertices.
    Blue,
    /// Two first-factor and three second-factor vertices.
    Red,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Blue => "blue",
            Color::Red => "red",
        }
    }
}

/// Dual graph of a tropical curve with unbounded rays suppressed: each
/// vertex records how many rays it carried.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveGraph {
    pub colors: Vec<Option<Color>>,
    /// Unordered pairs with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub rays: Vec<u32>,
    /// The triangulation cell behind each vertex, when there is one.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<Vec<usize>>,
}

impl CurveGraph {
    /// Uncolored graph with `3 - degree` rays per vertex (saturating).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self { colors: vec![None; n], edges: Vec::new(), rays: Vec::new(), cells: Vec::new() };
        g.edges = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        g.edges.sort_unstable();
        g.rays = (0..n).map(|v| 3u32.saturating_sub(g.degree(v) as u32)).collect();
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn ray_total(&self) -> u32 {
        self.rays.iter().sum()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            if u != v {
                adj[v].push(u);
            }
        }
        adj
    }

    /// Number of connected components (isolated vertices included).
    pub fn components(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let next = p[x];
                p[x] = r;
                x = next;
            }
            r
        }
        let mut count = n;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }

    /// Rejects loops and parallel edges.
    pub fn check_simple(&self) -> Result<()> {
        if let Some(&(u, _)) = self.edges.iter().find(|(u, v)| u == v) {
            return Err(Error::Domain(format!("loop at vertex {u}")));
        }
        if let Some(w) = self.edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("parallel edges {:?}", w[0])));
        }
        Ok(())
    }

    /// Graphviz rendering; vertices are filled with their color.
    pub fn to_dot(&self, name: &str, labels: Option<&[String]>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(s, "  node [shape=circle style=filled fillcolor=white];");
        for v in 0..self.vertex_count() {
            let label = labels.and_then(|l| l.get(v)).cloned().unwrap_or_else(|| v.to_string());
            let fill = self.colors[v].map_or("white", Color::name);
            let _ = writeln!(s, "  {v} [label=\"{label}\" fillcolor={fill} rays={}];", self.rays[v]);
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

/// First Betti number, `E - V + components`.
pub fn genus(g: &CurveGraph) -> usize {
    g.edge_count() + g.components() - g.vertex_count()
}

/// Length of the unique cycle of a connected genus-1 graph, found by
/// repeatedly deleting leaves.
pub fn cycle_length(g: &CurveGraph) -> Result<usize> {
    if !g.is_connected() || genus(g) != 1 {
        return Err(Error::Domain(format!(
            "cycle length needs a connected genus-1 graph (genus {}, {} components)",
            genus(g),
            g.components()
        )));
    }
    let adj = g.neighbors();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; g.vertex_count()];
    let mut leaves: Vec<usize> = (0..g.vertex_count()).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = leaves.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for &u in &adj[v] {
            if !removed[u] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    leaves.push(u);
                }
            }
        }
    }
    Ok(removed.iter().filter(|r| !**r).count())
}

/// Dual curve of the mixed subdivision of a Cayley triangulation in
/// 3-space: one vertex per mixed cell, one edge per shared facet with two
/// vertices from each factor.
pub fn dual_curve_3d(geom: &Geometry, t: &Triangulation, ms: &MixedSubdivision) -> Result<CurveGraph> {
    if geom.dim() != 4 {
        return Err(Error::Dimension(format!("expected a 4-dimensional Cayley polytope, got {}", geom.dim())));
    }
    let pos = block_positions(geom)?;
    let first_mask: u64 = pos.iter().enumerate().filter(|(_, p)| p.0 == Block::First).fold(0, |m, (i, _)| m | 1 << i);
    let mut vertex_of = vec![usize::MAX; t.len()];
    let mut g = CurveGraph { colors: Vec::new(), edges: Vec::new(), rays: Vec::new(), cells: Vec::new() };
    for (ci, mc) in ms.cells.iter().enumerate() {
        if mc.mixed {
            vertex_of[ci] = g.colors.len();
            g.colors.push(mc.color());
            g.cells.push(mc.cayley_cell.clone());
        }
    }
    let mut boundary = vec![0u32; g.colors.len()];
    let is_square = |f: u64| (f & first_mask).count_ones() == 2 && (f & !first_mask).count_ones() == 2;
    let inc = t.facet_incidences();
    let mut i = 0;
    while i < inc.len() {
        let f = inc[i].0;
        let shared = i + 1 < inc.len() && inc[i + 1].0 == f;
        if is_square(f) {
            let a = vertex_of[inc[i].2 as usize];
            if shared {
                let b = vertex_of[inc[i + 1].2 as usize];
                if a == usize::MAX || b == usize::MAX {
                    return Err(Error::Domain(format!("facet {:?} borders an unmixed cell", Cell(f))));
                }
                g.edges.push((a.min(b), a.max(b)));
            } else {
                boundary[a] += 1;
            }
        }
        i += if shared { 2 } else { 1 };
    }
    g.edges.sort_unstable();
    g.check_simple()?;
    g.rays = (0..g.colors.len())
        .map(|v| {
            let rays = 3 - g.degree(v) as u32;
            debug_assert_eq!(rays, boundary[v]);
            rays
        })
        .collect();
    Ok(g)
}

/// Dual graph of a triangulated polygon: one vertex per triangle, one edge
/// per interior edge.
pub fn dual_curve_planar(geom: &Geometry, t: &Triangulation) -> Result<CurveGraph> {
    if geom.dim() != 2 {
        return Err(Error::Dimension(format!("expected a polygon, got dimension {}", geom.dim())));
    }
    let inc = t.facet_incidences();
    let edges: Vec<(usize, usize)> =
        inc.windows(2).filter(|w| w[0].0 == w[1].0).map(|w| (w[0].2 as usize, w[1].2 as usize)).collect();
    let mut g = CurveGraph::from_edges(t.len(), &edges);
    g.cells = t.index_cells();
    g.check_simple()?;
    Ok(g)
}
