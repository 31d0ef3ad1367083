//! Canonical labeling, isomorphism testing, classification of curve graphs
//! and a census of abstract candidates.

mod census;
mod classify;

pub use census::{census, CensusConvention, CENSUS_MAX_VERTICES};
pub use classify::{canonical_hash, ClassEntry, ClassTable, FormHasher, CLASS_TABLE_FORMAT};

use serde::{Deserialize, Serialize};

use crate::tropical::{Color, CurveGraph};

/// Symmetric matrix of edge multiplicities; the diagonal counts loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Multigraph {
    pub n: usize,
    pub adj: Vec<u8>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Self { n, adj: vec![0; n * n] }
    }

    pub fn from_curve(g: &CurveGraph) -> Self {
        let mut m = Self::new(g.vertex_count());
        for &(u, v) in &g.edges {
            m.add_edge(u, v);
        }
        m
    }

    pub fn at(&self, u: usize, v: usize) -> u8 {
        self.adj[u * self.n + v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] += 1;
        if u != v {
            self.adj[v * self.n + u] += 1;
        }
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).map(|u| self.at(v, u) as usize).sum::<usize>() + self.at(v, v) as usize
    }

    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for u in 0..self.n {
                    if self.at(v, u) > 0 && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        count
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u..self.n {
                for _ in 0..self.at(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Twin vertices have identical rows apart from their mutual entry.
    fn twins(&self, u: usize, v: usize) -> bool {
        self.at(u, u) == self.at(v, v) && (0..self.n).all(|w| w == u || w == v || self.at(u, w) == self.at(v, w))
    }
}

/// Canonical representative of an isomorphism class: the edge list under
/// the canonical labeling, with the vertex colors in label order when
/// colors take part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub vertices: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub colors: Vec<Option<Color>>,
    pub edges: Vec<(usize, usize)>,
}

fn color_code(c: Option<Color>) -> u32 {
    match c {
        None => 0,
        Some(Color::Blue) => 1,
        Some(Color::Red) => 2,
    }
}

/// Iterates neighborhood refinement until the number of cells stops
/// growing. Cell numbers stay ordered by the previous numbering, so the
/// result depends only on the isomorphism type of the colored graph.
fn refine(g: &Multigraph, colors: &mut Vec<u32>) {
    let n = g.n;
    let mut cells = {
        let mut c = colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let keys: Vec<(u32, Vec<(u32, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u8)> =
                    (0..n).filter(|&u| g.at(v, u) > 0).map(|u| (colors[u], g.at(v, u))).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut distinct = keys.clone();
        distinct.sort();
        distinct.dedup();
        *colors = keys.iter().map(|k| distinct.binary_search(k).expect("key present") as u32).collect();
        if distinct.len() == cells {
            return;
        }
        cells = distinct.len();
    }
}

fn encode(g: &Multigraph, colors: &[u32]) -> Vec<u8> {
    let n = g.n;
    let mut inv = vec![0; n];
    for (v, &c) in colors.iter().enumerate() {
        inv[c as usize] = v;
    }
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(g.at(inv[i], inv[j]));
        }
    }
    out
}

fn search(g: &Multigraph, mut colors: Vec<u32>, best: &mut Option<(Vec<u8>, Vec<u32>)>) {
    refine(g, &mut colors);
    let n = g.n;
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let enc = encode(g, &colors);
        if best.as_ref().is_none_or(|(b, _)| enc < *b) {
            *best = Some((enc, colors));
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        if tried.iter().any(|&u| g.twins(u, v)) {
            continue;
        }
        tried.push(v);
        let next: Vec<u32> =
            colors.iter().enumerate().map(|(u, &c)| 2 * c + u32::from(c as usize == target && u != v)).collect();
        search(g, next, best);
    }
}

/// Canonical labeling: position of every vertex in the canonical order.
pub(crate) fn canonical_labeling(g: &Multigraph, initial: &[u32]) -> Vec<u32> {
    let keys: Vec<(u32, usize)> = (0..g.n).map(|v| (initial[v], g.degree(v))).collect();
    let mut distinct = keys.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let colors: Vec<u32> = keys.iter().map(|k| distinct.binary_search(k).expect("present") as u32).collect();
    let mut best = None;
    search(g, colors, &mut best);
    best.map(|(_, labels)| labels).unwrap_or_default()
}

pub(crate) fn multigraph_form(g: &Multigraph) -> CanonicalForm {
    let labels = canonical_labeling(g, &vec![0; g.n]);
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (labels[u] as usize, labels[v] as usize);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    CanonicalForm { vertices: g.n, colors: Vec::new(), edges }
}

/// Canonical form of a curve graph, optionally respecting vertex colors.
pub fn canonical_form(g: &CurveGraph, use_colors: bool) -> CanonicalForm {
    let m = Multigraph::from_curve(g);
    let initial: Vec<u32> = if use_colors { g.colors.iter().map(|&c| color_code(c)).collect() } else { vec![0; m.n] };
    let labels = canonical_labeling(&m, &initial);
    let mut edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (labels[u] as usize, labels[v] as usize);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let colors = if use_colors {
        let mut c = vec![None; m.n];
        for (v, &l) in labels.iter().enumerate() {
            c[l as usize] = g.colors[v];
        }
        c
    } else {
        Vec::new()
    };
    CanonicalForm { vertices: m.n, colors, edges }
}

/// Explicit isomorphism search, independent of canonical labeling. Returns
/// the image of every vertex of `g`.
pub fn find_isomorphism(g: &CurveGraph, h: &CurveGraph, use_colors: bool) -> Option<Vec<usize>> {
    let (a, b) = (Multigraph::from_curve(g), Multigraph::from_curve(h));
    if a.n != b.n || g.edges.len() != h.edges.len() {
        return None;
    }
    let n = a.n;
    let compatible = |u: usize, v: usize| {
        a.degree(u) == b.degree(v) && a.at(u, u) == b.at(v, v) && (!use_colors || g.colors[u] == h.colors[v])
    };
    // visit vertices of g so that each one after the first of its component
    // has an already placed neighbor
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in 0..n {
                if a.at(v, u) > 0 && !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    fn extend(
        depth: usize,
        order: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        a: &Multigraph,
        b: &Multigraph,
        compatible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let Some(&u) = order.get(depth) else { return true };
        for v in 0..b.n {
            if used[v] || !compatible(u, v) {
                continue;
            }
            if order[..depth].iter().any(|&w| a.at(u, w) != b.at(v, map[w])) {
                continue;
            }
            map[u] = v;
            used[v] = true;
            if extend(depth + 1, order, map, used, a, b, compatible) {
                return true;
            }
            used[v] = false;
        }
        false
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, &mut map, &mut used, &a, &b, &compatible).then_some(map)
}

/// Relabels `g` so that vertex `v` becomes `perm[v]`.
pub fn relabel(g: &CurveGraph, perm: &[usize]) -> CurveGraph {
    let n = g.vertex_count();
    let mut colors = vec![None; n];
    let mut rays = vec![0; n];
    let mut cells = vec![Vec::new(); if g.cells.is_empty() { 0 } else { n }];
    for v in 0..n {
        colors[perm[v]] = g.colors[v];
        rays[perm[v]] = g.rays[v];
        if !g.cells.is_empty() {
            cells[perm[v]] = g.cells[v].clone();
        }
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
        .collect();
    edges.sort_unstable();
    CurveGraph { colors, edges, rays, cells }
}
