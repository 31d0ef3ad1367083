//! Triangulations as sets of bitmask cells: validation, unimodularity,
//! regularity, placing triangulations, bistellar flips and symmetry.

mod flips;
mod regularity;
mod symmetry;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use flips::{circuits, flip_along, flips, Circuit};
pub use regularity::{is_regular, is_regular_with, regularity_rows, Formulation};
pub use symmetry::{apply_symmetry, builtin_symmetry, orbit_canonical_rep, BuiltinSymmetry, Perm, SymmetryGroup};

use crate::arith::int::SMALL;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, PointConfiguration};

/// A simplex given by the set of its vertex indices.
///
/// Cells order like their sorted index tuples.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(pub u64);

impl Cell {
    pub fn from_indices(indices: &[usize]) -> Self {
        Cell(indices.iter().fold(0, |m, &i| m | 1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn iter(self) -> Bits {
        Bits(self.0)
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Writes the indices into `buf` and returns the filled prefix.
    pub fn fill(self, buf: &mut [usize; SMALL]) -> &[usize] {
        let mut n = 0;
        for i in self.iter() {
            buf[n] = i;
            n += 1;
        }
        &buf[..n]
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff.trailing_zeros();
        let (mine, theirs) = if self.0 >> low & 1 == 1 { (self.0, other.0) } else { (other.0, self.0) };
        // `mine` holds the smaller element at the first difference unless
        // `theirs` has already run out of elements.
        let ord = if theirs >> low == 0 { Ordering::Greater } else { Ordering::Less };
        if mine == self.0 {
            ord
        } else {
            ord.reverse()
        }
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Iterator over the set bits of a mask, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Maximal simplices of a triangulation, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Triangulation {
    cells: Vec<Cell>,
}

impl Triangulation {
    pub fn new(mut cells: Vec<Cell>) -> Self {
        cells.sort_unstable();
        Self { cells }
    }

    pub fn from_index_cells(cells: &[Vec<usize>]) -> Self {
        Self::new(cells.iter().map(|c| Cell::from_indices(c)).collect())
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_cells(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|c| c.indices()).collect()
    }

    /// Mask of points used by some cell.
    pub fn used_points(&self) -> u64 {
        self.cells.iter().fold(0, |m, c| m | c.0)
    }

    /// True when every cell has normalized volume 1.
    pub fn is_unimodular(&self, geom: &Geometry) -> bool {
        self.cells.iter().all(|&c| geom.det_cell(c).abs() == 1)
    }

    /// True when every point of the configuration is a vertex of some cell.
    pub fn is_full(&self, geom: &Geometry) -> bool {
        self.used_points() == geom.all_points()
    }

    /// `(facet, apex, cell index)` for every facet of every cell, sorted.
    pub(crate) fn facet_incidences(&self) -> Vec<(u64, u8, u16)> {
        let mut out = Vec::with_capacity(self.cells.len() * SMALL);
        for (ci, c) in self.cells.iter().enumerate() {
            for v in c.iter() {
                out.push((c.0 & !(1 << v), v as u8, ci as u16));
            }
        }
        out.sort_unstable();
        out
    }

    /// Checks that the cells form a triangulation of the whole polytope:
    /// full-dimensional simplices whose volumes add up to the polytope's,
    /// interior facets shared by exactly two cells lying on opposite sides,
    /// and unshared facets on the boundary.
    pub fn validate(&self, geom: &Geometry) -> Result<()> {
        let d = geom.dim();
        let all = geom.all_points();
        if self.cells.is_empty() {
            return Err(Error::Triangulation("no cells".into()));
        }
        let mut total = 0u64;
        for (i, &c) in self.cells.iter().enumerate() {
            if c.0 & !all != 0 {
                return Err(Error::Triangulation(format!("cell {c:?} uses unknown points")));
            }
            if c.len() != d + 1 {
                return Err(Error::Triangulation(format!("cell {c:?} is not a {d}-simplex")));
            }
            let det = geom.det_cell(c);
            if det == 0 {
                return Err(Error::Triangulation(format!("cell {c:?} is degenerate")));
            }
            if i > 0 && self.cells[i - 1] == c {
                return Err(Error::Triangulation(format!("cell {c:?} is repeated")));
            }
            total += det.unsigned_abs() as u64;
        }
        if total != geom.volume() {
            return Err(Error::Triangulation(format!(
                "cell volumes sum to {total}, polytope volume is {}",
                geom.volume()
            )));
        }
        let inc = self.facet_incidences();
        let mut i = 0;
        while i < inc.len() {
            let facet = inc[i].0;
            let mut j = i + 1;
            while j < inc.len() && inc[j].0 == facet {
                j += 1;
            }
            match j - i {
                1 => {
                    let side = |q: usize| side_of(geom, facet, q);
                    let apex = side(inc[i].1 as usize);
                    if (0..geom.len()).any(|q| side(q) == -apex) {
                        return Err(Error::Triangulation(format!(
                            "facet {:?} has one cell but is not on the boundary",
                            Cell(facet)
                        )));
                    }
                }
                2 => {
                    let a = side_of(geom, facet, inc[i].1 as usize);
                    let b = side_of(geom, facet, inc[i + 1].1 as usize);
                    if a == b {
                        return Err(Error::Triangulation(format!(
                            "cells on facet {:?} overlap",
                            Cell(facet)
                        )));
                    }
                }
                k => {
                    return Err(Error::Triangulation(format!("facet {:?} lies in {k} cells", Cell(facet))));
                }
            }
            i = j;
        }
        Ok(())
    }

    /// Cells written with the configuration's labels, joined by commas. With
    /// single-character labels a cell is the plain concatenation (`BcEeI`);
    /// otherwise labels within a cell are separated by dots.
    pub fn to_letters(&self, config: &PointConfiguration) -> String {
        let sep = if config.single_char_labels() { "" } else { "." };
        self.cells
            .iter()
            .map(|c| c.iter().map(|i| config.labels()[i].as_str()).collect::<Vec<_>>().join(sep))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_letters(s: &str, config: &PointConfiguration) -> Result<Self> {
        let lookup: HashMap<&str, usize> =
            config.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut cells = Vec::new();
        for part in s.trim().split(',') {
            let labels: Vec<String> = if part.contains('.') {
                part.split('.').map(str::to_owned).collect()
            } else {
                part.chars().map(String::from).collect()
            };
            let mut mask = 0u64;
            for l in &labels {
                let i = lookup
                    .get(l.as_str())
                    .ok_or_else(|| Error::Parse(format!("unknown label {l:?} in {part:?}")))?;
                if mask >> i & 1 == 1 {
                    return Err(Error::Parse(format!("repeated label {l:?} in {part:?}")));
                }
                mask |= 1 << i;
            }
            cells.push(Cell(mask));
        }
        Ok(Self::new(cells))
    }
}

/// Sign of `det(facet points in index order, q)`.
pub(crate) fn side_of(geom: &Geometry, facet: u64, q: usize) -> i32 {
    let mut buf = [0usize; SMALL];
    let n = Cell(facet).fill(&mut buf).len();
    buf[n] = q;
    geom.det(&buf[..=n]).signum() as i32
}

/// Placing triangulation of the points in `order`, which may be any subset
/// of the configuration. Points inside the current hull stay unused.
pub fn place(geom: &Geometry, order: &[usize]) -> Result<Triangulation> {
    let d = geom.dim();
    let mut initial = Vec::with_capacity(d + 1);
    for &p in order {
        initial.push(p);
        if geom.rank(&initial) < initial.len() {
            initial.pop();
        }
        if initial.len() == d + 1 {
            break;
        }
    }
    if initial.len() < d + 1 {
        return Err(Error::Degenerate(format!("points do not span dimension {d}")));
    }
    let mut t = Triangulation { cells: vec![Cell::from_indices(&initial)] };
    let start = Cell::from_indices(&initial);
    for &p in order {
        if start.contains(p) {
            continue;
        }
        let inc = t.facet_incidences();
        let mut added = Vec::new();
        let mut i = 0;
        while i < inc.len() {
            let shared = i + 1 < inc.len() && inc[i + 1].0 == inc[i].0;
            if !shared {
                let (facet, apex, _) = inc[i];
                let s = side_of(geom, facet, p);
                if s != 0 && s == -side_of(geom, facet, apex as usize) {
                    added.push(Cell(facet | 1 << p));
                }
                i += 1;
            } else {
                i += 2;
            }
        }
        t.cells.extend(added);
    }
    t.cells.sort_unstable();
    Ok(t)
}

/// Placing triangulation in the given order, or configuration order.
pub fn placing_triangulation(geom: &Geometry, order: Option<&[usize]>) -> Result<Triangulation> {
    match order {
        None => place(geom, &(0..geom.len()).collect::<Vec<_>>()),
        Some(order) => {
            let mut seen = vec![false; geom.len()];
            for &p in order {
                if p >= geom.len() || std::mem::replace(&mut seen[p], true) {
                    return Err(Error::Configuration(format!("placing order is not a permutation: {order:?}")));
                }
            }
            if seen.contains(&false) {
                return Err(Error::Configuration("placing order misses points".into()));
            }
            place(geom, order)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cayley_config, simplex_lattice_points};

    pub(crate) fn square() -> Geometry {
        Geometry::new(
            PointConfiguration::with_default_labels(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn cell_order_is_tuple_order() {
        let cells = [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3], vec![0, 4, 5], vec![2, 3, 4]];
        for a in &cells {
            for b in &cells {
                assert_eq!(Cell::from_indices(a).cmp(&Cell::from_indices(b)), a.cmp(b), "{a:?} {b:?}");
            }
        }
        assert!(Cell::from_indices(&[0, 1]) < Cell::from_indices(&[0, 1, 2]));
        assert!(Cell::from_indices(&[0, 2]) > Cell::from_indices(&[0, 1, 5]));
    }

    #[test]
    fn placing_small_cases() {
        let tri = Geometry::new(simplex_lattice_points(2, 1).unwrap()).unwrap();
        assert_eq!(placing_triangulation(&tri, None).unwrap().index_cells(), vec![vec![0, 1, 2]]);

        let g = square();
        let t = placing_triangulation(&g, None).unwrap();
        assert_eq!(t.index_cells(), vec![vec![0, 1, 2], vec![1, 2, 3]]);
        t.validate(&g).unwrap();
        assert!(t.is_unimodular(&g));
        assert!(placing_triangulation(&g, Some(&[0, 1, 2])).is_err());
    }

    #[test]
    fn placing_cayley_conserves_volume() {
        let q = simplex_lattice_points(3, 2).unwrap();
        let g = Geometry::new(cayley_config(&q, &q).unwrap()).unwrap();
        let t = placing_triangulation(&g, None).unwrap();
        t.validate(&g).unwrap();
        let total: u64 = t.cells().iter().map(|&c| g.det_cell(c).unsigned_abs() as u64).sum();
        assert_eq!(total, 32);
    }

    #[test]
    fn placing_skips_interior_points() {
        let g = Geometry::new(simplex_lattice_points(2, 3).unwrap()).unwrap();
        // vertices first, so every later point is inside
        let order = [0, 6, 9, 1, 2, 3, 4, 5, 7, 8];
        let t = placing_triangulation(&g, Some(&order)).unwrap();
        assert_eq!(t.index_cells(), vec![vec![0, 6, 9]]);
        assert!(!t.is_unimodular(&g));
        assert!(!t.is_full(&g));
        t.validate(&g).unwrap();
    }

    #[test]
    fn validation_rejects_broken_cell_sets() {
        let g = square();
        let overlapping = Triangulation::from_index_cells(&[vec![0, 1, 2], vec![0, 1, 3]]);
        assert!(overlapping.validate(&g).is_err());
        let partial = Triangulation::from_index_cells(&[vec![0, 1, 2]]);
        assert!(partial.validate(&g).is_err());
        let crossing = Triangulation::from_index_cells(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        assert!(crossing.validate(&g).is_err());
        let degenerate = Geometry::new(simplex_lattice_points(2, 2).unwrap()).unwrap();
        let flat = Triangulation::from_index_cells(&[vec![0, 1, 3]]);
        assert!(flat.validate(&degenerate).is_err());
    }

    #[test]
    fn letters_round_trip() {
        let g = square();
        let t = placing_triangulation(&g, None).unwrap();
        let s = t.to_letters(g.config());
        assert_eq!(s, "ABC,BCD");
        assert_eq!(Triangulation::from_letters(&s, g.config()).unwrap(), t);
        assert!(Triangulation::from_letters("ABX", g.config()).is_err());
        assert!(Triangulation::from_letters("AAB", g.config()).is_err());
    }
}
