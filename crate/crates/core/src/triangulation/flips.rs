use serde::{Deserialize, Serialize};

use super::{Bits, Cell, Triangulation};
use crate::arith::int::SMALL;
use crate::geometry::Geometry;

/// An oriented circuit. `positive` is the side whose triangulation
/// (`Z \ {z}` for `z` in `positive`) is currently in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Circuit {
    pub positive: u64,
    pub negative: u64,
}

impl Circuit {
    pub fn support(self) -> u64 {
        self.positive | self.negative
    }

    pub fn reversed(self) -> Self {
        Circuit { positive: self.negative, negative: self.positive }
    }
}

/// A circuit with its primitive affine dependence, positive on
/// `circuit.positive`.
#[derive(Clone, Debug)]
pub struct Dependence {
    pub circuit: Circuit,
    pub coeffs: Vec<(usize, i128)>,
}

fn primitive_sparse(mut coeffs: Vec<(usize, i128)>) -> Vec<(usize, i128)> {
    coeffs.retain(|&(_, c)| c != 0);
    let g = coeffs.iter().fold(0i128, |g, &(_, c)| num_integer::Integer::gcd(&g, &c));
    if g > 1 {
        for (_, c) in coeffs.iter_mut() {
            *c /= g;
        }
    }
    coeffs
}

fn from_coeffs(coeffs: Vec<(usize, i128)>) -> Dependence {
    let coeffs = primitive_sparse(coeffs);
    let mut circuit = Circuit { positive: 0, negative: 0 };
    for &(i, c) in &coeffs {
        if c > 0 {
            circuit.positive |= 1 << i;
        } else {
            circuit.negative |= 1 << i;
        }
    }
    Dependence { circuit, coeffs }
}

/// Dependence among the `dim + 2` points of two cells sharing a facet,
/// oriented positive at the apex `a`.
fn facet_dependence(geom: &Geometry, points: u64, a: usize) -> Dependence {
    let mut all = [0usize; SMALL];
    let m = Cell(points).fill(&mut all).len();
    let mut coeffs = Vec::with_capacity(m);
    let mut minor = [0usize; SMALL];
    for j in 0..m {
        let mut k = 0;
        for (i, &p) in all[..m].iter().enumerate() {
            if i != j {
                minor[k] = p;
                k += 1;
            }
        }
        let det = geom.det(&minor[..k]);
        coeffs.push((all[j], if j % 2 == 0 { det } else { -det }));
    }
    let sign = coeffs.iter().find(|&&(i, _)| i == a).map_or(1, |&(_, c)| c.signum());
    for (_, c) in coeffs.iter_mut() {
        *c *= sign;
    }
    from_coeffs(coeffs)
}

/// If `cell` contains `p`, the dependence expressing `p` through the
/// vertices of its carrier face, positive at `p`.
fn insertion_dependence(geom: &Geometry, cell: Cell, p: usize) -> Option<Dependence> {
    let mut pts = [0usize; SMALL];
    let k = cell.fill(&mut pts).len();
    let det = geom.det(&pts[..k]);
    let mut coeffs = Vec::with_capacity(k + 1);
    coeffs.push((p, det.abs()));
    for j in 0..k {
        let mut replaced = pts;
        replaced[j] = p;
        let dj = geom.det(&replaced[..k]) * det.signum();
        if dj < 0 {
            return None;
        }
        coeffs.push((pts[j], -dj));
    }
    Some(from_coeffs(coeffs))
}

/// Every circuit whose current side is realized in `t`: one per interior
/// facet and one per unused point, deduplicated by support.
pub fn circuits(geom: &Geometry, t: &Triangulation) -> Vec<Dependence> {
    let mut out: Vec<Dependence> = Vec::new();
    let mut seen: Vec<u64> = Vec::new();
    let inc = t.facet_incidences();
    for pair in inc.windows(2) {
        let ((f, a, ca), (g, _, cb)) = (pair[0], pair[1]);
        if f != g {
            continue;
        }
        let points = t.cells[ca as usize].0 | t.cells[cb as usize].0;
        let dep = facet_dependence(geom, points, a as usize);
        let support = dep.circuit.support();
        if !seen.contains(&support) {
            seen.push(support);
            out.push(dep);
        }
    }
    let unused = geom.all_points() & !t.used_points();
    for p in Bits(unused) {
        let dep = t
            .cells
            .iter()
            .find_map(|&c| insertion_dependence(geom, c, p))
            .expect("a triangulation covers every point");
        let support = dep.circuit.support();
        if !seen.contains(&support) {
            seen.push(support);
            out.push(dep);
        }
    }
    out
}

/// Applies the flip along `circuit` if `t` contains `T+(Z) * L` for a common
/// link `L`, replacing it by `T-(Z) * L`.
pub fn flip_along(t: &Triangulation, circuit: Circuit) -> Option<Triangulation> {
    let z = circuit.support();
    let mut link: Option<Vec<u64>> = None;
    for zp in Bits(circuit.positive) {
        let base = z & !(1 << zp);
        let mut l: Vec<u64> = t.cells.iter().filter(|c| c.0 & base == base).map(|c| c.0 & !base).collect();
        if l.is_empty() {
            return None;
        }
        l.sort_unstable();
        match &link {
            None => link = Some(l),
            Some(prev) if *prev == l => {}
            Some(_) => return None,
        }
    }
    let link = link?;
    let removed = |c: &Cell| Bits(circuit.positive).any(|zp| {
        let base = z & !(1 << zp);
        c.0 & base == base
    });
    let mut cells: Vec<Cell> = t.cells.iter().copied().filter(|c| !removed(c)).collect();
    for zn in Bits(circuit.negative) {
        let base = z & !(1 << zn);
        cells.extend(link.iter().map(|&r| Cell(base | r)));
    }
    Some(Triangulation::new(cells))
}

/// All bistellar flips of `t`, with the circuit oriented positive on the
/// side `t` uses. The neighbor flips back along the reversed circuit.
pub fn flips(geom: &Geometry, t: &Triangulation) -> Vec<(Circuit, Triangulation)> {
    circuits(geom, t)
        .into_iter()
        .filter_map(|dep| flip_along(t, dep.circuit).map(|n| (dep.circuit, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{simplex_lattice_points, PointConfiguration};
    use crate::triangulation::{placing_triangulation, tests::square};

    #[test]
    fn square_has_one_flip() {
        let g = square();
        let t = placing_triangulation(&g, None).unwrap();
        let f = flips(&g, &t);
        assert_eq!(f.len(), 1);
        let (c, other) = &f[0];
        assert_eq!(other.index_cells(), vec![vec![0, 1, 3], vec![0, 2, 3]]);
        other.validate(&g).unwrap();
        let back = flips(&g, other);
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].0, c.reversed());
        assert_eq!(back[0].1, t);
    }

    #[test]
    fn single_triangle_has_no_flips() {
        let g = Geometry::new(simplex_lattice_points(2, 1).unwrap()).unwrap();
        let t = placing_triangulation(&g, None).unwrap();
        assert!(flips(&g, &t).is_empty());
    }

    #[test]
    fn insertion_and_deletion() {
        let g = Geometry::new(
            PointConfiguration::with_default_labels(2, vec![vec![0, 0], vec![3, 0], vec![0, 3], vec![1, 1]]).unwrap(),
        )
        .unwrap();
        let big = Triangulation::from_index_cells(&[vec![0, 1, 2]]);
        big.validate(&g).unwrap();
        let f = flips(&g, &big);
        assert_eq!(f.len(), 1);
        let stellar = &f[0].1;
        assert_eq!(stellar.len(), 3);
        stellar.validate(&g).unwrap();
        let back = flips(&g, stellar);
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].1, big);
    }

    #[test]
    fn point_on_an_edge_splits_both_neighbors() {
        let pts = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1]];
        let g5 = Geometry::new(PointConfiguration::with_default_labels(2, pts).unwrap()).unwrap();
        let t = Triangulation::from_index_cells(&[vec![0, 1, 3], vec![0, 2, 3]]);
        t.validate(&g5).unwrap();
        let f = flips(&g5, &t);
        let inserted: Vec<_> = f.iter().filter(|(_, n)| n.len() == 4).collect();
        assert_eq!(inserted.len(), 1);
        inserted[0].1.validate(&g5).unwrap();
    }

    #[test]
    fn involution_on_cubic_triangulations() {
        let g = Geometry::new(simplex_lattice_points(2, 3).unwrap()).unwrap();
        let mut t = placing_triangulation(&g, None).unwrap();
        for step in 0..40 {
            let f = flips(&g, &t);
            assert!(!f.is_empty());
            for (c, n) in &f {
                n.validate(&g).unwrap();
                let back = flip_along(n, c.reversed()).expect("flip is reversible");
                assert_eq!(back, t);
            }
            t = f[step % f.len()].1.clone();
        }
    }
}
