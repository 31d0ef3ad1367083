use std::collections::{HashMap, HashSet, VecDeque};
use std::str::FromStr;

use num_traits::{One, Signed};

use super::{Cell, Triangulation};
use crate::arith::{int, Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::geometry::{Block, Geometry, PointConfiguration};

/// A permutation of point indices: point `i` maps to `perm[i]`.
pub type Perm = Vec<u8>;

/// Default bound on the number of group elements.
pub const DEFAULT_ORDER_BOUND: usize = 100_000;

/// A group of affine lattice automorphisms of a configuration, stored as the
/// full list of its point permutations (identity first).
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

/// Checks that `perm` is induced by an affine lattice isomorphism, solving
/// for the map on the affine basis and verifying it on every point.
fn validate(geom: &Geometry, perm: &[usize]) -> Result<()> {
    let n = geom.len();
    let d = geom.dim();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Symmetry(format!("{perm:?} is not a permutation of {n} points")));
    }
    let hom_row = |i: usize| -> Vec<Rational> { geom.hom(i)[..=d].iter().map(|&x| int(x as i64)).collect() };
    let basis = geom.affine_basis();
    let b = RationalMatrix::from_rows(basis.iter().map(|&i| hom_row(i)).collect())?;
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(d + 1);
    for c in 0..=d {
        let rhs: Vec<Rational> = basis.iter().map(|&i| hom_row(perm[i])[c].clone()).collect();
        cols.push(b.solve(&rhs)?.expect("affine basis is independent"));
    }
    let a = RationalMatrix::from_rows((0..=d).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect())?;
    if (0..=d).any(|r| (0..=d).any(|c| !a.get(r, c).is_integer())) {
        return Err(Error::Symmetry(format!("{perm:?} is not a lattice map")));
    }
    if !a.determinant()?.abs().is_one() {
        return Err(Error::Symmetry(format!("{perm:?} does not preserve lattice volume")));
    }
    for (i, &pi) in perm.iter().enumerate() {
        let row = hom_row(i);
        let image: Vec<Rational> = (0..=d).map(|c| (0..=d).map(|k| &row[k] * a.get(k, c)).sum()).collect();
        if image != hom_row(pi) {
            return Err(Error::Symmetry(format!("{perm:?} is not affine (point {i})")));
        }
    }
    Ok(())
}

impl SymmetryGroup {
    pub fn trivial(geom: &Geometry) -> Self {
        let id: Perm = (0..geom.len() as u8).collect();
        Self { generators: Vec::new(), elements: vec![id] }
    }

    /// Validates the generators and expands the group they generate.
    pub fn new(geom: &Geometry, generators: Vec<Vec<usize>>, order_bound: usize) -> Result<Self> {
        for g in &generators {
            validate(geom, g)?;
        }
        let generators: Vec<Perm> = generators.into_iter().map(|g| g.into_iter().map(|x| x as u8).collect()).collect();
        let id: Perm = (0..geom.len() as u8).collect();
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in &generators {
                let composed: Perm = e.iter().map(|&x| g[x as usize]).collect();
                if seen.insert(composed.clone()) {
                    if elements.len() == order_bound {
                        return Err(Error::GroupTooLarge { bound: order_bound });
                    }
                    elements.push(composed.clone());
                    queue.push_back(composed);
                }
            }
        }
        Ok(Self { generators, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    /// Smallest cell list in the orbit of `t`.
    pub fn canonical(&self, t: &Triangulation) -> Triangulation {
        let mut best = t.cells.clone();
        let mut buf = Vec::with_capacity(t.cells.len());
        for g in &self.elements[1..] {
            buf.clear();
            buf.extend(t.cells.iter().map(|&c| permute_cell(c, g)));
            buf.sort_unstable();
            if buf < best {
                std::mem::swap(&mut buf, &mut best);
            }
        }
        Triangulation { cells: best }
    }
}

fn permute_cell(c: Cell, g: &[u8]) -> Cell {
    Cell(c.iter().fold(0u64, |m, i| m | 1 << g[i]))
}

/// Image of `t` under a group element.
pub fn apply_symmetry(t: &Triangulation, g: &[u8]) -> Triangulation {
    Triangulation::new(t.cells.iter().map(|&c| permute_cell(c, g)).collect())
}

/// Lexicographically smallest cell list among all images of `t`.
pub fn orbit_canonical_rep(t: &Triangulation, grp: &SymmetryGroup) -> Triangulation {
    grp.canonical(t)
}

/// Named symmetry groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinSymmetry {
    Trivial,
    /// `S3` on the barycentric coordinates of `3Δ2`.
    Simplex3d2,
    /// `S4 × Z2` on `C(2Δ3, 2Δ3)`.
    Cayley2d3,
    /// Full barycentric symmetric group of any dilated simplex.
    Simplex,
    /// Barycentric symmetries of both factors of a Cayley configuration of
    /// dilated simplices, with the factor swap when the dilations agree.
    Cayley,
}

impl FromStr for BuiltinSymmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "trivial" => Self::Trivial,
            "simplex-3d2" | "s3" => Self::Simplex3d2,
            "cayley-2d3-2d3" | "s4xz2" => Self::Cayley2d3,
            "simplex" => Self::Simplex,
            "cayley" => Self::Cayley,
            _ => return Err(Error::Parse(format!("unknown symmetry group {s:?}"))),
        })
    }
}

/// `(dim, dilation)` when the points are exactly the lattice points of a
/// dilated standard simplex.
fn dilated_simplex(points: &[Vec<i64>]) -> Option<(usize, i64)> {
    let dim = points.first()?.len();
    let n = points.iter().map(|p| p.iter().sum::<i64>()).max()?;
    let ok = points.iter().all(|p| p.iter().all(|&x| x >= 0));
    let count = (1..=dim as i64).fold(1i64, |acc, i| acc * (n + i) / i);
    (ok && n > 0 && count == points.len() as i64).then_some((dim, n))
}

/// Point permutation induced by permuting barycentric coordinates.
fn barycentric_perm(points: &[Vec<i64>], n: i64, sigma: &[usize]) -> Option<Vec<usize>> {
    let index: HashMap<&[i64], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    points
        .iter()
        .map(|p| {
            let mut bary = p.clone();
            bary.push(n - p.iter().sum::<i64>());
            let mut image = vec![0; bary.len()];
            for (k, &s) in sigma.iter().enumerate() {
                image[s] = bary[k];
            }
            image.pop();
            index.get(image.as_slice()).copied()
        })
        .collect()
}

fn symmetric_generators(k: usize) -> Vec<Vec<usize>> {
    if k < 2 {
        return Vec::new();
    }
    let mut swap: Vec<usize> = (0..k).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    vec![swap, cycle]
}

fn simplex_generators(config: &PointConfiguration, expect: Option<(usize, i64)>) -> Result<Vec<Vec<usize>>> {
    let shape = dilated_simplex(config.points()).ok_or_else(|| Error::Symmetry("not a dilated simplex".into()))?;
    if expect.is_some_and(|e| e != shape) {
        return Err(Error::Symmetry(format!("expected {expect:?}, configuration is {shape:?}")));
    }
    let (dim, n) = shape;
    symmetric_generators(dim + 1)
        .iter()
        .map(|s| barycentric_perm(config.points(), n, s).ok_or_else(|| Error::Symmetry("not closed".into())))
        .collect()
}

fn cayley_generators(config: &PointConfiguration, expect: Option<(usize, i64)>) -> Result<Vec<Vec<usize>>> {
    let blocks = config.cayley_blocks().ok_or(Error::NotCayley)?;
    let split = |b: Block| -> Vec<usize> { (0..config.len()).filter(|&i| blocks[i] == b).collect() };
    let (first, second) = (split(Block::First), split(Block::Second));
    let tails = |idx: &[usize]| -> Vec<Vec<i64>> { idx.iter().map(|&i| config.points()[i][2..].to_vec()).collect() };
    let (t1, t2) = (tails(&first), tails(&second));
    let s1 = dilated_simplex(&t1).ok_or_else(|| Error::Symmetry("first factor is not a dilated simplex".into()))?;
    let s2 = dilated_simplex(&t2).ok_or_else(|| Error::Symmetry("second factor is not a dilated simplex".into()))?;
    if let Some(e) = expect {
        if s1 != e || s2 != e {
            return Err(Error::Symmetry(format!("expected both factors {e:?}, found {s1:?} and {s2:?}")));
        }
    }
    let mut gens = Vec::new();
    for sigma in symmetric_generators(s1.0 + 1) {
        let p1 = barycentric_perm(&t1, s1.1, &sigma).expect("simplex is closed");
        let p2 = barycentric_perm(&t2, s2.1, &sigma).expect("simplex is closed");
        let mut perm: Vec<usize> = (0..config.len()).collect();
        for (k, &i) in first.iter().enumerate() {
            perm[i] = first[p1[k]];
        }
        for (k, &i) in second.iter().enumerate() {
            perm[i] = second[p2[k]];
        }
        gens.push(perm);
    }
    if s1 == s2 {
        let index: HashMap<&[i64], usize> =
            config.points().iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let swap: Vec<usize> = config
            .points()
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q.swap(0, 1);
                index[q.as_slice()]
            })
            .collect();
        gens.push(swap);
    }
    Ok(gens)
}

/// Builds a named group on `geom`, checking that the configuration has the
/// expected shape.
pub fn builtin_symmetry(geom: &Geometry, kind: BuiltinSymmetry) -> Result<SymmetryGroup> {
    let config = geom.config();
    let gens = match kind {
        BuiltinSymmetry::Trivial => return Ok(SymmetryGroup::trivial(geom)),
        BuiltinSymmetry::Simplex3d2 => simplex_generators(config, Some((2, 3)))?,
        BuiltinSymmetry::Simplex => simplex_generators(config, None)?,
        BuiltinSymmetry::Cayley2d3 => cayley_generators(config, Some((3, 2)))?,
        BuiltinSymmetry::Cayley => cayley_generators(config, None)?,
    };
    SymmetryGroup::new(geom, gens, DEFAULT_ORDER_BOUND)
}
