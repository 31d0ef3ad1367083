//! Lattice point configurations, Cayley configurations, affine reduction,
//! normalized volumes and regular subdivisions.

mod config;
mod reduce;
mod subdivision;

use std::sync::OnceLock;

use num_traits::ToPrimitive;

pub use config::{block_label, cayley_config, simplex_lattice_points, Block, PointConfiguration};
pub use reduce::{affine_reduce, AffineTransform};
pub use subdivision::{regular_subdivision, Subdivision, WeightVector};

use crate::arith::int::{det_bigint, det_small, SMALL};
use crate::error::{Error, Result};
use crate::triangulation::{place, Cell};

/// Largest supported number of points (cells are stored as 64-bit masks).
pub const MAX_POINTS: usize = 64;
/// Largest supported affine dimension.
pub const MAX_DIM: usize = SMALL - 2;
/// Largest supported absolute reduced coordinate.
pub const MAX_COORD: i64 = 1 << 16;

/// A point configuration together with its full-dimensional reduction and
/// the derived data every algorithm needs.
#[derive(Debug)]
pub struct Geometry {
    config: PointConfiguration,
    transform: AffineTransform,
    coords: Vec<Vec<i64>>,
    hom: Vec<[i128; SMALL]>,
    affine_basis: Vec<usize>,
    volume: OnceLock<u64>,
}

impl Geometry {
    pub fn new(config: PointConfiguration) -> Result<Self> {
        if config.len() > MAX_POINTS {
            return Err(Error::Limit(format!("{} points (at most {MAX_POINTS})", config.len())));
        }
        let (reduced, transform) = affine_reduce(&config)?;
        let dim = reduced.ambient_dim();
        if dim > MAX_DIM {
            return Err(Error::Limit(format!("affine dimension {dim} (at most {MAX_DIM})")));
        }
        if reduced.points().iter().flatten().any(|x| x.abs() > MAX_COORD) {
            return Err(Error::Limit(format!("reduced coordinates exceed {MAX_COORD}")));
        }
        let coords = reduced.points().to_vec();
        let hom = coords
            .iter()
            .map(|p| {
                let mut row = [0i128; SMALL];
                row[0] = 1;
                for (k, &x) in p.iter().enumerate() {
                    row[k + 1] = x as i128;
                }
                row
            })
            .collect();
        let mut g = Self { config, transform, coords, hom, affine_basis: Vec::new(), volume: OnceLock::new() };
        let mut basis = Vec::with_capacity(dim + 1);
        for i in 0..g.len() {
            basis.push(i);
            if g.rank(&basis) < basis.len() {
                basis.pop();
            }
            if basis.len() == dim + 1 {
                break;
            }
        }
        g.affine_basis = basis;
        Ok(g)
    }

    pub fn config(&self) -> &PointConfiguration {
        &self.config
    }

    pub fn transform(&self) -> &AffineTransform {
        &self.transform
    }

    /// Affine dimension of the configuration.
    pub fn dim(&self) -> usize {
        self.transform.basis.len()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Points in reduced (full-dimensional) coordinates.
    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    /// `(1, x)` for point `i`, padded with zeros.
    pub fn hom(&self, i: usize) -> &[i128; SMALL] {
        &self.hom[i]
    }

    /// The first `dim + 1` affinely independent points in configuration order.
    pub fn affine_basis(&self) -> &[usize] {
        &self.affine_basis
    }

    pub fn all_points(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Signed determinant of the homogeneous coordinates of `dim + 1` points,
    /// in the given order.
    pub fn det(&self, points: &[usize]) -> i128 {
        let n = self.dim() + 1;
        debug_assert_eq!(points.len(), n);
        let mut m = [[0i128; SMALL]; SMALL];
        for (row, &p) in m.iter_mut().zip(points) {
            *row = self.hom[p];
        }
        det_small(&m, n).unwrap_or_else(|| {
            let rows: Vec<Vec<i64>> =
                points.iter().map(|&p| self.hom[p][..n].iter().map(|&x| x as i64).collect()).collect();
            det_bigint(&rows).to_i128().expect("determinant exceeds i128 despite coordinate bounds")
        })
    }

    /// Signed determinant of a cell, points in increasing index order.
    pub fn det_cell(&self, cell: Cell) -> i128 {
        let mut buf = [0usize; SMALL];
        let pts = cell.fill(&mut buf);
        self.det(pts)
    }

    /// Affine rank (number of affinely independent points) of a point set.
    pub fn rank(&self, points: &[usize]) -> usize {
        let cols = self.dim() + 1;
        let mut rows: Vec<[i128; SMALL]> = points.iter().map(|&p| self.hom[p]).collect();
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for r in rows.iter_mut().skip(rank + 1) {
                let f = r[col];
                if f == 0 {
                    continue;
                }
                let mut g = 0i128;
                for (x, &pv) in r.iter_mut().zip(&pivot) {
                    *x = *x * pivot[col] - f * pv;
                    g = num_integer::Integer::gcd(&g, x);
                }
                if g > 1 {
                    for x in r.iter_mut() {
                        *x /= g;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Normalized volume of the whole polytope.
    pub fn volume(&self) -> u64 {
        *self.volume.get_or_init(|| {
            let order: Vec<usize> = (0..self.len()).collect();
            let t = place(self, &order).expect("geometry is full-dimensional");
            t.cells().iter().map(|&c| self.det_cell(c).unsigned_abs() as u64).sum()
        })
    }
}

/// What [`normalized_volume`] measures.
#[derive(Clone, Copy, Debug)]
pub enum VolumeTarget<'a> {
    Cell(&'a [usize]),
    Whole,
}

/// Lattice-normalized volume relative to the affine lattice of the
/// configuration. Lower-dimensional cells have volume zero.
pub fn normalized_volume(geom: &Geometry, target: VolumeTarget<'_>) -> u64 {
    match target {
        VolumeTarget::Whole => geom.volume(),
        VolumeTarget::Cell(cell) => {
            let d = geom.dim();
            if cell.len() < d + 1 || geom.rank(cell) < d + 1 {
                0
            } else if cell.len() == d + 1 {
                geom.det(cell).unsigned_abs() as u64
            } else {
                let t = place(geom, cell).expect("cell is full-dimensional");
                t.cells().iter().map(|&c| geom.det_cell(c).unsigned_abs() as u64).sum()
            }
        }
    }
}
