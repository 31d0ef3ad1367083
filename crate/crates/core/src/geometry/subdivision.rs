use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::Geometry;
use crate::arith::int::{bareiss_det, ExactInt, Overflow};
use crate::arith::{common_denominator, serde_rational_vec, Rational};
use crate::error::{Error, Result};
use crate::triangulation::{Cell, Triangulation};

/// One lifting height per point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    #[serde(with = "serde_rational_vec")]
    pub heights: Vec<Rational>,
}

impl WeightVector {
    pub fn new(heights: Vec<Rational>) -> Self {
        Self { heights }
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Heights scaled by the common denominator and shifted so the minimum
    /// is zero.
    pub fn integral(&self) -> Vec<BigInt> {
        let den = common_denominator(&self.heights);
        let ints: Vec<BigInt> = self.heights.iter().map(|h| (h * &den).to_integer()).collect();
        let min = ints.iter().min().cloned().unwrap_or_default();
        ints.into_iter().map(|x| x - &min).collect()
    }
}

/// Maximal cells of a polyhedral subdivision, each a sorted list of point
/// indices. Cells are sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subdivision {
    pub cells: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn new(mut cells: Vec<Vec<usize>>) -> Self {
        for c in cells.iter_mut() {
            c.sort_unstable();
        }
        cells.sort();
        Self { cells }
    }

    pub fn is_triangulation(&self, geom: &Geometry) -> bool {
        self.cells.iter().all(|c| c.len() == geom.dim() + 1)
    }

    /// The subdivision as a triangulation, or the first non-simplex cell.
    pub fn to_triangulation(&self, geom: &Geometry) -> Result<Triangulation> {
        if let Some(c) = self.cells.iter().find(|c| c.len() != geom.dim() + 1) {
            return Err(Error::NotTriangulation { cell: c.clone(), size: c.len() });
        }
        Ok(Triangulation::new(self.cells.iter().map(|c| Cell::from_indices(c)).collect()))
    }
}

impl From<&Triangulation> for Subdivision {
    fn from(t: &Triangulation) -> Self {
        Self { cells: t.cells().iter().map(|c| c.indices()).collect() }
    }
}

/// Lower-hull search. For every affinely independent `(dim + 1)`-subset the
/// lifted affine functional through it is found by Cramer's rule; the subset
/// spans a lower facet when no lifted point lies strictly below.
fn lower_cells<T: ExactInt>(geom: &Geometry, heights: &[T]) -> Result<Vec<u64>, Overflow> {
    let n = geom.len();
    let d = geom.dim();
    let k = d + 1;
    let mut found: Vec<u64> = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    let mut dets = vec![T::from_i64(0); k];
    loop {
        let mask = subset.iter().fold(0u64, |m, &i| m | 1 << i);
        if !found.iter().any(|&c| c & mask == mask) {
            let det = geom.det(&subset);
            if det != 0 {
                for (j, dj) in dets.iter_mut().enumerate() {
                    let m: Vec<Vec<T>> = subset
                        .iter()
                        .map(|&p| {
                            (0..k)
                                .map(|c| {
                                    if c == j {
                                        heights[p].clone()
                                    } else {
                                        T::from_i64(geom.hom(p)[c] as i64)
                                    }
                                })
                                .collect()
                        })
                        .collect();
                    *dj = bareiss_det(m)?;
                }
                let det_t = T::from_i64(det as i64);
                let positive = det > 0;
                let mut cell = 0u64;
                let mut lower = true;
                for q in 0..n {
                    let mut h = T::from_i64(0);
                    for (j, dj) in dets.iter().enumerate() {
                        let x = geom.hom(q)[j];
                        if x != 0 {
                            h = h.add(&dj.mul(&T::from_i64(x as i64))?)?;
                        }
                    }
                    let gap = heights[q].mul(&det_t)?.sub(&h)?;
                    let s = if positive { gap.signum() } else { -gap.signum() };
                    if s < 0 {
                        lower = false;
                        break;
                    }
                    if s == 0 {
                        cell |= 1 << q;
                    }
                }
                if lower {
                    found.push(cell);
                }
            }
        }
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Ok(found)
}

/// Regular subdivision induced by lifting point `i` to height `w[i]` and
/// projecting the lower faces.
pub fn regular_subdivision(geom: &Geometry, w: &WeightVector) -> Result<Subdivision> {
    if w.len() != geom.len() {
        return Err(Error::Dimension(format!("{} heights for {} points", w.len(), geom.len())));
    }
    let big = w.integral();
    let small: Option<Vec<i128>> = big
        .iter()
        .map(|x| x.to_i64().map(|v| v as i128))
        .collect();
    let masks = match small.map(|s| lower_cells::<i128>(geom, &s)) {
        Some(Ok(m)) => m,
        _ => lower_cells::<BigInt>(geom, &big).expect("bigint arithmetic cannot overflow"),
    };
    Ok(Subdivision::new(masks.into_iter().map(|m| Cell(m).indices()).collect()))
}

/// Checks that every cell is cut out by a lower functional that lifts all
/// other points strictly above it.
#[cfg(test)]
pub(crate) fn certify(geom: &Geometry, w: &WeightVector, sub: &Subdivision) -> bool {
    use crate::arith::RationalMatrix;
    use num_traits::{Signed, Zero};
    let d = geom.dim();
    sub.cells.iter().all(|cell| {
        let basis: Vec<usize> = {
            let mut b = Vec::new();
            for &p in cell {
                b.push(p);
                if geom.rank(&b) < b.len() {
                    b.pop();
                }
            }
            b
        };
        if basis.len() != d + 1 {
            return false;
        }
        let a = RationalMatrix::from_i64_rows(
            &basis.iter().map(|&p| geom.hom(p)[..=d].iter().map(|&x| x as i64).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let rhs: Vec<Rational> = basis.iter().map(|&p| w.heights[p].clone()).collect();
        let c = a.solve(&rhs).unwrap().unwrap();
        (0..geom.len()).all(|q| {
            let h: Rational = (0..=d).map(|j| &c[j] * Rational::from_integer(geom.hom(q)[j].into())).sum();
            let gap = &w.heights[q] - h;
            if cell.contains(&q) {
                gap.is_zero()
            } else {
                gap.is_positive()
            }
        })
    })
}
