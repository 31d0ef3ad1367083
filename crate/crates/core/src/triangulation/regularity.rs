use num_bigint::BigInt;
use num_rational::BigRational;

use super::flips::circuits;
use super::{Bits, Triangulation};
use crate::arith::int::SMALL;
use crate::arith::lp::{homogeneous_strict_feasible, homogeneous_strict_feasible_i128};
use crate::geometry::{Geometry, WeightVector};

/// Which strict inequality system certifies regularity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Formulation {
    /// One inequality per circuit of an interior facet (the lift folds
    /// upward across it) and one per unused point (it lies strictly above).
    #[default]
    Folds,
    /// One inequality per cell and point outside the cell.
    CellPoint,
}

/// Rows `r` such that `t` is induced by `w` iff `r . w > 0` for every row.
/// Each row has one entry per point.
pub fn regularity_rows(geom: &Geometry, t: &Triangulation, formulation: Formulation) -> Vec<Vec<i128>> {
    let n = geom.len();
    match formulation {
        Formulation::Folds => circuits(geom, t)
            .into_iter()
            .map(|dep| {
                let mut row = vec![0i128; n];
                for (i, c) in dep.coeffs {
                    row[i] = c;
                }
                row
            })
            .collect(),
        Formulation::CellPoint => {
            let mut rows = Vec::new();
            for &cell in t.cells() {
                let mut pts = [0usize; SMALL];
                let k = cell.fill(&mut pts).len();
                let det = geom.det(&pts[..k]);
                for q in Bits(geom.all_points() & !cell.0) {
                    let mut row = vec![0i128; n];
                    row[q] = det.abs();
                    for j in 0..k {
                        let mut replaced = pts;
                        replaced[j] = q;
                        row[pts[j]] = -geom.det(&replaced[..k]) * det.signum();
                    }
                    rows.push(row);
                }
            }
            rows
        }
    }
}

/// Height vector inducing `t`, if `t` is regular.
pub fn is_regular(geom: &Geometry, t: &Triangulation) -> Option<WeightVector> {
    is_regular_with(geom, t, Formulation::Folds)
}

/// Heights are pinned to zero on the affine basis, which removes the affine
/// functions from the solution space without losing any subdivision.
pub fn is_regular_with(geom: &Geometry, t: &Triangulation, formulation: Formulation) -> Option<WeightVector> {
    let n = geom.len();
    let free: Vec<usize> = (0..n).filter(|i| !geom.affine_basis().contains(i)).collect();
    let rows = regularity_rows(geom, t, formulation);
    let reduced: Vec<Vec<i128>> = rows.iter().map(|r| free.iter().map(|&i| r[i]).collect()).collect();
    if reduced.iter().any(|r| r.iter().all(|&x| x == 0)) {
        return None;
    }
    let witness: Vec<BigInt> = match homogeneous_strict_feasible_i128(&reduced, free.len()) {
        Ok(w) => w?.into_iter().map(BigInt::from).collect(),
        Err(_) => {
            let wide: Vec<Vec<i64>> = reduced
                .iter()
                .map(|r| r.iter().map(|&x| i64::try_from(x).expect("regularity coefficients fit in i64")).collect())
                .collect();
            homogeneous_strict_feasible(&wide, free.len())?
        }
    };
    let mut heights = vec![BigRational::from_integer(BigInt::from(0)); n];
    for (&i, w) in free.iter().zip(witness) {
        heights[i] = BigRational::from_integer(w);
    }
    Some(WeightVector::new(heights))
}
