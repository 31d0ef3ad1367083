use serde::{Deserialize, Serialize};

use super::config::PointConfiguration;
use crate::error::{Error, Result};

/// Affine lattice map from reduced coordinates back to the ambient space:
/// `x = origin + sum(c_k * basis[k])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineTransform {
    pub origin: Vec<i64>,
    /// Row-echelon lattice basis of the difference lattice.
    pub basis: Vec<Vec<i64>>,
}

impl AffineTransform {
    pub fn is_identity(&self) -> bool {
        let n = self.origin.len();
        self.origin.iter().all(|&x| x == 0)
            && self.basis.len() == n
            && self
                .basis
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    /// Reduced coordinates of an ambient point, or `None` when it is not in
    /// the affine lattice.
    pub fn reduce(&self, point: &[i64]) -> Option<Vec<i64>> {
        if point.len() != self.origin.len() {
            return None;
        }
        let mut v: Vec<i128> = point.iter().zip(&self.origin).map(|(&p, &o)| p as i128 - o as i128).collect();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let piv = row.iter().position(|&x| x != 0)?;
            let b = row[piv] as i128;
            if v[piv] % b != 0 {
                return None;
            }
            let c = v[piv] / b;
            for (x, &r) in v.iter_mut().zip(row) {
                *x -= c * r as i128;
            }
            coords.push(i64::try_from(c).ok()?);
        }
        v.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn lift(&self, coords: &[i64]) -> Vec<i64> {
        let mut x = self.origin.clone();
        for (c, row) in coords.iter().zip(&self.basis) {
            for (xi, r) in x.iter_mut().zip(row) {
                *xi += c * r;
            }
        }
        x
    }
}

/// Row-echelon basis of the lattice spanned by `vectors`, using unimodular
/// row operations only.
fn echelon_basis(mut rows: Vec<Vec<i128>>, n: usize) -> Vec<Vec<i128>> {
    let mut r = 0;
    for col in 0..n {
        loop {
            let Some(best) = (r..rows.len())
                .filter(|&i| rows[i][col] != 0)
                .min_by_key(|&i| rows[i][col].abs())
            else {
                break;
            };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col] != 0 {
                    let q = rows[i][col] / rows[r][col];
                    let pivot = rows[r].clone();
                    for (x, p) in rows[i].iter_mut().zip(&pivot) {
                        *x -= q * p;
                    }
                    if rows[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if rows[r][col] < 0 {
                    for x in rows[r].iter_mut() {
                        *x = -*x;
                    }
                }
                r += 1;
                break;
            }
        }
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Rewrites a configuration in coordinates of the affine lattice its points
/// span, so that it becomes full-dimensional and lattice volumes are kept.
pub fn affine_reduce(config: &PointConfiguration) -> Result<(PointConfiguration, AffineTransform)> {
    if config.len() < 2 {
        return Err(Error::Degenerate("affine reduction needs at least two points".into()));
    }
    let n = config.ambient_dim();
    let first = &config.points()[0];
    let diffs: Vec<Vec<i128>> = config.points()[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(&a, &b)| a as i128 - b as i128).collect())
        .collect();
    let basis = echelon_basis(diffs, n);
    let basis: Vec<Vec<i64>> = basis
        .into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::Limit("coordinates too large".into())))
            .collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut transform = AffineTransform { origin: first.clone(), basis };
    let identity = AffineTransform {
        origin: vec![0; n],
        basis: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
    };
    if transform.basis == identity.basis {
        transform = identity;
    }
    let points: Vec<Vec<i64>> = config
        .points()
        .iter()
        .map(|p| transform.reduce(p).expect("points lie in their own affine lattice"))
        .collect();
    let reduced = PointConfiguration::new(transform.basis.len(), points, config.labels().to_vec())?;
    Ok((reduced, transform))
}
