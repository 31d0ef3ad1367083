//! Exact strict feasibility of `A x > b`.
//!
//! The system is homogenized to `M z > 0` and decided through Gordan's
//! alternative: either some `z` has `M z > 0`, or some `y >= 0` with
//! `sum(y) = 1` has `M^T y = 0`. The second system is solved by a phase-one
//! simplex on an integer (fraction-free) tableau under Bland's rule, which
//! always terminates. When the phase-one optimum is positive the optimal dual
//! multipliers, read off the artificial columns, are a strict witness `z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::int::{ExactInt, Overflow};
use super::{common_denominator, Rational, RationalMatrix};
use crate::error::{Error, Result};

struct Tableau<T> {
    /// `n + 1` constraint rows, each `cols + 1` wide (last entry is the rhs).
    rows: Vec<Vec<T>>,
    objective: Vec<T>,
    basis: Vec<usize>,
    denom: T,
}

impl<T: ExactInt> Tableau<T> {
    fn pivot(&mut self, r: usize, s: usize) -> Result<(), Overflow> {
        let p = self.rows[r][s].clone();
        let pivot_row = self.rows[r].clone();
        let update = |row: &mut Vec<T>, denom: &T| -> Result<(), Overflow> {
            let f = row[s].clone();
            if f.is_zero() {
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = x.mul(&p)?.div_exact(denom);
                    }
                }
            } else {
                for (x, pr) in row.iter_mut().zip(&pivot_row) {
                    let a = x.mul(&p)?;
                    let b = f.mul(pr)?;
                    *x = a.sub(&b)?.div_exact(denom);
                }
            }
            Ok(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row, &self.denom)?;
            }
        }
        update(&mut self.objective, &self.denom)?;
        self.denom = p;
        self.basis[r] = s;
        Ok(())
    }
}

/// Phase-one simplex on `{ M^T y = 0, 1^T y = 1, y >= 0 }`.
///
/// Returns a witness `z` with `M z > 0` if one exists.
fn gordan<T: ExactInt>(m: &[Vec<T>], n: usize) -> Result<Option<Vec<T>>, Overflow> {
    let k = m.len();
    if k == 0 {
        return Ok(Some(vec![T::from_i64(0); n]));
    }
    let cols = k + n + 1;
    let rhs = cols;
    let one = T::from_i64(1);
    let mut rows = Vec::with_capacity(n + 1);
    for c in 0..=n {
        let mut row = vec![T::from_i64(0); cols + 1];
        for (j, mrow) in m.iter().enumerate() {
            row[j] = if c < n { mrow[c].clone() } else { one.clone() };
        }
        row[k + c] = one.clone();
        if c == n {
            row[rhs] = one.clone();
        }
        rows.push(row);
    }
    let mut objective = vec![T::from_i64(0); cols + 1];
    for j in 0..k {
        let mut sum = T::from_i64(0);
        for row in &rows {
            sum = sum.add(&row[j])?;
        }
        objective[j] = sum.neg();
    }
    objective[rhs] = one.neg();
    let mut t = Tableau { rows, objective, basis: (k..k + n + 1).collect(), denom: one };

    loop {
        let Some(s) = (0..cols).find(|&j| t.objective[j].signum() < 0) else {
            break;
        };
        let mut best: Option<usize> = None;
        for i in 0..t.rows.len() {
            if t.rows[i][s].signum() <= 0 {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(b) => {
                    // rows[i][rhs] / rows[i][s]  vs  rows[b][rhs] / rows[b][s]
                    let lhs = t.rows[i][rhs].mul(&t.rows[b][s])?;
                    let rhs_v = t.rows[b][rhs].mul(&t.rows[i][s])?;
                    match lhs.cmp(&rhs_v) {
                        std::cmp::Ordering::Less => i,
                        std::cmp::Ordering::Greater => b,
                        std::cmp::Ordering::Equal => {
                            if t.basis[i] < t.basis[b] {
                                i
                            } else {
                                b
                            }
                        }
                    }
                }
            });
        }
        let r = best.expect("phase-one objective is bounded below");
        t.pivot(r, s)?;
    }

    if t.objective[rhs].is_zero() {
        return Ok(None);
    }
    let mut z = Vec::with_capacity(n);
    for c in 0..n {
        z.push(t.objective[k + c].sub(&t.denom)?);
    }
    Ok(Some(z))
}

fn strictly_satisfies<T: ExactInt>(m: &[Vec<T>], z: &[T]) -> bool {
    m.iter().all(|row| {
        let mut acc = BigInt::zero();
        for (a, b) in row.iter().zip(z) {
            acc += a.to_bigint() * b.to_bigint();
        }
        acc > BigInt::zero()
    })
}

fn solve_homogeneous(m: &[Vec<BigInt>], n: usize) -> Option<Vec<BigInt>> {
    let small: Option<Vec<Vec<i128>>> =
        m.iter().map(|r| r.iter().map(|x| x.to_i128()).collect()).collect();
    let witness = match small.map(|s| (gordan::<i128>(&s, n), s)) {
        Some((Ok(w), _)) => w.map(|w| w.into_iter().map(BigInt::from).collect::<Vec<_>>()),
        _ => gordan::<BigInt>(m, n).expect("bigint arithmetic cannot overflow"),
    };
    if let Some(w) = &witness {
        assert!(strictly_satisfies(m, w), "simplex returned a non-strict witness");
    }
    witness
}

/// Decides `rows * z > 0` (every row strictly positive) over the rationals.
///
/// Returns a primitive integer witness when the system is feasible.
pub fn homogeneous_strict_feasible(rows: &[Vec<i64>], n: usize) -> Option<Vec<BigInt>> {
    let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut w = solve_homogeneous(&m, n)?;
    let g = w.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if g > BigInt::from(1) {
        for x in w.iter_mut() {
            *x = &*x / &g;
        }
    }
    Some(w)
}

/// `i128` fast path used by the enumeration hot loop. Falls back to `None`
/// on overflow so the caller can retry with [`homogeneous_strict_feasible`].
pub(crate) fn homogeneous_strict_feasible_i128(rows: &[Vec<i128>], n: usize) -> Result<Option<Vec<i128>>, Overflow> {
    let w = gordan::<i128>(rows, n)?;
    if let Some(w) = &w {
        debug_assert!(strictly_satisfies(rows, w));
    }
    Ok(w)
}

/// Finds `x` with `A x > b` componentwise, or returns `None` when the system
/// has no strict solution.
pub fn strict_lp_feasible(a: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("{} right-hand sides for {} rows", b.len(), a.rows())));
    }
    let n = a.cols() + 1;
    let mut m = Vec::with_capacity(a.rows() + 1);
    for (i, bi) in b.iter().enumerate() {
        let neg_b = -bi;
        let den = common_denominator(a.row(i).iter().chain(std::iter::once(&neg_b)));
        let mut row: Vec<BigInt> = a.row(i).iter().map(|x| (x * &den).to_integer()).collect();
        row.push((neg_b * &den).to_integer());
        m.push(row);
    }
    let mut tau = vec![BigInt::zero(); n];
    tau[n - 1] = BigInt::from(1);
    m.push(tau);
    Ok(solve_homogeneous(&m, n).map(|z| {
        let t = z[n - 1].clone();
        z[..n - 1].iter().map(|x| BigRational::new(x.clone(), t.clone())).collect()
    }))
}
