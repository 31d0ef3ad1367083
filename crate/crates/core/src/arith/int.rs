//! Integer kernels shared by the determinant, the lower-hull search and the
//! simplex tableau.
//!
//! Every kernel is generic over [`ExactInt`] so it can first run on `i128`
//! with checked operations and, if any intermediate overflows, be re-run on
//! `BigInt`. Callers never observe the difference.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Overflow marker for the fixed-width instantiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub trait ExactInt: Clone + Ord + Debug + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i32;
    fn add(&self, rhs: &Self) -> Result<Self, Overflow>;
    fn sub(&self, rhs: &Self) -> Result<Self, Overflow>;
    fn mul(&self, rhs: &Self) -> Result<Self, Overflow>;
    /// Division known to be exact.
    fn div_exact(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn gcd(&self, rhs: &Self) -> Self;
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
    #[inline]
    fn add(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_add(*rhs).ok_or(Overflow)
    }
    #[inline]
    fn sub(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_sub(*rhs).ok_or(Overflow)
    }
    #[inline]
    fn mul(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_mul(*rhs).ok_or(Overflow)
    }
    #[inline]
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self % rhs, 0);
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i32 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
    fn add(&self, rhs: &Self) -> Result<Self, Overflow> {
        Ok(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Result<Self, Overflow> {
        Ok(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Result<Self, Overflow> {
        Ok(self * rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix, consuming it.
pub fn bareiss_det<T: ExactInt>(mut m: Vec<Vec<T>>) -> Result<T, Overflow> {
    let n = m.len();
    if n == 0 {
        return Ok(T::from_i64(1));
    }
    let mut sign = 1;
    let mut prev = T::from_i64(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(T::from_i64(0)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].mul(&m[k][k])?;
                let b = m[i][k].mul(&m[k][j])?;
                m[i][j] = a.sub(&b)?.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { det.neg() } else { det })
}

/// Determinant of a small integer matrix, exact regardless of entry size.
pub fn det_bigint(rows: &[Vec<i64>]) -> BigInt {
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_det(small) {
        Ok(d) => BigInt::from(d),
        Err(Overflow) => {
            let big = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            bareiss_det::<BigInt>(big).expect("bigint arithmetic cannot overflow")
        }
    }
}

/// Determinant of a small integer matrix whose value is known to fit in
/// `i128` (guaranteed by the coordinate bounds enforced in `Geometry`).
pub fn det_i128(rows: &[Vec<i64>]) -> i128 {
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_det(small) {
        Ok(d) => d,
        Err(Overflow) => det_bigint(rows)
            .to_i128()
            .expect("determinant exceeds i128 despite coordinate bounds"),
    }
}

/// Largest matrix handled by [`det_small`].
pub const SMALL: usize = 8;

/// Stack-allocated Bareiss determinant of the leading `n x n` block.
/// Returns `None` on `i128` overflow.
pub fn det_small(m: &[[i128; SMALL]; SMALL], n: usize) -> Option<i128> {
    let mut m = *m;
    if n == 0 {
        return Some(1);
    }
    let mut negate = false;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return Some(0);
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    let det = m[n - 1][n - 1];
    Some(if negate { -det } else { det })
}

/// Divides a vector by the gcd of its entries (no-op on the zero vector).
pub fn primitive(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, x| Integer::gcd(&g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}
