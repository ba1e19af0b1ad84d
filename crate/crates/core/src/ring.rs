//! Minimal commutative-ring abstraction shared by the numeric and symbolic
//! code paths.
//!
//! The coefficient maps, the Hankel determinant and the closed-form
//! expansions are written once against [`Ring`]. Evaluated over
//! [`Complex64`] they drive the numerics; evaluated over
//! [`Poly`](crate::polyid::Poly) they produce the exact polynomials that
//! the identity ledger compares.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// The constant `num/den`, living in the same context as `self`
    /// (for polynomials: the same symbol set).
    fn ratio(&self, num: i64, den: i64) -> Self;

    fn int(&self, n: i64) -> Self {
        self.ratio(n, 1)
    }

    fn zero_like(&self) -> Self {
        self.ratio(0, 1)
    }

    fn one_like(&self) -> Self {
        self.ratio(1, 1)
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// `self * num/den`.
    fn scaled(&self, num: i64, den: i64) -> Self {
        self.ratio(num, den) * self.clone()
    }
}

impl Ring for Complex64 {
    fn ratio(&self, num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
}

impl Ring for f64 {
    fn ratio(&self, num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Ring for BigRational {
    fn ratio(&self, num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_and_scaled() {
        let x = BigRational::new(3.into(), 2.into());
        assert_eq!(x.pow(3), BigRational::new(27.into(), 8.into()));
        assert_eq!(x.scaled(2, 3), BigRational::from_integer(1.into()));
        assert_eq!(x.pow(0), BigRational::from_integer(1.into()));
    }
}
