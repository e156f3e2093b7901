//! A solution `(x0, n0)` of `x^2 + D = p^n` and the algebraic integers it
//! determines.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::quadring::{QuadError, QuadInt};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseSolution {
    #[serde(rename = "D")]
    pub d: u64,
    pub p: u64,
    #[serde(serialize_with = "crate::report::ser_decimal")]
    pub x0: BigUint,
    pub n0: u32,
}

impl BaseSolution {
    pub fn new(d: u64, p: u64, x0: impl Into<BigUint>, n0: u32) -> Self {
        BaseSolution {
            d,
            p,
            x0: x0.into(),
            n0,
        }
    }

    /// `x0^2 + D == p^n0`.
    pub fn is_exact_power(&self) -> bool {
        &self.x0 * &self.x0 + self.d == BigUint::from(self.p).pow(self.n0)
    }

    pub fn is_two(&self) -> bool {
        self.p == 2
    }

    /// `beta = x0 + sqrt(-D)` for odd `p`, `(x0 + sqrt(-D)) / 2` for `p = 2`.
    pub fn beta(&self) -> Result<QuadInt, QuadError> {
        let x0 = BigInt::from(self.x0.clone());
        if self.is_two() {
            QuadInt::from_halves(x0, 1, self.d)
        } else {
            QuadInt::new(x0, 1, self.d)
        }
    }

    /// `lambda = beta - conj(beta)`: `2 sqrt(-D)` for odd `p`, `sqrt(-D)` for `p = 2`.
    pub fn lambda(&self) -> Result<QuadInt, QuadError> {
        if self.is_two() {
            QuadInt::sqrt_neg_d(self.d)
        } else {
            QuadInt::new(0, 2, self.d)
        }
    }

    /// Exponent `e` with `|beta|^2 = p^e`: `n0`, or `n0 - 2` when `p = 2`.
    pub fn beta_norm_exponent(&self) -> i64 {
        if self.is_two() {
            self.n0 as i64 - 2
        } else {
            self.n0 as i64
        }
    }

    /// `|gamma|^2 / p^n` exponent offset for a solution at exponent `n`:
    /// `N(gamma) = p^(n - offset) * m`.
    pub fn norm_offset(&self) -> u32 {
        if self.is_two() {
            2
        } else {
            0
        }
    }

    pub fn p_pow(&self, e: u32) -> BigUint {
        if e == 0 {
            BigUint::one()
        } else {
            BigUint::from(self.p).pow(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_instance() {
        let b = BaseSolution::new(76, 101, 1015u32, 3);
        assert!(b.is_exact_power());
        assert_eq!(b.beta().unwrap().norm(), BigUint::from(101u32).pow(3));
        assert_eq!(b.lambda().unwrap(), &b.beta().unwrap() - &b.beta().unwrap().conj());
        assert!(!BaseSolution::new(76, 101, 1014u32, 3).is_exact_power());
    }

    #[test]
    fn two_instance() {
        let b = BaseSolution::new(7, 2, 181u32, 15);
        assert!(b.is_exact_power());
        let beta = b.beta().unwrap();
        assert_eq!(beta.norm(), BigUint::from(2u32).pow(13));
        assert_eq!(b.lambda().unwrap(), &beta - &beta.conj());
    }
}
