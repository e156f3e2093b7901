//! Exact arithmetic in the ring of integers of `Q(sqrt(-D))`.
//!
//! Every element is stored as `(u + v*sqrt(-D)) / 2`. When `D ≡ 3 (mod 4)` the
//! ring of integers contains half-integral elements and the only constraint is
//! `u ≡ v (mod 2)`; otherwise both numerators must be even, i.e. the element
//! lies in `Z[sqrt(-D)]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("D = {0} is not a positive nonsquare integer")]
    SquareD(u64),
    #[error("({u} + {v}*sqrt(-{d}))/2 is not an algebraic integer")]
    ParityViolation { u: BigInt, v: BigInt, d: u64 },
    #[error("operands live in different rings (D = {0} and D = {1})")]
    MixedD(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("quotient is not an algebraic integer")]
    NotDivisible,
}

/// `true` when `d` is a positive integer that is not a perfect square.
pub fn is_nonsquare(d: u64) -> bool {
    d > 0 && {
        let s = d.sqrt();
        s * s != d
    }
}

/// An algebraic integer `(u + v*sqrt(-D)) / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    u: BigInt,
    v: BigInt,
    d: u64,
}

fn halves_allowed(d: u64) -> bool {
    d % 4 == 3
}

fn check_d(d: u64) -> Result<(), QuadError> {
    if is_nonsquare(d) {
        Ok(())
    } else {
        Err(QuadError::SquareD(d))
    }
}

impl QuadInt {
    /// The element `a + b*sqrt(-D)`.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, d: u64) -> Result<Self, QuadError> {
        check_d(d)?;
        Ok(QuadInt {
            u: a.into() * 2,
            v: b.into() * 2,
            d,
        })
    }

    /// The element `(u + v*sqrt(-D)) / 2`, rejected unless it is integral.
    pub fn from_halves(u: impl Into<BigInt>, v: impl Into<BigInt>, d: u64) -> Result<Self, QuadError> {
        check_d(d)?;
        let (u, v) = (u.into(), v.into());
        let ok = if halves_allowed(d) {
            u.is_even() == v.is_even()
        } else {
            u.is_even() && v.is_even()
        };
        if ok {
            Ok(QuadInt { u, v, d })
        } else {
            Err(QuadError::ParityViolation { u, v, d })
        }
    }

    /// Constructor with the halving convention selected by a flag.
    pub fn make(u: impl Into<BigInt>, v: impl Into<BigInt>, d: u64, halved: bool) -> Result<Self, QuadError> {
        if halved {
            Self::from_halves(u, v, d)
        } else {
            Self::new(u, v, d)
        }
    }

    pub fn from_int(a: impl Into<BigInt>, d: u64) -> Result<Self, QuadError> {
        Self::new(a, 0, d)
    }

    pub fn zero(d: u64) -> Result<Self, QuadError> {
        Self::from_int(0, d)
    }

    pub fn one(d: u64) -> Result<Self, QuadError> {
        Self::from_int(1, d)
    }

    /// `sqrt(-D)` itself.
    pub fn sqrt_neg_d(d: u64) -> Result<Self, QuadError> {
        Self::new(0, 1, d)
    }

    // Internal constructor for results of ring operations; closure of the
    // ring of integers guarantees the parity invariant.
    fn raw(u: BigInt, v: BigInt, d: u64) -> Self {
        debug_assert!(if halves_allowed(d) {
            u.is_even() == v.is_even()
        } else {
            u.is_even() && v.is_even()
        });
        QuadInt { u, v, d }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Numerator of the rational part (`u` in `(u + v*sqrt(-D))/2`).
    pub fn u(&self) -> &BigInt {
        &self.u
    }

    /// Numerator of the `sqrt(-D)` part.
    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_half_integral(&self) -> bool {
        self.u.is_odd()
    }

    fn same_ring(&self, other: &Self) -> Result<(), QuadError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(QuadError::MixedD(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, QuadError> {
        self.same_ring(other)?;
        Ok(Self::raw(&self.u + &other.u, &self.v + &other.v, self.d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, QuadError> {
        self.same_ring(other)?;
        Ok(Self::raw(&self.u - &other.u, &self.v - &other.v, self.d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, QuadError> {
        self.same_ring(other)?;
        let d = BigInt::from(self.d);
        let u = (&self.u * &other.u - d * &self.v * &other.v) / 2;
        let v = (&self.u * &other.v + &other.u * &self.v) / 2;
        Ok(Self::raw(u, v, self.d))
    }

    pub fn conj(&self) -> Self {
        Self::raw(self.u.clone(), -&self.v, self.d)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::raw(&self.u * k, &self.v * k, self.d)
    }

    /// `(u^2 + D*v^2) / 4`, i.e. `self * conj(self)`.
    pub fn norm(&self) -> BigUint {
        let n: BigInt = (&self.u * &self.u + BigInt::from(self.d) * &self.v * &self.v) / 4;
        n.to_biguint().expect("norm is nonnegative")
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::raw(BigInt::from(2), BigInt::zero(), self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self / divisor` when the quotient is an algebraic integer.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, QuadError> {
        self.same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let n = BigInt::from(divisor.norm());
        let num = self.checked_mul(&divisor.conj())?;
        let (qu, ru) = num.u.div_rem(&n);
        let (qv, rv) = num.v.div_rem(&n);
        if !ru.is_zero() || !rv.is_zero() {
            return Err(QuadError::NotDivisible);
        }
        Self::from_halves(qu, qv, self.d).map_err(|_| QuadError::NotDivisible)
    }

    /// Exact division by a rational integer.
    pub fn exact_div_int(&self, k: &BigInt) -> Result<Self, QuadError> {
        if k.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let (qu, ru) = self.u.div_rem(k);
        let (qv, rv) = self.v.div_rem(k);
        if !ru.is_zero() || !rv.is_zero() {
            return Err(QuadError::NotDivisible);
        }
        Self::from_halves(qu, qv, self.d).map_err(|_| QuadError::NotDivisible)
    }

    /// Approximate absolute value, for reporting only.
    pub fn abs_f64(&self) -> f64 {
        crate::util::sqrt_biguint_f64(&self.norm())
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, half) = if self.u.is_even() && self.v.is_even() {
            (&self.u / 2, &self.v / 2, false)
        } else {
            (self.u.clone(), self.v.clone(), true)
        };
        let body = match (a.is_zero(), b.sign()) {
            (_, Sign::NoSign) => format!("{a}"),
            (true, _) => format!("{}√-{}", signed_coeff(&b, true), self.d),
            (false, Sign::Plus) => format!("{a}+{}√-{}", signed_coeff(&b, false), self.d),
            (false, Sign::Minus) => format!("{a}-{}√-{}", signed_coeff(&-&b, false), self.d),
        };
        if half {
            write!(f, "({body})/2")
        } else {
            write!(f, "{body}")
        }
    }
}

fn signed_coeff(b: &BigInt, leading: bool) -> String {
    if b.is_one() {
        String::new()
    } else if leading && b.abs().is_one() {
        "-".into()
    } else {
        b.to_string()
    }
}

// Operator forms panic on mixed rings; library code only combines elements
// built from a single D, and the checked_* methods are available otherwise.
impl<'a> Add<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &'a QuadInt) -> QuadInt {
        self.checked_add(rhs).expect("mixed D in QuadInt addition")
    }
}

impl<'a> Sub<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &'a QuadInt) -> QuadInt {
        self.checked_sub(rhs).expect("mixed D in QuadInt subtraction")
    }
}

impl<'a> Mul<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &'a QuadInt) -> QuadInt {
        self.checked_mul(rhs).expect("mixed D in QuadInt multiplication")
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::raw(-&self.u, -&self.v, self.d)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: u64) -> QuadInt {
        QuadInt::new(a, b, d).unwrap()
    }

    #[test]
    fn constructors() {
        assert_eq!(QuadInt::from_halves(2 * 1015, 2, 76).unwrap(), q(1015, 1, 76));
        let h = QuadInt::make(181, 1, 7, true).unwrap();
        assert!(h.is_half_integral());
        assert_eq!(h.to_string(), "(181+√-7)/2");
        assert!(matches!(
            QuadInt::make(1, 1, 76, true),
            Err(QuadError::ParityViolation { .. })
        ));
        assert_eq!(QuadInt::new(1, 1, 49), Err(QuadError::SquareD(49)));
        assert_eq!(QuadInt::new(1, 1, 0), Err(QuadError::SquareD(0)));
    }

    #[test]
    fn ring_ops() {
        let a = q(1, 1, 76);
        assert_eq!(&a * &a, q(-75, 2, 76));
        assert_eq!(q(1015, 1, 76).conj(), q(1015, -1, 76));
        let h = QuadInt::from_halves(181, 1, 7).unwrap();
        assert_eq!(&h * &h.conj(), QuadInt::from_int(8192, 7).unwrap());
        assert_eq!(q(1, 0, 76).checked_add(&q(1, 0, 7)), Err(QuadError::MixedD(76, 7)));
    }

    #[test]
    fn norms_and_powers() {
        assert_eq!(q(1015, 1, 76).norm(), BigUint::from(1_030_301u32));
        assert_eq!(q(5, 1, 76).norm(), BigUint::from(101u32));
        assert_eq!(QuadInt::from_halves(181, 1, 7).unwrap().norm(), BigUint::from(1u32) << 13);
        let beta = q(1015, 1, 76);
        assert_eq!(beta.pow(2), q(1_030_149, 2030, 76));
        assert_eq!(beta.pow(0), QuadInt::one(76).unwrap());
        assert_eq!(beta.pow(5).norm(), BigUint::from(101u32).pow(15));
    }

    #[test]
    fn division() {
        let beta = q(1015, 1, 76);
        let n = QuadInt::from_int(1_030_301, 76).unwrap();
        assert_eq!(n.exact_div(&beta).unwrap(), beta.conj());
        assert_eq!(q(1, 1, 76).exact_div(&q(2, 0, 76)), Err(QuadError::NotDivisible));
        assert_eq!(beta.pow(3).exact_div(&beta.pow(2)).unwrap(), beta);
        assert_eq!(beta.exact_div(&QuadInt::zero(76).unwrap()), Err(QuadError::DivisionByZero));
        // a half-integral quotient is fine when D ≡ 3 (mod 4)
        let h = QuadInt::from_halves(181, 1, 7).unwrap();
        assert_eq!(h.scale(&BigInt::from(3)).exact_div(&q(3, 0, 7)).unwrap(), h);
    }

    #[test]
    fn display() {
        assert_eq!(q(1015, -1, 76).to_string(), "1015-√-76");
        assert_eq!(q(0, 2, 76).to_string(), "2√-76");
        assert_eq!(q(0, -1, 76).to_string(), "-√-76");
        assert_eq!(q(7, 0, 76).to_string(), "7");
    }
}
