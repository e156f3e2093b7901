//! Small numeric helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Natural log of a positive big integer, as an `f64` approximation.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint_abs(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

pub fn sqrt_biguint_f64(n: &BigUint) -> f64 {
    if n.is_zero() {
        0.0
    } else {
        (0.5 * ln_biguint(n)).exp()
    }
}

/// `f64` approximation of a big rational, usable even when numerator and
/// denominator overflow individually.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let ln = ln_bigint_abs(r.numer()) - ln_bigint_abs(r.denom());
    let s = if r.is_negative() { -1.0 } else { 1.0 };
    s * ln.exp()
}

/// Natural log of a positive rational as an `f64` approximation.
pub fn ln_ratio(r: &BigRational) -> f64 {
    ln_bigint_abs(r.numer()) - ln_bigint_abs(r.denom())
}

/// Parse a decimal literal such as `"0.044479"` into an exact rational.
pub fn decimal(s: &str) -> BigRational {
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    if neg {
        -r
    } else {
        r
    }
}

/// Decimal rendering of a rational with `places` digits after the point,
/// truncated toward zero.
pub fn ratio_to_decimal(r: &BigRational, places: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scaled = (a.numer() * num_traits::pow(BigInt::from(10), places)) / a.denom();
    let mut s = scaled.to_string();
    if places > 0 {
        if s.len() <= places {
            s = format!("{}{}", "0".repeat(places + 1 - s.len()), s);
        }
        s.insert(s.len() - places, '.');
    }
    if neg {
        format!("-{s}")
    } else {
        s
    }
}
