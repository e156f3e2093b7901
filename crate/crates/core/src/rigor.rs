//! Outward-rounded interval arithmetic over the rationals.
//!
//! Intervals have exact rational endpoints. Transcendental functions (`ln`,
//! `exp`, `pi`) are evaluated in fixed point at a requested number of bits,
//! with every truncation rounded away from the true value, so the returned
//! interval always contains the exact result. Comparisons escalate precision
//! until the two enclosures separate or a cap is reached.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::util;

/// Precision schedule for rigorous comparisons, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub cap_bits: u32,
}

/// Environment variable holding the cap in decimal digits.
pub const PRECISION_CAP_ENV: &str = "RNLAB_PRECISION_CAP";

const DEFAULT_CAP_DIGITS: u32 = 2000;

impl Precision {
    pub fn with_cap_digits(digits: u32) -> Self {
        let cap_bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32;
        Precision {
            start_bits: 64.min(cap_bits.max(8)),
            cap_bits: cap_bits.max(8),
        }
    }

    /// Reads [`PRECISION_CAP_ENV`], falling back to the default cap.
    pub fn from_env() -> Self {
        let digits = std::env::var(PRECISION_CAP_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .filter(|&d| d > 0)
            .unwrap_or(DEFAULT_CAP_DIGITS);
        Self::with_cap_digits(digits)
    }

    pub fn doubled(self) -> Self {
        Precision {
            start_bits: self.start_bits,
            cap_bits: self.cap_bits.saturating_mul(2),
        }
    }

    /// The bit levels tried in order: start, 2*start, ..., cap.
    pub fn schedule(self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits;
        let mut next = Some(self.start_bits.min(cap));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= cap { None } else { Some(cur.saturating_mul(2).min(cap)) };
            Some(cur)
        })
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::with_cap_digits(DEFAULT_CAP_DIGITS)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn floor_scaled(r: &BigRational, bits: u32) -> BigInt {
    (r.numer() << bits).div_floor(r.denom())
}

fn ceil_scaled(r: &BigRational, bits: u32) -> BigInt {
    -((-(r.numer() << bits)).div_floor(r.denom()))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn fixed(m: BigInt, bits: u32) -> BigRational {
    BigRational::new(m, pow2(bits))
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        util::ratio_to_f64(&((&self.lo + &self.hi) / BigInt::from(2)))
    }

    /// Round endpoints outward onto the grid `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Self {
        Interval {
            lo: fixed(floor_scaled(&self.lo, bits), bits),
            hi: fixed(ceil_scaled(&self.hi, bits), bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_negative() {
            Interval {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            Interval {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    /// `Some(Less)` / `Some(Greater)` when the enclosures are disjoint,
    /// `Some(Equal)` when both are the same point, otherwise `None`.
    pub fn certain_cmp(&self, o: &Self) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `e^x` for every `x` in the interval (monotone, so endpoint-wise).
    pub fn exp(&self, bits: u32) -> Self {
        Interval {
            lo: exp_bound(&self.lo, bits, false),
            hi: exp_bound(&self.hi, bits, true),
        }
    }

    /// Decimal rendering of both endpoints with `places` fractional digits,
    /// rounded outward.
    pub fn to_decimal_pair(&self, places: usize) -> (String, String) {
        let scale = num_traits::pow(BigInt::from(10), places);
        let lo = (self.lo.numer() * &scale).div_floor(self.lo.denom());
        let hi = ceil_div(&(self.hi.numer() * &scale), self.hi.denom());
        let render = |m: BigInt| util::ratio_to_decimal(&BigRational::new(m, scale.clone()), places);
        (render(lo), render(hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(12);
        write!(f, "[{lo}, {hi}]")
    }
}

/// Serializable snapshot of an enclosure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enclosure {
    pub lo: String,
    pub hi: String,
    pub approx: f64,
}

impl From<&Interval> for Enclosure {
    fn from(iv: &Interval) -> Self {
        let (lo, hi) = iv.to_decimal_pair(15);
        Enclosure {
            lo,
            hi,
            approx: iv.midpoint_f64(),
        }
    }
}

/// `atanh(u)` for `0 <= u <= 1/2`, enclosed on the grid `2^-bits`.
fn atanh_small(u: &BigRational, bits: u32) -> Interval {
    assert!(!u.is_negative() && u <= &BigRational::new(1.into(), 2.into()));
    let guard = bits + 16;
    let one = pow2(guard);
    let u_lo = floor_scaled(u, guard);
    let u_hi = ceil_scaled(u, guard);
    let u2_lo = (&u_lo * &u_lo) >> guard;
    let u2_hi = ceil_div(&(&u_hi * &u_hi), &one);

    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut t_lo = u_lo;
    let mut t_hi = u_hi;
    let mut i: u64 = 0;
    loop {
        let den = BigInt::from(2 * i + 1);
        // t_hi bounds every remaining u^(2i+1); the tail is at most
        // t_hi / (1 - u^2) <= 4/3 * t_hi.
        if t_hi.bits() <= 2 {
            sum_hi += ceil_div(&(&t_hi * 4), &BigInt::from(3)) + 1;
            break;
        }
        sum_lo += t_lo.div_floor(&den);
        sum_hi += ceil_div(&t_hi, &den);
        t_lo = (&t_lo * &u2_lo) >> guard;
        t_hi = ceil_div(&(&t_hi * &u2_hi), &one);
        i += 1;
    }
    Interval::new(fixed(sum_lo, guard), fixed(sum_hi, guard)).round_out(bits)
}

/// Enclosure of `ln 2`.
pub fn ln2(bits: u32) -> Interval {
    atanh_small(&BigRational::new(1.into(), 3.into()), bits + 4)
        .scale(&BigRational::from_integer(2.into()))
        .round_out(bits)
}

/// Enclosure of `ln q` for a positive rational `q`.
pub fn ln(q: &BigRational, bits: u32) -> Interval {
    assert!(q.is_positive(), "ln of a nonpositive number");
    if q.is_one() {
        return Interval::point(BigRational::zero());
    }
    // q = 2^k * y with 1 <= y < 2
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let two = BigRational::from_integer(2.into());
    let mut y = q / pow_rat(&two, k);
    while y < BigRational::one() {
        y *= &two;
        k -= 1;
    }
    while y >= two {
        y /= &two;
        k += 1;
    }
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let work = bits + extra + 4;
    let u = (&y - BigRational::one()) / (&y + BigRational::one());
    let two_atanh = atanh_small(&u, work).scale(&two);
    ln2(work)
        .scale(&BigRational::from_integer(k.into()))
        .add(&two_atanh)
        .round_out(bits)
}

fn pow_rat(base: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `atan(1/x)` for an integer `x >= 2`, via the alternating series.
fn atan_inv(x: u64, bits: u32) -> Interval {
    let guard = bits + 16;
    let one = pow2(guard);
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut pw = BigInt::from(x);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        let den = &pw * BigInt::from(2 * i + 1);
        let t_lo = one.div_floor(&den);
        let t_hi = ceil_div(&one, &den);
        if i % 2 == 0 {
            lo += &t_lo;
            hi += &t_hi;
        } else {
            lo -= &t_hi;
            hi -= &t_lo;
        }
        // Partial sums ending on a subtraction are lower bounds, those ending
        // on an addition are upper bounds. Stop on a subtraction once terms
        // vanish; the previous partial sum (on an addition) remains valid for hi.
        if i % 2 == 1 && t_hi <= BigInt::one() {
            hi += BigInt::from(2);
            break;
        }
        pw *= &x2;
        i += 1;
    }
    Interval::new(fixed(lo, guard), fixed(hi, guard)).round_out(bits)
}

/// Enclosure of pi (Machin's formula).
pub fn pi(bits: u32) -> Interval {
    let w = bits + 8;
    let a = atan_inv(5, w).scale(&BigRational::from_integer(16.into()));
    let b = atan_inv(239, w).scale(&BigRational::from_integer(4.into()));
    a.sub(&b).round_out(bits)
}

/// Lower (`upper == false`) or upper bound for `e^x`.
fn exp_bound(x: &BigRational, bits: u32, upper: bool) -> BigRational {
    if x.is_zero() {
        return BigRational::one();
    }
    if x.is_negative() {
        // e^x = 1 / e^-x; the direction flips.
        let b = exp_bound(&-x, bits + 2, !upper);
        return b.recip();
    }
    // reduce so that y = x / 2^s <= 1/2
    let half = BigRational::new(1.into(), 2.into());
    let mut s: u32 = 0;
    let mut y = x.clone();
    while y > half {
        y /= BigRational::from_integer(2.into());
        s += 1;
    }
    // magnitude of the result costs extra bits when squaring back
    let mag = util::ratio_to_f64(x).abs() * std::f64::consts::LOG2_E;
    let guard = bits + s + 32 + mag.ceil().min(1e7) as u32;
    let one = pow2(guard);
    let y_fp = if upper { ceil_scaled(&y, guard) } else { floor_scaled(&y, guard) };
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut n: u64 = 1;
    loop {
        let t = &term * &y_fp;
        term = if upper {
            ceil_div(&t, &(&one * BigInt::from(n)))
        } else {
            t.div_floor(&(&one * BigInt::from(n)))
        };
        if term.is_zero() {
            break;
        }
        sum += &term;
        if upper && term.bits() <= 1 {
            // remaining terms sum to at most twice the last one (y <= 1/2)
            sum += BigInt::from(4);
            break;
        }
        n += 1;
    }
    if upper {
        sum += BigInt::from(2);
    }
    for _ in 0..s {
        let sq = &sum * &sum;
        sum = if upper { ceil_div(&sq, &one) } else { sq >> guard };
    }
    fixed(sum, guard)
}

/// Outcome of a rigorous comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Undecidable,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

/// A positive real of the form `prod base_i ^ exp_i` with rational bases and
/// exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PowerProduct {
    factors: Vec<(BigRational, BigRational)>,
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        Self::one().times(q, BigRational::one())
    }

    pub fn power(base: BigRational, exp: BigRational) -> Self {
        Self::one().times(base, exp)
    }

    pub fn times(mut self, base: BigRational, exp: BigRational) -> Self {
        assert!(base.is_positive(), "power product bases must be positive");
        if !exp.is_zero() && !base.is_one() {
            self.factors.push((base, exp));
        }
        self
    }

    pub fn factors(&self) -> &[(BigRational, BigRational)] {
        &self.factors
    }

    /// Enclosure of the natural log of the value.
    pub fn ln(&self, bits: u32) -> Interval {
        let work = bits + 8 + 2 * self.factors.len() as u32;
        self.factors
            .iter()
            .fold(Interval::point(BigRational::zero()), |acc, (b, e)| {
                acc.add(&ln(b, work).scale(e))
            })
            .round_out(bits)
    }

    pub fn ln_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| util::ln_ratio(b) * util::ratio_to_f64(e))
            .sum()
    }

    /// Enclosure of the value itself.
    pub fn enclose(&self, bits: u32) -> Interval {
        self.ln(bits + 16).exp(bits).round_out(bits)
    }

    // Exact evaluation of value^l as an unreduced fraction, where l clears
    // every exponent denominator; None if the powers would be too large.
    fn exact_power(&self, l: &BigInt, budget_bits: u64) -> Option<(BigInt, BigInt)> {
        let mut cost: u64 = 0;
        let (mut num, mut den) = (BigInt::one(), BigInt::one());
        let mut terms = Vec::with_capacity(self.factors.len());
        for (b, e) in &self.factors {
            let scaled = e * BigRational::from_integer(l.clone());
            debug_assert!(scaled.is_integer());
            let n = scaled.to_integer();
            let mag: u32 = n.magnitude().try_into().ok()?;
            let size = b.numer().bits() + b.denom().bits();
            cost = cost.checked_add((mag as u64).checked_mul(size)?)?;
            if cost > budget_bits {
                return None;
            }
            terms.push((b, n.sign() == Sign::Minus, mag));
        }
        for (b, neg, mag) in terms {
            let (bn, bd) = (b.numer().pow(mag), b.denom().pow(mag));
            if neg {
                num *= bd;
                den *= bn;
            } else {
                num *= bn;
                den *= bd;
            }
        }
        Some((num, den))
    }

    fn exponent_lcm(&self, other: &Self) -> BigInt {
        self.factors
            .iter()
            .chain(other.factors.iter())
            .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()))
    }
}

const EXACT_BUDGET_BITS: u64 = 1 << 18;

/// Compare two power products, exactly when the integer powers stay small,
/// otherwise through log enclosures at escalating precision.
pub fn rigorous_compare(lhs: &PowerProduct, rhs: &PowerProduct, prec: Precision) -> Comparison {
    let l = lhs.exponent_lcm(rhs);
    if let (Some(a), Some(b)) = (
        lhs.exact_power(&l, EXACT_BUDGET_BITS),
        rhs.exact_power(&l, EXACT_BUDGET_BITS),
    ) {
        // denominators are positive
        return (&a.0 * &b.1).cmp(&(&b.0 * &a.1)).into();
    }
    compare_by_logs(lhs, rhs, prec)
}

/// The enclosure-only path of [`rigorous_compare`]; never claims equality.
pub fn compare_by_logs(lhs: &PowerProduct, rhs: &PowerProduct, prec: Precision) -> Comparison {
    for bits in prec.schedule() {
        let a = lhs.ln(bits);
        let b = rhs.ln(bits);
        match a.certain_cmp(&b) {
            Some(Ordering::Less) => return Comparison::Less,
            Some(Ordering::Greater) => return Comparison::Greater,
            _ => continue,
        }
    }
    Comparison::Undecidable
}

/// Compare two real enclosure producers at escalating precision.
pub fn compare_with<F>(prec: Precision, mut f: F) -> Comparison
where
    F: FnMut(u32) -> (Interval, Interval),
{
    for bits in prec.schedule() {
        let (a, b) = f(bits);
        match a.certain_cmp(&b) {
            Some(o) if o != Ordering::Equal => return o.into(),
            _ => continue,
        }
    }
    Comparison::Undecidable
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::decimal;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ln2_digits() {
        let iv = ln2(200);
        let known = decimal("0.693147180559945309417232121458176568075500134360255254120680009493393621969694715605863326996418687542");
        assert!(iv.contains(&known));
        assert!(iv.width() < r(1, 1) / BigRational::from_integer(pow2(195)));
    }

    #[test]
    fn ln_contains_reference_values() {
        let ln10 = decimal("2.302585092994045684017991454684364207601101488628772976033327900967572609677352480235997205089598298");
        let iv = ln(&r(10, 1), 256);
        assert!(iv.contains(&ln10));
        let iv = ln(&r(1, 10), 256);
        assert!(iv.contains(&-ln10));
        let ln_2008 = ln(&decimal("2008.832"), 80);
        assert!((ln_2008.midpoint_f64() - 2008.832f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pi_digits() {
        let known = decimal("3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798");
        for bits in [16, 64, 300] {
            let iv = pi(bits);
            assert!(iv.contains(&known), "bits {bits}");
        }
    }

    #[test]
    fn exp_brackets() {
        let e = decimal("2.718281828459045235360287471352662497757247093699959574966967627724076630353547594571382178525166427");
        let iv = Interval::point(BigRational::one()).exp(200);
        assert!(iv.contains(&e));
        let iv = Interval::point(-BigRational::one()).exp(200);
        assert!(iv.contains(&e.recip()));
        let iv = Interval::point(r(25, 2)).exp(64);
        assert!((iv.midpoint_f64() / 12.5f64.exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compare_examples() {
        let p = Precision::default();
        // 101^(3/2) vs 1000
        let a = PowerProduct::power(r(101, 1), r(3, 2));
        let b = PowerProduct::rational(r(1000, 1));
        assert_eq!(rigorous_compare(&a, &b, p), Comparison::Greater);
        assert_eq!(compare_by_logs(&a, &b, p), Comparison::Greater);
        // 2^(13/2) vs 90.93
        let a = PowerProduct::power(r(2, 1), r(13, 2));
        let b = PowerProduct::rational(decimal("90.93"));
        assert_eq!(rigorous_compare(&a, &b, p), Comparison::Less);
        assert_eq!(compare_by_logs(&a, &b, p), Comparison::Less);
        // equal values resolve exactly
        let a = PowerProduct::power(r(4, 1), r(1, 2));
        let b = PowerProduct::rational(r(2, 1));
        assert_eq!(rigorous_compare(&a, &b, p), Comparison::Equal);
        assert_eq!(compare_by_logs(&a, &b, Precision::with_cap_digits(30)), Comparison::Undecidable);
    }

    #[test]
    fn schedule_doubles_to_cap() {
        let p = Precision { start_bits: 64, cap_bits: 300 };
        assert_eq!(p.schedule().collect::<Vec<_>>(), vec![64, 128, 256, 300]);
    }
}
