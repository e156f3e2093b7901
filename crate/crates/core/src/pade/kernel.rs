//! Certified extrema and integrals of the two kernels that bound `Q`:
//!
//! * `f(t) = (1-t)^4 t (1 - 2bt + t^2)^2`, whose maximum on `[0, 1]` controls
//!   the exponential growth,
//! * `h(t) = (1-t)^4 (1 - 2bt + t^2)^2`, whose integral over `[0, 1]` is the
//!   leading constant.
//!
//! Both are polynomials with rational coefficients for rational `b`. The
//! maximum is located by isolating the real roots of `f'` with a Sturm
//! sequence and refining them by bisection; `f` is then bounded on each
//! isolating interval with interval arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::bounds::{BoundConstants, BoundStatus};
use super::PadeError;
use crate::rigor::{Enclosure, Interval};
use crate::util;

/// Dense polynomial over the rationals; `c[i]` multiplies `t^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RatPoly {
    c: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RatPoly {
    pub(crate) fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly { c }
    }

    fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn lead(&self) -> &BigRational {
        self.c.last().expect("nonzero polynomial")
    }

    pub(crate) fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatPoly::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    fn pow(&self, e: u32) -> Self {
        (0..e).fold(RatPoly::new(vec![rat(1)]), |acc, _| acc.mul(self))
    }

    fn derivative(&self) -> Self {
        RatPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * rat(i as i64))
                .collect(),
        )
    }

    pub(crate) fn eval(&self, t: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, a| acc * t + a)
    }

    fn eval_interval(&self, t: &Interval) -> Interval {
        self.c.iter().rev().fold(Interval::point(BigRational::zero()), |acc, a| {
            acc.mul(t).add(&Interval::point(a.clone()))
        })
    }

    /// `int_0^1 p(t) dt`.
    pub(crate) fn integral_01(&self) -> BigRational {
        self.c
            .iter()
            .enumerate()
            .map(|(i, a)| a / rat(i as i64 + 1))
            .fold(BigRational::zero(), |s, x| s + x)
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem = self.c.clone();
        let mut quo = vec![BigRational::zero(); self.c.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / d.lead();
            for (i, b) in d.c.iter().enumerate() {
                rem[shift + i] -= &f * b;
            }
            quo[shift] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (RatPoly::new(quo), RatPoly::new(rem))
    }

    fn monic(&self) -> Self {
        let l = self.lead().clone();
        RatPoly::new(self.c.iter().map(|a| a / &l).collect())
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Sturm chain of a square-free polynomial.
struct Sturm {
    chain: Vec<RatPoly>,
}

impl Sturm {
    fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(RatPoly::new(r.c.into_iter().map(|a| -a).collect()));
        }
        Sturm { chain }
    }

    fn variations(&self, t: &BigRational) -> usize {
        let signs: Vec<bool> = self
            .chain
            .iter()
            .map(|p| p.eval(t))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Isolating intervals `[lo, hi]`, of width at most `2^-refine_bits`, for
/// every root of `p` in `(0, 1)`. `p` must not vanish at 0 or 1.
fn isolate_roots(p: &RatPoly, refine_bits: u32) -> Vec<(BigRational, BigRational)> {
    let sqfree = p.div_rem(&p.gcd(&p.derivative())).0;
    let sturm = Sturm::new(&sqfree);
    let mut pending = vec![(rat(0), rat(1))];
    let mut isolated = Vec::new();
    while let Some((a, b)) = pending.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let m = (&a + &b) / rat(2);
                pending.push((m.clone(), b));
                pending.push((a, m));
            }
        }
    }
    let tol = BigRational::new(BigInt::one(), BigInt::one() << refine_bits);
    isolated
        .into_iter()
        .map(|(mut a, mut b)| {
            while &b - &a > tol {
                let m = (&a + &b) / rat(2);
                if sturm.count(&a, &m) == 1 {
                    b = m;
                } else {
                    a = m;
                }
            }
            (a, b)
        })
        .collect()
}

fn kernel_polys(b: &BigRational) -> (RatPoly, RatPoly) {
    let one_minus_t = RatPoly::new(vec![rat(1), rat(-1)]);
    let quad = RatPoly::new(vec![rat(1), -(b * rat(2)), rat(1)]);
    let h = one_minus_t.pow(4).mul(&quad.pow(2));
    let f = h.mul(&RatPoly::new(vec![rat(0), rat(1)]));
    (f, h)
}

/// Strip factors of `t` and `(t - 1)` so the remaining polynomial is nonzero
/// at both endpoints.
fn strip_endpoint_roots(mut p: RatPoly) -> RatPoly {
    let t_minus_1 = RatPoly::new(vec![rat(-1), rat(1)]);
    let t = RatPoly::new(vec![rat(0), rat(1)]);
    while !p.is_zero() && p.eval(&rat(1)).is_zero() {
        p = p.div_rem(&t_minus_1).0;
    }
    while !p.is_zero() && p.eval(&rat(0)).is_zero() {
        p = p.div_rem(&t).0;
    }
    p
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub b: String,
    /// Certified enclosure of `max_[0,1] f`.
    pub max: Enclosure,
    /// Enclosure of the maximizer.
    pub argmax: Enclosure,
    /// `int_0^1 h` as an exact fraction and as a decimal.
    pub integral_exact: String,
    pub integral_decimal: String,
    /// `max f <= 0.044479`.
    pub max_status: BoundStatus,
    /// `int h < 0.114552`.
    pub integral_status: BoundStatus,
}

const REFINE_BITS: u32 = 80;

/// Certified enclosure of `max_[0,1] f` and the maximizer.
pub(crate) fn kernel_max(b: &BigRational) -> (Interval, Interval) {
    let (f, _) = kernel_polys(b);
    let crit = strip_endpoint_roots(f.derivative());
    // f(0) = f(1) = 0 and f >= 0, so the maximum sits at an interior critical point
    let mut best: Option<(Interval, Interval, BigRational)> = None;
    for (lo, hi) in isolate_roots(&crit, REFINE_BITS) {
        let t = Interval::new(lo.clone(), hi.clone());
        let enclosure = f.eval_interval(&t);
        let mid = (&lo + &hi) / rat(2);
        let lower = f.eval(&mid);
        let replace = match &best {
            None => true,
            Some((e, _, _)) => enclosure.hi() > e.hi(),
        };
        if replace {
            best = Some((enclosure, t, lower));
        }
    }
    let (enc, t, lower) = best.expect("f has an interior maximum");
    // the upper bound comes from the best enclosure; a lower bound is any
    // attained value, so tighten with the exact value at the midpoint
    let lo = if &lower > enc.lo() { lower } else { enc.lo().clone() };
    let hi = enc.hi().clone();
    (Interval::new(lo.min(hi.clone()), hi), t)
}

pub(crate) fn kernel_integral(b: &BigRational) -> BigRational {
    kernel_polys(b).1.integral_01()
}

/// Certified `max_[0,1] f` and exact `int_0^1 h` for `b` in `[0.953, 1]`.
pub fn kernel_extrema(b: &BigRational) -> Result<KernelReport, PadeError> {
    let consts = BoundConstants::default();
    if b < &consts.b_min || b > &BigRational::one() {
        return Err(PadeError::BOutOfRange {
            b: util::ratio_to_decimal(b, 12),
        });
    }
    let (max, argmax) = kernel_max(b);
    let integral = kernel_integral(b);
    Ok(KernelReport {
        b: b.to_string(),
        max: (&max).into(),
        argmax: (&argmax).into(),
        integral_exact: integral.to_string(),
        integral_decimal: util::ratio_to_decimal(&integral, 15),
        max_status: if max.hi() <= &consts.kernel_max {
            BoundStatus::Pass
        } else {
            BoundStatus::Fail
        },
        integral_status: if integral < consts.kernel_integral {
            BoundStatus::Pass
        } else {
            BoundStatus::Fail
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::decimal;

    #[test]
    fn sturm_counts_known_roots() {
        // (t - 1/4)(t - 1/2)(t - 3/4)
        let p = RatPoly::new(vec![rat(1), rat(-4)])
            .mul(&RatPoly::new(vec![rat(1), rat(-2)]))
            .mul(&RatPoly::new(vec![rat(3), rat(-4)]));
        let roots = isolate_roots(&p, 30);
        assert_eq!(roots.len(), 3);
        for (lo, hi) in &roots {
            let hits = [decimal("0.25"), decimal("0.5"), decimal("0.75")]
                .iter()
                .filter(|r| lo <= *r && *r <= hi)
                .count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn integral_at_b_min_is_exact() {
        let i = kernel_integral(&decimal("0.953"));
        assert_eq!(i, BigRational::new(4510501.into(), 39375000.into()));
    }

    #[test]
    fn max_encloses_grid_samples() {
        let b = decimal("0.953");
        let (f, _) = kernel_polys(&b);
        let (max, _) = kernel_max(&b);
        for i in 0..=200 {
            let t = BigRational::new(i.into(), 200.into());
            assert!(f.eval(&t) <= *max.hi());
        }
        assert!(max.width() < decimal("0.000000000001"));
    }

    #[test]
    fn max_decreases_in_b() {
        let grid = ["0.953", "0.96", "0.97", "0.98", "0.99", "1"];
        let maxima: Vec<Interval> = grid.iter().map(|b| kernel_max(&decimal(b)).0).collect();
        for w in maxima.windows(2) {
            assert!(w[1].hi() < w[0].lo());
        }
    }

    #[test]
    fn out_of_range() {
        assert!(kernel_extrema(&decimal("0.9")).is_err());
        assert!(kernel_extrema(&decimal("1.01")).is_err());
    }
}
