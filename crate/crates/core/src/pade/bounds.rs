//! Numeric bounds attached to the diagonal approximants.
//!
//! Every verdict compares exact rationals, or exact rationals against an
//! outward-rounded enclosure of pi, so no PASS rests on floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{build_normalized, content, eval_at_z0, PadeError};
use crate::quadring::QuadInt;
use crate::rigor::{self, Comparison, Precision};
use crate::util::{self, decimal};

/// Decimal constants quoted for the approximation bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundConstants {
    pub q_coeff: BigRational,
    pub q_base: BigRational,
    pub e_coeff: BigRational,
    pub e_base: BigRational,
    pub raw_base: BigRational,
    pub content_base: BigRational,
    pub kernel_max: BigRational,
    pub kernel_integral: BigRational,
    pub b_min: BigRational,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            q_coeff: decimal("0.308"),
            q_base: decimal("89.3445"),
            e_coeff: decimal("0.377"),
            e_base: decimal("7.847"),
            raw_base: decimal("262.9407"),
            content_base: decimal("2.943"),
            kernel_max: decimal("0.044479"),
            kernel_integral: decimal("0.114552"),
            b_min: decimal("0.953"),
        }
    }
}

impl BoundConstants {
    /// `9^9 / 8^8`.
    pub fn nine_eight_ratio() -> BigRational {
        BigRational::new(BigInt::from(9u64.pow(9)), BigInt::from(8u64.pow(8)))
    }

    /// `3^18 / 2^16`.
    pub fn trinomial_base() -> BigRational {
        BigRational::new(BigInt::from(3u64.pow(18)), BigInt::from(2u64.pow(16)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Pass,
    Fail,
    /// The bound is not asserted for these parameters.
    NotClaimed,
}

impl BoundStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            BoundStatus::Pass
        } else {
            BoundStatus::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QBoundReport {
    pub j: u32,
    pub g: u8,
    /// `b = 1 - |lambda|^2 / (2 |beta|^2)`, truncated to 12 places.
    pub b: String,
    pub abs_q_star: f64,
    pub bound: f64,
    /// `ln(bound / |Q*(z0)|)`; positive means the bound holds.
    pub log_margin: f64,
    pub status: BoundStatus,
}

/// `b = Re(conj(beta) / beta) = 1 - N(lambda) / (2 N(beta))`.
pub fn b_parameter(beta: &QuadInt, lambda: &QuadInt) -> BigRational {
    BigRational::one()
        - BigRational::new(
            BigInt::from(lambda.norm()),
            BigInt::from(beta.norm()) * BigInt::from(2),
        )
}

/// Checks `|Q*(z0)| < 0.308 * 89.3445^j` at `z0 = lambda / beta`, comparing
/// squares exactly: `N(beta^r Q*(z0)) / N(beta)^r` against the squared bound.
///
/// The bound is derived for `g = 0` only; `g = 1` is reported as not claimed.
pub fn check_q_bound(j: u32, g: u8, beta: &QuadInt, lambda: &QuadInt) -> Result<QBoundReport, PadeError> {
    let consts = BoundConstants::default();
    let b = b_parameter(beta, lambda);
    if b < consts.b_min || b > BigRational::one() {
        return Err(PadeError::BOutOfRange {
            b: util::ratio_to_decimal(&b, 12),
        });
    }
    let sys = build_normalized(j, g)?;
    let r = sys.r() as usize;
    let q_hat = eval_at_z0(&sys.q, beta, lambda, r)?;
    let value_sq = BigRational::new(
        BigInt::from(q_hat.norm()),
        BigInt::from(num_traits::pow(beta.norm(), r)),
    );
    let bound = &consts.q_coeff * num_traits::pow(consts.q_base.clone(), j as usize);
    let bound_sq = &bound * &bound;
    let ln_value = 0.5 * util::ln_ratio(&value_sq);
    let ln_bound = util::ln_ratio(&bound);
    let status = if g == 0 {
        BoundStatus::from_bool(value_sq < bound_sq)
    } else {
        BoundStatus::NotClaimed
    };
    Ok(QBoundReport {
        j,
        g,
        b: util::ratio_to_decimal(&b, 12),
        abs_q_star: ln_value.exp(),
        bound: ln_bound.exp(),
        log_margin: ln_bound - ln_value,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContentReport {
    pub j: u32,
    pub g: u8,
    pub content: String,
    /// `c_g(j) > 2.943^j`, exactly.
    pub status: BoundStatus,
    /// `c_g(j)` divides every coefficient of `P` and `E`.
    pub divides: bool,
}

pub fn check_content_bound(j: u32, g: u8) -> Result<ContentReport, PadeError> {
    let base = BoundConstants::default().content_base;
    let raw = super::build_diagonal(j, g)?;
    let c = raw.q.content();
    let ci = BigInt::from(c.clone());
    // c > (n/d)^j  <=>  c d^j > n^j
    let lhs = &ci * num_traits::pow(base.denom().clone(), j as usize);
    let rhs = num_traits::pow(base.numer().clone(), j as usize);
    let divides = raw.p.exact_div_scalar(&ci).is_some() && raw.e.exact_div_scalar(&ci).is_some();
    Ok(ContentReport {
        j,
        g,
        content: c.to_string(),
        status: BoundStatus::from_bool(lhs > rhs),
        divides,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EBoundReport {
    pub j: u32,
    pub g: u8,
    /// `(k+r)! / ((k-r-1)! (2r+1)!)`, the integral bound on `|E_r(z0)|`.
    pub ratio: String,
    pub content: String,
    /// `ratio < 0.377 / sqrt(j) * (9^9/8^8)^j`, claimed for `g = 1`.
    pub raw_status: BoundStatus,
    pub raw_log_margin: f64,
    /// `ratio / c_g(j) < 0.377 / j * 7.847^j`.
    pub normalized_status: BoundStatus,
    pub normalized_log_margin: f64,
}

/// `(k+r)! / ((k-r-1)! (2r+1)!)`, which equals `binom(k + r, 2r + 1)`.
pub fn e_factorial_ratio(j: u32, g: u8) -> BigUint {
    let k = 5 * j as u64;
    let r = 4 * j as u64 - g as u64;
    super::binom(k + r, (2 * r + 1) as i64)
}

/// Both forms of the `E` bound. The raw form is evaluated for both `g` but
/// only claimed for `g = 1`; the normalized form is claimed for both.
pub fn check_e_bound(j: u32, g: u8) -> Result<EBoundReport, PadeError> {
    let consts = BoundConstants::default();
    let ratio = e_factorial_ratio(j, g);
    let c = content(j, g)?;
    let ratio_q = BigRational::from_integer(BigInt::from(ratio.clone()));
    let jq = BigRational::from_integer(BigInt::from(j));

    // ratio^2 * j < 0.377^2 * (9^9/8^8)^(2j)
    let lhs = &ratio_q * &ratio_q * &jq;
    let rhs = &consts.e_coeff * &consts.e_coeff * num_traits::pow(BoundConstants::nine_eight_ratio(), 2 * j as usize);
    let raw_ok = lhs < rhs;
    let raw_log_margin = 0.5 * (util::ln_ratio(&rhs) - util::ln_ratio(&lhs));

    let norm = &ratio_q / BigRational::from_integer(BigInt::from(c.clone()));
    let bound = &consts.e_coeff / &jq * num_traits::pow(consts.e_base.clone(), j as usize);
    let normalized_ok = norm < bound;

    Ok(EBoundReport {
        j,
        g,
        ratio: ratio.to_string(),
        content: c.to_string(),
        raw_status: if g == 1 {
            BoundStatus::from_bool(raw_ok)
        } else {
            BoundStatus::NotClaimed
        },
        raw_log_margin,
        normalized_status: BoundStatus::from_bool(normalized_ok),
        normalized_log_margin: util::ln_ratio(&bound) - util::ln_ratio(&norm),
    })
}

/// `int_0^1 t^r (1-t)^r dt`, by expanding the integrand and integrating
/// term by term.
pub fn beta_integral(r: u32) -> BigRational {
    (0..=r as u64)
        .map(|i| {
            let c = BigInt::from(super::binom(r as u64, i as i64));
            let c = if i % 2 == 1 { -c } else { c };
            BigRational::new(c, BigInt::from(r as u64 + i + 1))
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn pow_self(n: u64) -> BigUint {
    num_traits::pow(BigUint::from(n), n as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorialReport {
    pub args: Vec<u64>,
    pub status: BoundStatus,
    pub comparison: Comparison,
}

/// Stirling-type bounds on multinomial coefficients:
///
/// * `(A+B+C)!/(A!B!C!) < 1/(2pi) * sqrt((A+B+C)/(ABC)) * N^N/(A^A B^B C^C)`
/// * `(A+B)!/(A!B!) < 1/sqrt(2pi) * sqrt((A+B)/(AB)) * N^N/(A^A B^B)`
///
/// Both sides are squared so that pi is the only irrational quantity.
pub fn factorial_ratio_bounds(a: u64, b: u64, c: Option<u64>, prec: Precision) -> Result<FactorialReport, PadeError> {
    let mut args = vec![a, b];
    args.extend(c);
    if args.iter().any(|&x| x == 0) {
        return Err(PadeError::InvalidParameters("arguments must be positive".into()));
    }
    let n: u64 = args.iter().sum();
    let lhs = args.iter().fold(factorial(n), |acc, &x| acc / factorial(x));
    let shape = BigRational::new(
        BigInt::from(pow_self(n)),
        BigInt::from(args.iter().fold(BigUint::one(), |acc, &x| acc * pow_self(x))),
    );
    let prod: BigUint = args.iter().fold(BigUint::one(), |acc, &x| acc * x);
    // lhs^2 * prod * (2pi)^(#args - 1) < n * shape^2
    let lhs_q = BigRational::from_integer(BigInt::from(lhs));
    let left_exact = &lhs_q * &lhs_q * BigRational::from_integer(BigInt::from(prod));
    let right = BigRational::from_integer(BigInt::from(n)) * &shape * &shape;
    let pi_power = (args.len() - 1) as u32;
    let cmp = rigor::compare_with(prec, |bits| {
        let two_pi = rigor::pi(bits + 8).scale(&BigRational::from_integer(2.into()));
        let mut f = rigor::Interval::point(left_exact.clone());
        for _ in 0..pi_power {
            f = f.mul(&two_pi);
        }
        (f, rigor::Interval::point(right.clone()))
    });
    Ok(FactorialReport {
        args,
        status: BoundStatus::from_bool(cmp == Comparison::Less),
        comparison: cmp,
    })
}

/// `(9j)! / ((j-1)! (4j)!^2) < 3/(8 pi) * (3^18 / 2^16)^j`.
pub fn diagonal_factorial_bound(j: u32, prec: Precision) -> Result<FactorialReport, PadeError> {
    if j == 0 {
        return Err(PadeError::InvalidParameters("j must be positive".into()));
    }
    let jj = j as u64;
    let f4 = factorial(4 * jj);
    let lhs = factorial(9 * jj) / (factorial(jj - 1) * &f4 * &f4);
    let left = BigRational::from_integer(BigInt::from(lhs) * 8);
    let right = BigRational::from_integer(3.into()) * num_traits::pow(BoundConstants::trinomial_base(), j as usize);
    let cmp = rigor::compare_with(prec, |bits| {
        (
            rigor::Interval::point(left.clone()).mul(&rigor::pi(bits + 8)),
            rigor::Interval::point(right.clone()),
        )
    });
    Ok(FactorialReport {
        args: vec![jj],
        status: BoundStatus::from_bool(cmp == Comparison::Less),
        comparison: cmp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_consistent() {
        let c = BoundConstants::default();
        // q_base is the raw base divided by the content base, rounded up at
        // the fourth decimal
        let q = &c.raw_base / &c.content_base;
        assert!(c.q_base >= q && &c.q_base - &q < decimal("0.0001"));
        let e = BoundConstants::nine_eight_ratio() / &c.content_base;
        assert!(c.e_base >= e && &c.e_base - &e < decimal("0.001"));
        // raw_base = 3^18/2^16 * kernel_max, printed to four decimals
        let raw = BoundConstants::trinomial_base() * &c.kernel_max;
        assert!((&c.raw_base - &raw) < decimal("0.0001") && (&raw - &c.raw_base) < decimal("0.0001"));
    }

    #[test]
    fn q_coeff_dominates_its_derivation() {
        // 3/(8 pi) * kernel_integral / kernel_max <= 0.308
        let c = BoundConstants::default();
        let pi = rigor::pi(64);
        let lhs_hi = BigRational::from_integer(3.into()) * &c.kernel_integral
            / (BigRational::from_integer(8.into()) * pi.lo() * &c.kernel_max);
        assert!(lhs_hi <= c.q_coeff);
    }

    #[test]
    fn e_ratio_j1() {
        assert_eq!(e_factorial_ratio(1, 1), BigUint::from(8u32));
        let r = check_e_bound(1, 1).unwrap();
        assert_eq!(r.ratio, "8");
        assert_eq!(r.raw_status, BoundStatus::Pass);
    }

    #[test]
    fn e_raw_bound_j51() {
        let r = check_e_bound(51, 1).unwrap();
        assert_eq!(r.raw_status, BoundStatus::Pass);
        assert!(r.raw_log_margin > 0.0);
        assert_eq!(check_e_bound(51, 0).unwrap().raw_status, BoundStatus::NotClaimed);
    }

    #[test]
    fn beta_integrals() {
        for r in 0..=10u64 {
            let expect = BigRational::new(
                BigInt::from(factorial(r) * factorial(r)),
                BigInt::from(factorial(2 * r + 1)),
            );
            assert_eq!(beta_integral(r as u32), expect, "r = {r}");
        }
    }

    #[test]
    fn factorial_bounds() {
        let p = Precision::default();
        let r = factorial_ratio_bounds(1, 1, Some(1), p).unwrap();
        assert_eq!(r.status, BoundStatus::Pass);
        let r = factorial_ratio_bounds(51, 8 * 51 - 1, None, p).unwrap();
        assert_eq!(r.status, BoundStatus::Pass);
        for j in [1, 2, 7, 30] {
            assert_eq!(diagonal_factorial_bound(j, p).unwrap().status, BoundStatus::Pass);
        }
        assert!(factorial_ratio_bounds(0, 1, None, p).is_err());
    }

    #[test]
    fn q_bound_small_instance() {
        let beta = QuadInt::new(1015, 1, 76).unwrap();
        let lambda = QuadInt::new(0, 2, 76).unwrap();
        let r = check_q_bound(2, 0, &beta, &lambda).unwrap();
        assert_eq!(r.status, BoundStatus::Pass);
        assert_eq!(check_q_bound(2, 1, &beta, &lambda).unwrap().status, BoundStatus::NotClaimed);
        // |beta|^2 = 38 + 4 = 42 puts b = 1 - 2*38/42 far below 0.953
        let small = QuadInt::new(2, 1, 38).unwrap();
        let lam = QuadInt::new(0, 2, 38).unwrap();
        assert!(matches!(check_q_bound(1, 0, &small, &lam), Err(PadeError::BOutOfRange { .. })));
    }
}
