//! Certification of the huge-solution size condition
//! `|beta| > C^exponent(sigma) * D^eta(sigma)` and the thresholds it unlocks.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base::BaseSolution;
use crate::hensel::is_prime;
use crate::pade::bounds::b_parameter;
use crate::quadring::is_nonsquare;
use crate::report::{ratio_string, ser_decimal, ser_ratio};
use crate::rigor::{self, Comparison, Enclosure, Interval, PowerProduct, Precision};
use crate::util::{decimal, ratio_to_decimal, ratio_to_f64};

const REPORT_BITS: u32 = 128;

pub const CERTIFICATE_SCHEMA: &str = "rnlab.certificate/1";
pub const SIGMA_SCHEMA: &str = "rnlab.max-sigma/1";

pub const MEANING: &str = "for x > X_star, x^2+D = p^n*m forces m > x^sigma";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("sigma = {0} is outside the admissible range (0, 0.847)")]
    InvalidSigma(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("threshold is not increasing between sigma = {lo} and sigma = {hi}")]
    NotMonotone { lo: String, hi: String },
    #[error("comparison undecidable at the precision cap (sigma = {0})")]
    Undecidable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "5j")]
    FiveJ,
    #[serde(rename = "7j")]
    SevenJ,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::FiveJ => "5j",
            Variant::SevenJ => "7j",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "5j" => Ok(Variant::FiveJ),
            "7j" => Ok(Variant::SevenJ),
            _ => Err(format!("unknown variant {s:?} (expected 5j or 7j)")),
        }
    }
}

/// `eta = (a - b sigma)/(c - d sigma)`, `exponent = (1.96 - sigma)/(c - d sigma)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantConstants {
    pub eta_num: (BigRational, BigRational),
    pub den: (BigRational, BigRational),
    pub exp_num: (BigRational, BigRational),
    pub base_odd: BigRational,
    pub base_two: BigRational,
    pub beta_floor: BigRational,
    /// Whether `|beta|` must exceed the floor strictly.
    pub floor_strict: bool,
}

impl VariantConstants {
    pub fn of(v: Variant) -> Self {
        let int = |n: i64| BigRational::from_integer(n.into());
        match v {
            Variant::FiveJ => VariantConstants {
                eta_num: (decimal("7.84"), int(4)),
                den: (decimal("7.64"), int(9)),
                exp_num: (decimal("1.96"), int(1)),
                base_odd: decimal("2008.832"),
                base_two: decimal("7.847"),
                beta_floor: decimal("90.93"),
                floor_strict: false,
            },
            Variant::SevenJ => VariantConstants {
                eta_num: (decimal("11.76"), int(6)),
                den: (decimal("11.48"), int(13)),
                exp_num: (decimal("1.96"), int(1)),
                base_odd: int(42106),
                base_two: decimal("10.28"),
                beta_floor: int(1300),
                floor_strict: true,
            },
        }
    }

    fn lin(c: &(BigRational, BigRational), s: &BigRational) -> BigRational {
        &c.0 - &c.1 * s
    }

    pub fn eta(&self, sigma: &BigRational) -> BigRational {
        Self::lin(&self.eta_num, sigma) / Self::lin(&self.den, sigma)
    }

    pub fn exponent(&self, sigma: &BigRational) -> BigRational {
        Self::lin(&self.exp_num, sigma) / Self::lin(&self.den, sigma)
    }

    pub fn base(&self, p: u64) -> &BigRational {
        if p == 2 {
            &self.base_two
        } else {
            &self.base_odd
        }
    }
}

/// Constants quoted in the inequality chain audited against decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditConstants {
    pub q_lambda_coeff: BigRational,
    pub beta_exp: BigRational,
    pub nine_tenths: BigRational,
    pub mu_div: BigRational,
    pub x_coeff: BigRational,
    pub final_coeff: BigRational,
    pub mid_coeff: BigRational,
}

impl Default for AuditConstants {
    fn default() -> Self {
        AuditConstants {
            q_lambda_coeff: decimal("0.238074"),
            beta_exp: decimal("0.4873"),
            nine_tenths: decimal("0.9"),
            mu_div: decimal("6.89"),
            x_coeff: decimal("0.7"),
            final_coeff: decimal("6.32"),
            mid_coeff: decimal("5.24"),
        }
    }
}

impl AuditConstants {
    /// The gap `5 n0 - 1` in the final cofactor bound.
    pub fn p_pow_gap(n0: u32) -> u32 {
        5 * n0 - 1
    }
}

/// Exclusive upper end of the admissible sigma range, for both variants.
pub fn sigma_limit() -> BigRational {
    decimal("0.847")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FailReason {
    NotExactPower,
    SharedFactor,
    SquareD,
    SmallD,
    BetaTooSmall,
    BOutOfRange,
    ConditionFails,
    Undecidable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum CertStatus {
    Certified,
    Failed(FailReason),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactValue {
    #[serde(serialize_with = "ser_ratio")]
    pub exact: BigRational,
    pub approx: f64,
}

impl From<BigRational> for ExactValue {
    fn from(exact: BigRational) -> Self {
        let approx = ratio_to_f64(&exact);
        ExactValue { exact, approx }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HugeSolutionCertificate {
    pub schema: &'static str,
    #[serde(flatten)]
    pub base: BaseSolution,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma: BigRational,
    pub variant: Variant,
    pub eta: ExactValue,
    pub exponent: ExactValue,
    #[serde(rename = "C_const")]
    pub c_const: Enclosure,
    pub threshold: Enclosure,
    pub beta_abs: Enclosure,
    pub beta_floor: ExactValue,
    /// `1 - N(lambda) / (2 N(beta))`.
    pub b: Option<ExactValue>,
    pub comparison: Comparison,
    /// Enclosure of `ln|beta| - ln threshold` once it excludes zero.
    pub log_margin: Option<Enclosure>,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "X_star", serialize_with = "ser_decimal")]
    pub x_star: BigUint,
    pub x_star_digits: usize,
    #[serde(serialize_with = "ser_decimal")]
    pub x_min_inference: BigUint,
    pub status: CertStatus,
    /// Every failed hypothesis, in check order; `status` carries the first.
    pub failures: Vec<FailReason>,
    pub meaning: &'static str,
}

impl HugeSolutionCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertStatus::Certified
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "X_star", serialize_with = "ser_decimal")]
    pub x_star: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub x_min_inference: BigUint,
}

/// `M = 250 n0`, `X* = p^M` and the intermediate bound `p^(125 n0)`.
pub fn thresholds(cert: &HugeSolutionCertificate) -> Thresholds {
    thresholds_for(cert.base.p, cert.base.n0)
}

pub fn thresholds_for(p: u64, n0: u32) -> Thresholds {
    let m = 250 * n0 as u64;
    Thresholds {
        m,
        x_star: BigUint::from(p).pow(250 * n0),
        x_min_inference: BigUint::from(p).pow(125 * n0),
    }
}

fn validate_input(base: &BaseSolution) -> Result<(), CertifyError> {
    if base.d == 0 {
        return Err(CertifyError::InvalidInput("D must be positive".into()));
    }
    if !is_prime(base.p) {
        return Err(CertifyError::InvalidInput(format!("p = {} is not prime", base.p)));
    }
    if base.n0 == 0 || base.x0.is_zero() {
        return Err(CertifyError::InvalidInput("x0 and n0 must be at least 1".into()));
    }
    Ok(())
}

fn validate_sigma(sigma: &BigRational) -> Result<(), CertifyError> {
    if !sigma.is_positive() || sigma >= &sigma_limit() {
        return Err(CertifyError::InvalidSigma(ratio_string(sigma)));
    }
    Ok(())
}

/// `|beta|` as an exact power of `p`.
pub fn beta_abs(base: &BaseSolution) -> PowerProduct {
    PowerProduct::power(
        BigRational::from_integer(base.p.into()),
        BigRational::new(base.beta_norm_exponent().into(), 2.into()),
    )
}

/// `C^exponent(sigma) * D^eta(sigma)`.
pub fn threshold(base: &BaseSolution, sigma: &BigRational, variant: Variant) -> PowerProduct {
    let k = VariantConstants::of(variant);
    PowerProduct::power(k.base(base.p).clone(), k.exponent(sigma))
        .times(BigRational::from_integer(base.d.into()), k.eta(sigma))
}

/// Rigorous comparison of `|beta|` against the threshold, ignoring every
/// other hypothesis.
pub fn condition(base: &BaseSolution, sigma: &BigRational, variant: Variant, prec: Precision) -> Comparison {
    rigor::rigorous_compare(&beta_abs(base), &threshold(base, sigma, variant), prec)
}

fn beta_floor_ok(base: &BaseSolution, variant: Variant) -> bool {
    let k = VariantConstants::of(variant);
    // |beta|^2 = p^e against floor^2, exactly
    let e = base.beta_norm_exponent();
    let sq = if e >= 0 {
        BigRational::from_integer(BigUint::from(base.p).pow(e as u32).into())
    } else {
        BigRational::new(1.into(), BigUint::from(base.p).pow((-e) as u32).into())
    };
    let floor_sq = &k.beta_floor * &k.beta_floor;
    if k.floor_strict {
        sq > floor_sq
    } else {
        sq >= floor_sq
    }
}

fn log_margin(lhs: &PowerProduct, rhs: &PowerProduct, prec: Precision) -> Option<Interval> {
    prec.schedule().find_map(|bits| {
        let m = lhs.ln(bits).sub(&rhs.ln(bits));
        let z = BigRational::zero();
        (m.lo() > &z || m.hi() < &z).then_some(m)
    })
}

pub fn certify(base: &BaseSolution, sigma: &BigRational, variant: Variant, prec: Precision) -> Result<HugeSolutionCertificate, CertifyError> {
    validate_input(base)?;
    validate_sigma(sigma)?;
    let k = VariantConstants::of(variant);
    let lhs = beta_abs(base);
    let rhs = threshold(base, sigma, variant);
    let c_pow = PowerProduct::power(k.base(base.p).clone(), k.exponent(sigma));

    let b = match (base.beta(), base.lambda()) {
        (Ok(beta), Ok(lambda)) if base.is_exact_power() => Some(b_parameter(&beta, &lambda)),
        _ => None,
    };
    let b_ok = b.as_ref().is_some_and(|b| b >= &decimal("0.953"));

    let comparison = rigor::rigorous_compare(&lhs, &rhs, prec);
    let margin = match comparison {
        Comparison::Greater | Comparison::Less => log_margin(&lhs, &rhs, prec),
        _ => None,
    };

    let mut failures = Vec::new();
    if !base.is_exact_power() {
        failures.push(FailReason::NotExactPower);
    }
    if base.d % base.p == 0 {
        failures.push(FailReason::SharedFactor);
    }
    if !is_nonsquare(base.d) {
        failures.push(FailReason::SquareD);
    }
    if !beta_floor_ok(base, variant) {
        failures.push(FailReason::BetaTooSmall);
    }
    if base.d <= 12 {
        failures.push(FailReason::SmallD);
    }
    if !b_ok {
        failures.push(FailReason::BOutOfRange);
    }
    match comparison {
        Comparison::Greater if margin.is_some() => {}
        Comparison::Undecidable | Comparison::Greater => failures.push(FailReason::Undecidable),
        Comparison::Less | Comparison::Equal => failures.push(FailReason::ConditionFails),
    }
    let status = failures
        .first()
        .map_or(CertStatus::Certified, |&r| CertStatus::Failed(r));

    let t = thresholds_for(base.p, base.n0);
    let x_star_digits = t.x_star.to_str_radix(10).len();
    Ok(HugeSolutionCertificate {
        schema: CERTIFICATE_SCHEMA,
        base: base.clone(),
        sigma: sigma.clone(),
        variant,
        eta: k.eta(sigma).into(),
        exponent: k.exponent(sigma).into(),
        c_const: (&c_pow.enclose(REPORT_BITS)).into(),
        threshold: (&rhs.enclose(REPORT_BITS)).into(),
        beta_abs: (&lhs.enclose(REPORT_BITS)).into(),
        beta_floor: k.beta_floor.clone().into(),
        b: b.map(Into::into),
        comparison,
        log_margin: margin.as_ref().map(Into::into),
        m: t.m,
        x_star: t.x_star,
        x_star_digits,
        x_min_inference: t.x_min_inference,
        status,
        failures,
        meaning: MEANING,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaInterval {
    pub schema: &'static str,
    #[serde(flatten)]
    pub base: BaseSolution,
    pub variant: Variant,
    pub empty: bool,
    pub reason: Option<String>,
    #[serde(serialize_with = "ser_ratio")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub hi: BigRational,
    pub lo_decimal: String,
    pub hi_decimal: String,
    pub width: String,
    /// The condition still holds at the top of the admissible range.
    pub saturated: bool,
    pub grid_points: usize,
    pub beta_floor_ok: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub quoted_sigma: BigRational,
    pub quoted_sigma_certifiable: bool,
    pub note: String,
}

const GRID: u32 = 16;
const BISECT_WIDTH: &str = "0.000001";

/// Largest sigma for which the size condition holds, enclosed by bisection.
pub fn max_sigma(base: &BaseSolution, variant: Variant, prec: Precision) -> Result<SigmaInterval, CertifyError> {
    validate_input(base)?;
    if !base.is_exact_power() {
        return Err(CertifyError::InvalidInput(format!(
            "{}^2 + {} is not {}^{}",
            base.x0, base.d, base.p, base.n0
        )));
    }
    let limit = sigma_limit();
    let grid: Vec<BigRational> = (0..=GRID)
        .map(|i| &limit * BigRational::new(i.into(), GRID.into()))
        .collect();
    for w in grid.windows(2) {
        let a = threshold(base, &w[0], variant);
        let b = threshold(base, &w[1], variant);
        if rigor::rigorous_compare(&a, &b, prec) != Comparison::Less {
            return Err(CertifyError::NotMonotone {
                lo: ratio_string(&w[0]),
                hi: ratio_string(&w[1]),
            });
        }
    }

    let holds = |s: &BigRational| -> Result<bool, CertifyError> {
        match condition(base, s, variant, prec) {
            Comparison::Greater => Ok(true),
            Comparison::Less | Comparison::Equal => Ok(false),
            Comparison::Undecidable => Err(CertifyError::Undecidable(ratio_string(s))),
        }
    };

    let quoted = BigRational::new(7.into(), 50.into());
    let zero = BigRational::zero();
    let (empty, saturated, lo, hi, reason) = if !holds(&zero)? {
        let reason = "the condition already fails as sigma approaches 0".to_string();
        (true, false, zero.clone(), zero, Some(reason))
    } else if holds(&limit)? {
        (false, true, limit.clone(), limit.clone(), None)
    } else {
        let tol = decimal(BISECT_WIDTH);
        let (mut lo, mut hi) = (zero, limit.clone());
        while &hi - &lo > tol {
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if holds(&mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (false, false, lo, hi, None)
    };
    let quoted_ok = !empty && holds(&quoted)?;
    let floor_ok = beta_floor_ok(base, variant);
    let mut note = if quoted_ok {
        format!(
            "sigma = {} satisfies the size condition",
            ratio_string(&quoted)
        )
    } else {
        format!(
            "sigma = {} does not satisfy the size condition; the certifiable range ends near {}",
            ratio_string(&quoted),
            ratio_to_decimal(&lo, 7)
        )
    };
    if !floor_ok {
        note.push_str(&format!(
            "; |beta| is below the {variant} floor {}, so no sigma is certified",
            ratio_to_decimal(&VariantConstants::of(variant).beta_floor, 2)
        ));
    }
    Ok(SigmaInterval {
        schema: SIGMA_SCHEMA,
        base: base.clone(),
        variant,
        empty,
        reason,
        lo_decimal: ratio_to_decimal(&lo, 9),
        hi_decimal: ratio_to_decimal(&hi, 9),
        width: ratio_to_decimal(&(&hi - &lo), 12),
        lo,
        hi,
        saturated,
        grid_points: grid.len(),
        beta_floor_ok: floor_ok,
        quoted_sigma: quoted,
        quoted_sigma_certifiable: quoted_ok,
        note,
    })
}

/// Convenience: sigma as a float, for reporting only.
pub fn sigma_f64(s: &BigRational) -> f64 {
    ratio_to_f64(s)
}

impl fmt::Display for HugeSolutionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            CertStatus::Certified => "Certified".to_string(),
            CertStatus::Failed(r) => format!("Failed ({r:?})"),
        };
        writeln!(
            f,
            "D={} p={} x0={} n0={} sigma={} variant={}",
            self.base.d,
            self.base.p,
            self.base.x0,
            self.base.n0,
            ratio_string(&self.sigma),
            self.variant
        )?;
        writeln!(f, "status     {status}")?;
        writeln!(f, "eta        {} ~ {:.6}", ratio_string(&self.eta.exact), self.eta.approx)?;
        writeln!(f, "exponent   {} ~ {:.6}", ratio_string(&self.exponent.exact), self.exponent.approx)?;
        writeln!(f, "C          [{}, {}]", self.c_const.lo, self.c_const.hi)?;
        writeln!(f, "threshold  [{}, {}]", self.threshold.lo, self.threshold.hi)?;
        writeln!(f, "|beta|     [{}, {}]", self.beta_abs.lo, self.beta_abs.hi)?;
        if let Some(m) = &self.log_margin {
            writeln!(f, "ln margin  [{}, {}]", m.lo, m.hi)?;
        }
        writeln!(f, "M          {}", self.m)?;
        writeln!(f, "X_star     {}^{} ({} digits)", self.base.p, self.m, self.x_star_digits)?;
        write!(f, "meaning    {}", self.meaning)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn main_base() -> BaseSolution {
        BaseSolution::new(76, 101, 1015u32, 3)
    }

    // f64 root of ln|beta| (c - d s) = (1.96 - s) ln C + (a - b s) ln D.
    fn sigma_root(lnb: f64, c: f64, d_: f64, a: f64, b: f64, lnc: f64, lnd: f64) -> f64 {
        let f = |s: f64| lnb * (c - d_ * s) - (1.96 - s) * lnc - (a - b * s) * lnd;
        let (mut lo, mut hi) = (0.0, 0.847);
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if f(m) > 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        lo
    }

    #[test]
    fn certified_at_one_tenth() {
        let c = certify(&main_base(), &r(1, 10), Variant::FiveJ, Precision::default()).unwrap();
        assert_eq!(c.status, CertStatus::Certified);
        assert_eq!(c.m, 750);
        assert!((c.threshold.approx - 972.2).abs() < 0.5, "{}", c.threshold.approx);
        assert!((c.beta_abs.approx - 1030301f64.sqrt()).abs() < 1e-9);
        let m = c.log_margin.unwrap();
        assert!(m.lo.parse::<f64>().unwrap() > 0.0);
    }

    #[test]
    fn fails_at_seven_fiftieths() {
        let c = certify(&main_base(), &r(7, 50), Variant::FiveJ, Precision::default()).unwrap();
        assert_eq!(c.status, CertStatus::Failed(FailReason::ConditionFails));
        assert!((c.threshold.approx - 1225.7).abs() < 0.5, "{}", c.threshold.approx);
        assert_eq!(c.m, 750);
    }

    #[test]
    fn two_adic_beta_too_small() {
        let b = BaseSolution::new(7, 2, 181u32, 15);
        let c = certify(&b, &r(1, 10), Variant::FiveJ, Precision::default()).unwrap();
        assert_eq!(c.status, CertStatus::Failed(FailReason::BetaTooSmall));
        assert!(c.failures.contains(&FailReason::SmallD));
        assert!((c.beta_abs.approx - 2f64.powf(6.5)).abs() < 1e-9);
    }

    #[test]
    fn failure_order() {
        let p = Precision::default();
        let s = r(1, 10);
        let st = |b: BaseSolution| certify(&b, &s, Variant::FiveJ, p).unwrap().status;
        assert_eq!(st(BaseSolution::new(76, 101, 1014u32, 3)), CertStatus::Failed(FailReason::NotExactPower));
        // 3^2 + 18 = 27
        assert_eq!(st(BaseSolution::new(18, 3, 3u32, 3)), CertStatus::Failed(FailReason::SharedFactor));
        // 4^2 + 16 = 32
        assert_eq!(st(BaseSolution::new(16, 2, 4u32, 5)), CertStatus::Failed(FailReason::SharedFactor));
        // 1^2 + 4 = 5
        assert_eq!(st(BaseSolution::new(4, 5, 1u32, 1)), CertStatus::Failed(FailReason::SquareD));
        // 1^2 + 2 = 3
        assert_eq!(st(BaseSolution::new(2, 3, 1u32, 1)), CertStatus::Failed(FailReason::BetaTooSmall));
        // 4^2 + 11 = 27
        let c = certify(&BaseSolution::new(11, 3, 4u32, 3), &s, Variant::FiveJ, p).unwrap();
        assert!(c.failures.contains(&FailReason::SmallD));
        // 5^2 + 76 = 101
        assert_eq!(st(BaseSolution::new(76, 101, 5u32, 1)), CertStatus::Failed(FailReason::BetaTooSmall));
    }

    #[test]
    fn sigma_range_enforced() {
        let p = Precision::default();
        for s in [r(0, 1), r(-1, 10), r(847, 1000), r(9, 10)] {
            assert!(matches!(
                certify(&main_base(), &s, Variant::FiveJ, p),
                Err(CertifyError::InvalidSigma(_))
            ));
        }
        assert!(certify(&main_base(), &r(846, 1000), Variant::FiveJ, p).is_ok());
    }

    #[test]
    fn variant_formulas_exact() {
        let k = VariantConstants::of(Variant::FiveJ);
        assert_eq!(k.eta(&r(1, 10)), r(744, 674));
        assert_eq!(k.exponent(&r(1, 10)), r(186, 674));
        let k7 = VariantConstants::of(Variant::SevenJ);
        assert_eq!(k7.eta(&r(0, 1)), r(1176, 1148));
        assert!(VariantConstants::lin(&k7.den, &decimal("0.883")).is_positive());
    }

    #[test]
    fn max_sigma_matches_float_root() {
        let b = main_base();
        let iv = max_sigma(&b, Variant::FiveJ, Precision::default()).unwrap();
        let lnb = 1.5 * 101f64.ln();
        let want = sigma_root(lnb, 7.64, 9.0, 7.84, 4.0, 2008.832f64.ln(), 76f64.ln());
        let (lo, hi) = (ratio_to_f64(&iv.lo), ratio_to_f64(&iv.hi));
        assert!(hi - lo <= 1e-6);
        assert!(lo - 1e-12 <= want && want <= hi + 1e-12, "{lo} {want} {hi}");
        assert!((want - 0.1078).abs() < 5e-4);
        assert!(!iv.quoted_sigma_certifiable);
        assert!(iv.beta_floor_ok);
    }

    #[test]
    fn max_sigma_seven_j_flags_floor() {
        let iv = max_sigma(&main_base(), Variant::SevenJ, Precision::default()).unwrap();
        assert!(!iv.beta_floor_ok);
        assert!(iv.quoted_sigma_certifiable);
        let lnb = 1.5 * 101f64.ln();
        let want = sigma_root(lnb, 11.48, 13.0, 11.76, 6.0, 42106f64.ln(), 76f64.ln());
        assert!(ratio_to_f64(&iv.lo) <= want + 1e-12 && want <= ratio_to_f64(&iv.hi) + 1e-12);
        let t = threshold(&main_base(), &r(7, 50), Variant::SevenJ).enclose(64);
        assert!((t.midpoint_f64() - 993.9).abs() < 0.5);
    }

    #[test]
    fn max_sigma_empty_when_small() {
        // 5^2 + 76 = 101: |beta| ~ 10 is far below the threshold
        let iv = max_sigma(&BaseSolution::new(76, 101, 5u32, 1), Variant::FiveJ, Precision::default()).unwrap();
        assert!(iv.empty);
        assert!(iv.reason.is_some());
    }

    #[test]
    fn thresholds_digits() {
        let t = thresholds_for(101, 3);
        assert_eq!(t.m, 750);
        let digits = (750.0 * 101f64.log10()).floor() as usize + 1;
        assert_eq!(t.x_star.to_str_radix(10).len(), digits);
        assert_eq!(thresholds_for(7, 1).m, 250);
        assert_eq!(t.x_min_inference * BigUint::from(101u32).pow(375), t.x_star);
    }
}
