//! Exhaustive survey of `x^2 + D = p^n m` over `n <= n_max`, testing
//! `m > x^sigma` for every root `0 < x < p^n`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hensel::{self, is_prime, HenselError, LiftState};
use crate::report::{decimal_str, decimal_str_vec, ratio_string, ser_ratio};
use crate::util::ln_biguint;

pub const SURVEY_SCHEMA: &str = "rnlab.survey/1";
pub const CHECKPOINT_VERSION: u32 = 1;

const METHOD_NOTE: &str = "only minimal representatives 0 < x < p^n are tested: \
for x >= p^n the cofactor satisfies m > x^2/p^n >= x >= x^sigma";

const BATCH: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurveyError {
    #[error("sigma = {0} must lie strictly between 0 and 1")]
    InvalidSigma(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("-{d} is not a square modulo {p}")]
    NoSplit { d: u64, p: u64 },
    #[error("corrupt checkpoint: {0}")]
    CorruptBlob(String),
    #[error(transparent)]
    Hensel(#[from] HenselError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PowerOrdering {
    Greater,
    LessOrEqual,
}

/// Decide `m > x^(a/b)` exactly, via `m^b > x^a`.
pub fn power_compare(m: &BigUint, x: &BigUint, a: u32, b: u32) -> PowerOrdering {
    assert!(b > 0, "power_compare needs b > 0");
    let greater = |yes: bool| if yes { PowerOrdering::Greater } else { PowerOrdering::LessOrEqual };
    if m.is_zero() {
        return PowerOrdering::LessOrEqual;
    }
    if x.is_zero() || a == 0 {
        return greater(m > &BigUint::one());
    }
    // 2^(bits-1) <= v < 2^bits
    let (bm, bx) = (m.bits(), x.bits());
    if b as u64 * (bm - 1) >= a as u64 * bx {
        return PowerOrdering::Greater;
    }
    if b as u64 * bm <= a as u64 * (bx - 1) {
        return PowerOrdering::LessOrEqual;
    }
    greater(m.pow(b) > x.pow(a))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub n: u32,
    #[serde(with = "decimal_str")]
    pub x: BigUint,
    #[serde(with = "decimal_str")]
    pub m: BigUint,
    pub digits_x: usize,
    pub passed: bool,
    /// `ln m - sigma ln x`, for reporting.
    pub log_margin: f64,
}

impl SurveyRecord {
    pub fn tsv_header() -> &'static str {
        "n\tx\tm\tdigits_x\tpassed"
    }

    pub fn tsv(&self) -> String {
        format!("{}\t{}\t{}\t{}\t{}", self.n, self.x, self.m, self.digits_x, self.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginRecord {
    pub n: u32,
    #[serde(with = "decimal_str")]
    pub x: BigUint,
    pub log_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyParams {
    pub d: u64,
    pub p: u64,
    pub sigma: BigRational,
    pub n_max: u32,
}

impl SurveyParams {
    pub fn new(d: u64, p: u64, sigma: BigRational, n_max: u32) -> Self {
        SurveyParams { d, p, sigma, n_max }
    }

    fn sigma_parts(&self) -> (u32, u32) {
        (
            self.sigma.numer().to_u32().expect("validated sigma numerator"),
            self.sigma.denom().to_u32().expect("validated sigma denominator"),
        )
    }

    fn validate(&self) -> Result<(), SurveyError> {
        let s = &self.sigma;
        if !s.is_positive() || s >= &BigRational::one() || s.denom().to_u32().is_none() {
            return Err(SurveyError::InvalidSigma(ratio_string(s)));
        }
        if self.d == 0 {
            return Err(SurveyError::InvalidInput("D must be positive".into()));
        }
        if !is_prime(self.p) {
            return Err(SurveyError::InvalidInput(format!("p = {} is not prime", self.p)));
        }
        if self.d % self.p == 0 {
            return Err(SurveyError::InvalidInput(format!("{} divides D = {}", self.p, self.d)));
        }
        if self.n_max == 0 {
            return Err(SurveyError::InvalidInput("n_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// Accumulated results, stored alongside the roots in a checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub sigma: String,
    pub n_start: u32,
    pub records_checked: u64,
    pub exceptions: Vec<SurveyRecord>,
    pub min_passing_margin: Option<MarginRecord>,
    /// Set once the root set has died out (only possible for `p = 2`).
    pub exhausted: bool,
}

/// Resume blob.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    #[serde(rename = "D")]
    pub d: u64,
    pub p: u64,
    pub n: u32,
    #[serde(with = "decimal_str_vec")]
    pub roots: Vec<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progress: Option<Progress>,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SurveyError> {
        serde_json::from_str(s).map_err(|e| SurveyError::CorruptBlob(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyReport {
    pub schema: &'static str,
    #[serde(rename = "D")]
    pub d: u64,
    pub p: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma: BigRational,
    pub n_max: u32,
    pub n_start: u32,
    pub split: bool,
    /// Largest `n` with any root, when the root set dies out before `n_max`.
    pub roots_end_at: Option<u32>,
    pub records_checked: u64,
    pub exceptions: Vec<SurveyRecord>,
    pub exception_x: Vec<String>,
    pub min_passing_margin: Option<MarginRecord>,
    pub method_note: &'static str,
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

/// A resumable survey run.
#[derive(Debug, Clone)]
pub struct Survey {
    params: SurveyParams,
    lift: Option<LiftState>,
    n_start: u32,
    split: bool,
    exhausted: bool,
    records_checked: u64,
    exceptions: Vec<SurveyRecord>,
    min_margin: Option<MarginRecord>,
}

impl Survey {
    pub fn new(params: SurveyParams) -> Result<Self, SurveyError> {
        params.validate()?;
        let split = params.p == 2 || hensel::legendre((params.p - params.d % params.p) % params.p, params.p) == 1;
        Ok(Survey {
            params,
            lift: None,
            n_start: 1,
            split,
            exhausted: false,
            records_checked: 0,
            exceptions: Vec::new(),
            min_margin: None,
        })
    }

    pub fn restore(params: SurveyParams, blob: &Checkpoint) -> Result<Self, SurveyError> {
        let corrupt = |s: String| SurveyError::CorruptBlob(s);
        if blob.version != CHECKPOINT_VERSION {
            return Err(corrupt(format!("unsupported version {}", blob.version)));
        }
        if (blob.d, blob.p) != (params.d, params.p) {
            return Err(corrupt(format!(
                "blob is for D = {}, p = {}, not D = {}, p = {}",
                blob.d, blob.p, params.d, params.p
            )));
        }
        let mut s = Survey::new(params)?;
        if blob.n > 0 {
            let st = hensel::state_from_root_set(blob.d, blob.p, blob.n, &blob.roots)
                .map_err(|e| corrupt(e.to_string()))?;
            s.lift = Some(st);
        } else if !blob.roots.is_empty() {
            return Err(corrupt("roots stored for n = 0".into()));
        }
        s.n_start = blob.n + 1;
        if let Some(pr) = &blob.progress {
            let want = ratio_string(&s.params.sigma);
            if pr.sigma != want {
                return Err(corrupt(format!("blob sigma {} differs from {want}", pr.sigma)));
            }
            if pr.n_start == 0 || pr.n_start > s.n_start {
                return Err(corrupt(format!("progress starts at n = {}", pr.n_start)));
            }
            s.n_start = pr.n_start;
            s.records_checked = pr.records_checked;
            s.exceptions = pr.exceptions.clone();
            s.min_margin = pr.min_passing_margin.clone();
            s.exhausted = pr.exhausted;
        }
        Ok(s)
    }

    pub fn params(&self) -> &SurveyParams {
        &self.params
    }

    /// Last exponent whose roots have been examined.
    pub fn done(&self) -> u32 {
        self.lift.as_ref().map_or(0, |l| l.n())
    }

    pub fn is_finished(&self) -> bool {
        !self.split || self.exhausted || self.done() >= self.params.n_max
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            d: self.params.d,
            p: self.params.p,
            n: self.done(),
            roots: self.lift.as_ref().map_or_else(Vec::new, |l| l.roots()),
            progress: Some(Progress {
                sigma: ratio_string(&self.params.sigma),
                n_start: self.n_start,
                records_checked: self.records_checked,
                exceptions: self.exceptions.clone(),
                min_passing_margin: self.min_margin.clone(),
                exhausted: self.exhausted,
            }),
        }
    }

    fn next_state(&self) -> Result<Option<LiftState>, SurveyError> {
        let next = match &self.lift {
            None => hensel::base_state(self.params.d, self.params.p),
            Some(st) => hensel::advance(st),
        };
        match next {
            Ok(st) => Ok(Some(st)),
            // only p = 2 can run out of roots
            Err(HenselError::NoRoot(_)) if self.params.p == 2 => Ok(None),
            Err(HenselError::NoSplit { d, p }) => Err(SurveyError::NoSplit { d, p }),
            Err(e) => Err(e.into()),
        }
    }

    /// Examine up to `levels` further exponents, streaming each record in
    /// `(n, x)` order. Returns `false` once the survey is complete.
    pub fn advance(&mut self, levels: u32, sink: &mut dyn FnMut(&SurveyRecord)) -> Result<bool, SurveyError> {
        if self.is_finished() {
            return Ok(false);
        }
        let mut pending: Vec<(u32, BigUint, BigUint)> = Vec::new();
        for _ in 0..levels {
            if self.done() >= self.params.n_max {
                break;
            }
            match self.next_state()? {
                Some(st) => {
                    let n = st.n();
                    pending.extend(st.roots_with_cofactors().into_iter().map(|(x, m)| (n, x, m)));
                    self.lift = Some(st);
                }
                None => {
                    self.exhausted = true;
                    break;
                }
            }
        }
        let (a, b) = self.params.sigma_parts();
        let sigma = a as f64 / b as f64;
        let records: Vec<SurveyRecord> = pending
            .into_par_iter()
            .map(|(n, x, m)| {
                let passed = power_compare(&m, &x, a, b) == PowerOrdering::Greater;
                let log_margin = ln_biguint(&m) - sigma * ln_biguint(&x);
                SurveyRecord {
                    n,
                    digits_x: x.to_str_radix(10).len(),
                    x,
                    m,
                    passed,
                    log_margin,
                }
            })
            .collect();
        for r in &records {
            self.records_checked += 1;
            if r.passed {
                let better = self
                    .min_margin
                    .as_ref()
                    .map_or(true, |cur| r.log_margin.partial_cmp(&cur.log_margin) == Some(Ordering::Less));
                if better {
                    self.min_margin = Some(MarginRecord {
                        n: r.n,
                        x: r.x.clone(),
                        log_margin: r.log_margin,
                    });
                }
            } else {
                self.exceptions.push(r.clone());
            }
            sink(r);
        }
        Ok(!self.is_finished())
    }

    pub fn report(&self) -> SurveyReport {
        let mut xs: Vec<&BigUint> = self.exceptions.iter().map(|r| &r.x).collect();
        xs.sort();
        xs.dedup();
        let note = if !self.split {
            Some(format!(
                "-{} is not a square modulo {}: no roots for any n, the survey is trivially empty",
                self.params.d, self.params.p
            ))
        } else if self.exhausted {
            Some(format!(
                "x^2 + {} has no roots modulo 2^{} or beyond",
                self.params.d,
                self.done() + 1
            ))
        } else {
            None
        };
        SurveyReport {
            schema: SURVEY_SCHEMA,
            d: self.params.d,
            p: self.params.p,
            sigma: self.params.sigma.clone(),
            n_max: self.params.n_max,
            n_start: self.n_start,
            split: self.split,
            roots_end_at: self.exhausted.then(|| self.done()),
            records_checked: self.records_checked,
            exceptions: self.exceptions.clone(),
            exception_x: xs.into_iter().map(|x| x.to_string()).collect(),
            min_passing_margin: self.min_margin.clone(),
            method_note: METHOD_NOTE,
            note,
            wall_time_secs: None,
        }
    }
}

/// Run (or resume) a survey to completion, streaming every record.
pub fn run_survey_with(
    params: SurveyParams,
    resume: Option<&Checkpoint>,
    sink: &mut dyn FnMut(&SurveyRecord),
) -> Result<SurveyReport, SurveyError> {
    let mut s = match resume {
        Some(blob) => Survey::restore(params, blob)?,
        None => Survey::new(params)?,
    };
    while s.advance(BATCH, sink)? {}
    Ok(s.report())
}

pub fn run_survey(params: SurveyParams, resume: Option<&Checkpoint>) -> Result<SurveyReport, SurveyError> {
    run_survey_with(params, resume, &mut |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn power_compare_examples() {
        assert_eq!(power_compare(&big(1), &big(5), 7, 50), PowerOrdering::LessOrEqual);
        assert_eq!(power_compare(&big(92), &big(96), 7, 50), PowerOrdering::Greater);
        assert_eq!(power_compare(&big(101), &big(1015), 7, 50), PowerOrdering::Greater);
        // equality is not "greater": 8 = 4^(3/2)
        assert_eq!(power_compare(&big(8), &big(4), 3, 2), PowerOrdering::LessOrEqual);
        assert_eq!(power_compare(&big(9), &big(4), 3, 2), PowerOrdering::Greater);
    }

    #[test]
    fn seven_fiftieths_short() {
        let rep = run_survey(SurveyParams::new(76, 101, r(7, 50), 20), None).unwrap();
        assert_eq!(rep.exception_x, vec!["5", "1015"]);
        let ex: Vec<(u32, String, String)> = rep
            .exceptions
            .iter()
            .map(|e| (e.n, e.x.to_string(), e.m.to_string()))
            .collect();
        assert_eq!(
            ex,
            vec![(1, "5".into(), "1".into()), (3, "1015".into(), "1".into())]
        );
        assert_eq!(rep.records_checked, 40);
    }

    #[test]
    fn companion_root_at_one() {
        let mut recs = Vec::new();
        run_survey_with(SurveyParams::new(76, 101, r(7, 50), 2), None, &mut |r| recs.push(r.clone())).unwrap();
        let r96 = recs.iter().find(|r| r.n == 1 && r.x == big(96)).unwrap();
        assert_eq!(r96.m, big(92));
        assert!(r96.passed);
        let r1015 = recs.iter().find(|r| r.n == 2 && r.x == big(1015)).unwrap();
        assert_eq!(r1015.m, big(101));
        assert!(r1015.passed);
    }

    #[test]
    fn no_split_is_empty() {
        // -76 is a nonresidue mod 3
        let rep = run_survey(SurveyParams::new(76, 3, r(1, 2), 10), None).unwrap();
        assert!(!rep.split);
        assert_eq!(rep.records_checked, 0);
        assert!(rep.note.is_some());
    }

    #[test]
    fn two_adic_dies_out() {
        // D = 3: roots modulo 2 and 4 only
        let rep = run_survey(SurveyParams::new(3, 2, r(1, 2), 10), None).unwrap();
        assert_eq!(rep.roots_end_at, Some(2));
        assert_eq!(rep.records_checked, 3);
    }

    #[test]
    fn invalid_inputs() {
        for s in [r(0, 1), r(1, 1), r(3, 2), r(-1, 2)] {
            assert!(matches!(
                Survey::new(SurveyParams::new(76, 101, s, 5)),
                Err(SurveyError::InvalidSigma(_))
            ));
        }
        assert!(Survey::new(SurveyParams::new(76, 100, r(1, 2), 5)).is_err());
        assert!(Survey::new(SurveyParams::new(202, 101, r(1, 2), 5)).is_err());
    }

    #[test]
    fn checkpoint_round_trip() {
        let params = SurveyParams::new(76, 101, r(7, 50), 30);
        let mut s = Survey::new(params.clone()).unwrap();
        s.advance(12, &mut |_| {}).unwrap();
        let blob = Checkpoint::from_json(&s.checkpoint().to_json()).unwrap();
        assert_eq!(blob, s.checkpoint());
        let restored = Survey::restore(params.clone(), &blob).unwrap();
        assert_eq!(restored.checkpoint(), s.checkpoint());
        let resumed = run_survey(params.clone(), Some(&blob)).unwrap();
        let full = run_survey(params.clone(), None).unwrap();
        assert_eq!(resumed, full);

        let other = SurveyParams::new(7, 2, r(7, 50), 30);
        assert!(matches!(Survey::restore(other, &blob), Err(SurveyError::CorruptBlob(_))));
        let mut bad = blob.clone();
        bad.roots[0] += 1u32;
        assert!(matches!(Survey::restore(params.clone(), &bad), Err(SurveyError::CorruptBlob(_))));
        let mut bad = blob;
        bad.version = 99;
        assert!(matches!(Survey::restore(params, &bad), Err(SurveyError::CorruptBlob(_))));
    }
}
