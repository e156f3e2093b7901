use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use rnlab::survey::{power_compare, run_survey, run_survey_with, Checkpoint, PowerOrdering, Survey, SurveyParams};

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn records(params: SurveyParams) -> Vec<rnlab::survey::SurveyRecord> {
    let mut v = Vec::new();
    run_survey_with(params, None, &mut |rec| v.push(rec.clone())).unwrap();
    v
}

// Every (n, x, m) with p^n | x^2 + D and 0 < x < p^n, by direct enumeration.
fn brute(d: u64, p: u64, n_max: u32) -> BTreeMap<u32, Vec<(u64, u64)>> {
    let mut out = BTreeMap::new();
    let mut pn = 1u64;
    for n in 1..=n_max {
        pn *= p;
        let v: Vec<(u64, u64)> = (1..pn).filter(|x| (x * x + d) % pn == 0).map(|x| (x, (x * x + d) / pn)).collect();
        out.insert(n, v);
    }
    out
}

#[test]
fn records_match_brute_force() {
    for (d, p, n_max) in [(76u64, 101u64, 2u32), (7, 2, 19), (23, 3, 12), (47, 7, 7), (76, 5, 8), (23, 2, 19)] {
        let got = records(SurveyParams::new(d, p, r(1, 2), n_max));
        let want = brute(d, p, n_max);
        for n in 1..=n_max {
            let g: Vec<(u64, u64)> = got
                .iter()
                .filter(|rec| rec.n == n)
                .map(|rec| (rec.x.to_string().parse().unwrap(), rec.m.to_string().parse().unwrap()))
                .collect();
            assert_eq!(g, want[&n], "D={d} p={p} n={n}");
        }
    }
}

#[test]
fn every_record_reconstructs() {
    for rec in records(SurveyParams::new(76, 101, r(7, 50), 120)) {
        let pn = BigUint::from(101u32).pow(rec.n);
        assert_eq!(&rec.x * &rec.x + 76u32, &pn * &rec.m);
        assert!(rec.x < pn && rec.x > BigUint::from(0u32));
        assert_eq!(rec.digits_x, rec.x.to_string().len());
    }
}

#[test]
fn resume_equals_uninterrupted() {
    let params = SurveyParams::new(76, 101, r(7, 50), 150);
    let mut s = Survey::new(params.clone()).unwrap();
    while s.done() < 100 {
        s.advance(100 - s.done(), &mut |_| {}).unwrap();
    }
    let blob = Checkpoint::from_json(&s.checkpoint().to_json()).unwrap();
    assert_eq!(blob.n, 100);
    let resumed = run_survey(params.clone(), Some(&blob)).unwrap();
    assert_eq!(resumed, run_survey(params.clone(), None).unwrap());

    // the minimal blob (no progress) continues from n = 101
    let mut bare = blob.clone();
    bare.progress = None;
    let tail = run_survey(params, Some(&bare)).unwrap();
    assert_eq!(tail.n_start, 101);
    assert_eq!(tail.records_checked, 100);
}

#[test]
fn blob_at_750_holds_two_long_roots() {
    let mut s = Survey::new(SurveyParams::new(76, 101, r(7, 50), 750)).unwrap();
    while s.advance(64, &mut |_| {}).unwrap() {}
    let blob = s.checkpoint();
    assert_eq!(blob.roots.len(), 2);
    let digits = (750.0 * 101f64.log10()).floor() as usize + 1;
    for x in &blob.roots {
        let len = x.to_string().len();
        assert!(len <= digits && len >= digits - 3, "{len}");
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let params = SurveyParams::new(76, 101, r(7, 50), 300);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| run_survey(params.clone(), None).unwrap());
    let b = four.install(|| run_survey(params.clone(), None).unwrap());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exceptions_monotone_in_sigma(a in 1u32..20, b in 1u32..20, den in 21u32..40) {
        let (lo, hi) = (a.min(b), a.max(b));
        let small = run_survey(SurveyParams::new(76, 101, r(lo as i64, den as i64), 40), None).unwrap();
        let large = run_survey(SurveyParams::new(76, 101, r(hi as i64, den as i64), 40), None).unwrap();
        for e in &small.exceptions {
            prop_assert!(large.exceptions.iter().any(|f| f.n == e.n && f.x == e.x));
        }
    }

    #[test]
    fn power_compare_matches_exact(m in 1u64..5000, x in 1u64..5000, a in 1u32..30, extra in 1u32..30) {
        let b = a + extra;
        let (mb, xb) = (BigUint::from(m), BigUint::from(x));
        let want = if mb.pow(b) > xb.pow(a) { PowerOrdering::Greater } else { PowerOrdering::LessOrEqual };
        prop_assert_eq!(power_compare(&mb, &xb, a, b), want);
    }

    #[test]
    fn power_compare_large_operands(e in 1u32..400, k in 0u32..40, a in 1u32..9) {
        // m = 101^e, x = 101^k * 3: decided by the shortcut or exactly, same answer
        let m = BigUint::from(101u32).pow(e);
        let x = BigUint::from(101u32).pow(k) * 3u32;
        let b = 10;
        let want = if m.pow(b) > x.pow(a) { PowerOrdering::Greater } else { PowerOrdering::LessOrEqual };
        prop_assert_eq!(power_compare(&m, &x, a, b), want);
    }
}
