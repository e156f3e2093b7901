use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rnlab::base::BaseSolution;
use rnlab::certifier::{certify, Variant};
use rnlab::decomposer::{audit, decompose, DecomposeError};
use rnlab::hensel::roots_mod_pn;
use rnlab::quadring::QuadInt;
use rnlab::rigor::Precision;

fn reference() -> BaseSolution {
    BaseSolution::new(76, 101, BigUint::from(1015u32), 3)
}

#[test]
fn every_root_splits_on_one_branch() {
    let base = reference();
    let cert = certify(&base, &BigRational::new(1.into(), 10.into()), Variant::FiveJ, Precision::default()).unwrap();
    let beta = QuadInt::new(1015, 1, 76).unwrap();
    let lambda = QuadInt::new(0, 2, 76).unwrap();
    for n in 16..=60u32 {
        let roots = roots_mod_pn(76, 101, n).unwrap().roots();
        assert_eq!(roots.len(), 2);
        let mut branches = Vec::new();
        for x in &roots {
            let dec = decompose(&base, x, n).unwrap();
            let bk = beta.pow(dec.k);
            let lhs = &(&bk * &dec.mu) - &(&bk.conj() * &dec.mu.conj());
            let want = if dec.sign > 0 { lambda.clone() } else { -&lambda };
            assert_eq!(lhs, want);
            assert_eq!(dec.k, 5 * (n as u64 / 15));
            assert_eq!(dec.l as u64, n as u64 - 3 * dec.k);
            let m = (x * x + 76u32) / BigUint::from(101u32).pow(n);
            assert_eq!(dec.mu_norm, BigUint::from(101u32).pow(dec.l) * m);
            // gamma is beta^k mu or its conjugate
            let gamma = QuadInt::new(BigInt::from(x.clone()), 1, 76).unwrap();
            let prod = &bk * &dec.mu;
            assert_eq!(if dec.sign > 0 { prod } else { prod.conj() }, gamma);
            branches.push(dec.sign);
            assert!(audit(&cert, &dec).unwrap().any_nonzero);
        }
        branches.sort();
        assert_eq!(branches, vec![-1, 1], "n = {n}");
    }
}

#[test]
fn small_n_is_rejected() {
    let base = reference();
    let x = &roots_mod_pn(76, 101, 15).unwrap().roots()[0];
    assert!(matches!(decompose(&base, x, 15), Err(DecomposeError::PreconditionFail(_))));
    assert!(matches!(
        decompose(&base, &BigUint::from(7u32), 20),
        Err(DecomposeError::PreconditionFail(_))
    ));
}
