//! Exact Padé approximants to `(1 - z)^k`.
//!
//! For positive `A, B, C` the triple `(P, Q, E)` satisfies
//! `P(z) - (1 - z)^(B+C+1) Q(z) = z^(A+C+1) E(z)`. The diagonal family used
//! for the cofactor bound takes `A = C = r`, `B = k - r - 1` with `k = 5j`,
//! `r = 4j - g`, and flips the sign of `P` and `Q` by `(-1)^r` so that `Q` has
//! positive coefficients; the identity then reads
//! `P - (1 - z)^k Q = (-1)^r z^(2r+1) E`.

pub mod bounds;
pub mod kernel;
pub mod sweep;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::IntPolynomial;
use crate::quadring::{QuadError, QuadInt};

pub use bounds::{
    check_content_bound, check_e_bound, check_q_bound, ContentReport, diagonal_factorial_bound, factorial_ratio_bounds, BoundConstants,
    BoundStatus, EBoundReport, FactorialReport, QBoundReport,
};
pub use kernel::{kernel_extrema, KernelReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("Padé identity fails for {0}")]
    IdentityViolation(String),
    #[error("content {content} does not divide the {which} polynomial for j = {j}, g = {g}")]
    ContentViolation {
        j: u32,
        g: u8,
        which: &'static str,
        content: BigUint,
    },
    #[error("cross residual is not a monomial of degree {expected_degree}")]
    NotMonomial { expected_degree: usize },
    #[error("cross residual vanishes identically")]
    DegenerateCross,
    #[error("systems do not share k, or their r values are not adjacent")]
    Incompatible,
    #[error("operation requires a diagonal system")]
    NotDiagonal,
    #[error("b = {b} lies outside [0.953, 1]")]
    BOutOfRange { b: String },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn signed(b: BigUint, negative: bool) -> BigInt {
    let b = BigInt::from(b);
    if negative {
        -b
    } else {
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PadeParams {
    General { a: u64, b: u64, c: u64 },
    Diagonal { j: u32, g: u8 },
}

impl PadeParams {
    /// The exponent `k` of `(1 - z)^k` being approximated.
    pub fn k(&self) -> u64 {
        match *self {
            PadeParams::General { b, c, .. } => b + c + 1,
            PadeParams::Diagonal { j, .. } => 5 * j as u64,
        }
    }

    /// Degree of `P` and `Q` in the diagonal family (`A` in general).
    pub fn r(&self) -> u64 {
        match *self {
            PadeParams::General { a, .. } => a,
            PadeParams::Diagonal { j, g } => 4 * j as u64 - g as u64,
        }
    }

    /// Power of `z` multiplying `E` in the identity.
    pub fn shift(&self) -> u64 {
        match *self {
            PadeParams::General { a, c, .. } => a + c + 1,
            PadeParams::Diagonal { .. } => 2 * self.r() + 1,
        }
    }

    /// Whether the identity carries a minus sign in front of `z^shift E`.
    pub fn negated(&self) -> bool {
        match self {
            PadeParams::General { .. } => false,
            PadeParams::Diagonal { .. } => self.r() % 2 == 1,
        }
    }
}

impl std::fmt::Display for PadeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PadeParams::General { a, b, c } => write!(f, "(A, B, C) = ({a}, {b}, {c})"),
            PadeParams::Diagonal { j, g } => write!(f, "(j, g) = ({j}, {g})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadeSystem {
    pub params: PadeParams,
    pub p: IntPolynomial,
    pub q: IntPolynomial,
    pub e: IntPolynomial,
    /// 1 for raw systems; the divisor applied by [`normalize`] otherwise.
    pub content: BigUint,
}

impl PadeSystem {
    pub fn k(&self) -> u64 {
        self.params.k()
    }

    pub fn r(&self) -> u64 {
        self.params.r()
    }

    pub fn is_normalized(&self) -> bool {
        !self.content.is_one()
    }

    /// The residual `P - (1-z)^k Q -/+ z^shift E`, zero iff the identity holds.
    pub fn identity_residual(&self) -> IntPolynomial {
        let lhs = &self.p - &(&IntPolynomial::one_minus_z_pow(self.k()) * &self.q);
        let sign = if self.params.negated() { -1 } else { 1 };
        let rhs = &IntPolynomial::monomial(sign, self.params.shift() as usize) * &self.e;
        &lhs - &rhs
    }

    pub fn verify_identity(&self) -> Result<(), PadeError> {
        if self.identity_residual().is_zero() {
            Ok(())
        } else {
            Err(PadeError::IdentityViolation(self.params.to_string()))
        }
    }
}

/// `(P_A, Q_A, E_A)` from the binomial-sum form. Parameters must be positive
/// unless `allow_zero` is set; the identity is checked before returning.
pub fn build_general(a: u64, b: u64, c: u64, allow_zero: bool) -> Result<PadeSystem, PadeError> {
    if !allow_zero && (a == 0 || b == 0 || c == 0) {
        return Err(PadeError::InvalidParameters(format!(
            "A, B, C must be positive (got {a}, {b}, {c})"
        )));
    }
    let n = a + b + c + 1;
    let p = (0..=c)
        .map(|i| signed(binom(n, i as i64) * binom(a + c - i, a as i64), (i % 2 == 1) ^ (c % 2 == 1)))
        .collect();
    let q = (0..=a)
        .map(|i| signed(binom(a + c - i, c as i64) * binom(b + i, i as i64), c % 2 == 1))
        .collect();
    let e = (0..=b)
        .map(|i| signed(binom(a + i, i as i64) * binom(n, (a + c + i + 1) as i64), i % 2 == 1))
        .collect();
    let sys = PadeSystem {
        params: PadeParams::General { a, b, c },
        p: IntPolynomial::new(p),
        q: IntPolynomial::new(q),
        e: IntPolynomial::new(e),
        content: BigUint::one(),
    };
    sys.verify_identity()?;
    Ok(sys)
}

fn check_diagonal_params(j: u32, g: u8) -> Result<(), PadeError> {
    if j == 0 || g > 1 {
        return Err(PadeError::InvalidParameters(format!(
            "need j >= 1 and g in {{0, 1}} (got j = {j}, g = {g})"
        )));
    }
    Ok(())
}

/// Coefficients of `Q_r` for `k = 5j`, `r = 4j - g`.
fn diagonal_q(j: u64, g: u64) -> Vec<BigInt> {
    let r = 4 * j - g;
    (0..=r)
        .map(|i| BigInt::from(binom(8 * j - 2 * g - i, r as i64) * binom(j + g - 1 + i, i as i64)))
        .collect()
}

/// The diagonal system with `k = 5j`, `r = 4j - g`.
///
/// `E` is summed up to `i = j + g - 1`; the `i = j + g` summand contains
/// `binom(9j - g, 9j - g + 1) = 0`.
pub fn build_diagonal(j: u32, g: u8) -> Result<PadeSystem, PadeError> {
    check_diagonal_params(j, g)?;
    let (jj, gg) = (j as u64, g as u64);
    let r = 4 * jj - gg;
    let n = 9 * jj - gg;
    let p = (0..=r)
        .map(|i| signed(binom(n, i as i64) * binom(8 * jj - 2 * gg - i, r as i64), i % 2 == 1))
        .collect();
    let e = (0..jj + gg)
        .map(|i| signed(binom(r + i, i as i64) * binom(n, (8 * jj - 2 * gg + i + 1) as i64), i % 2 == 1))
        .collect();
    Ok(PadeSystem {
        params: PadeParams::Diagonal { j, g },
        p: IntPolynomial::new(p),
        q: IntPolynomial::new(diagonal_q(jj, gg)),
        e: IntPolynomial::new(e),
        content: BigUint::one(),
    })
}

/// `c_g(j)`: the gcd of the coefficients of `Q_r`.
pub fn content(j: u32, g: u8) -> Result<BigUint, PadeError> {
    check_diagonal_params(j, g)?;
    Ok(IntPolynomial::new(diagonal_q(j as u64, g as u64)).content())
}

/// Divide a raw diagonal system by `c_g(j)`. All three divisions must be
/// exact; a remainder is reported as [`PadeError::ContentViolation`].
pub fn normalize(sys: &PadeSystem) -> Result<PadeSystem, PadeError> {
    let PadeParams::Diagonal { j, g } = sys.params else {
        return Err(PadeError::NotDiagonal);
    };
    if sys.is_normalized() {
        return Ok(sys.clone());
    }
    let c = sys.q.content();
    let ci = BigInt::from(c.clone());
    let div = |poly: &IntPolynomial, which: &'static str| {
        poly.exact_div_scalar(&ci).ok_or_else(|| PadeError::ContentViolation {
            j,
            g,
            which,
            content: c.clone(),
        })
    };
    Ok(PadeSystem {
        params: sys.params,
        p: div(&sys.p, "P")?,
        q: div(&sys.q, "Q")?,
        e: div(&sys.e, "E")?,
        content: c.clone(),
    })
}

/// Build and normalize in one step.
pub fn build_normalized(j: u32, g: u8) -> Result<PadeSystem, PadeError> {
    normalize(&build_diagonal(j, g)?)
}

/// The constant `c` in `P_r Q_r' - Q_r P_r' = c z^(2 min(r, r') + 1)` for two
/// diagonal systems sharing `k` with adjacent `r`.
pub fn cross_constant(a: &PadeSystem, b: &PadeSystem) -> Result<BigInt, PadeError> {
    if !matches!(a.params, PadeParams::Diagonal { .. }) || !matches!(b.params, PadeParams::Diagonal { .. }) {
        return Err(PadeError::NotDiagonal);
    }
    if a.k() != b.k() || a.r().abs_diff(b.r()) > 1 {
        return Err(PadeError::Incompatible);
    }
    let residual = &(&a.p * &b.q) - &(&a.q * &b.p);
    if residual.is_zero() {
        return Err(PadeError::DegenerateCross);
    }
    let expected_degree = 2 * a.r().min(b.r()) as usize + 1;
    match residual.as_monomial() {
        Some((c, d)) if d == expected_degree => Ok(c),
        _ => Err(PadeError::NotMonomial { expected_degree }),
    }
}

/// `beta^scale * poly(lambda / beta)` as an exact algebraic integer.
pub fn eval_at_z0(poly: &IntPolynomial, beta: &QuadInt, lambda: &QuadInt, scale: usize) -> Result<QuadInt, PadeError> {
    if let Some(d) = poly.degree() {
        if scale < d {
            return Err(PadeError::InvalidParameters(format!("scale {scale} below degree {d}")));
        }
    }
    Ok(poly.eval_homogeneous(beta, lambda, scale)?)
}

/// The three values `beta^r P*(z0)`, `beta^r Q*(z0)` and
/// `beta^(k-r-1) E*(z0)` for a diagonal system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatedSystem {
    pub p: QuadInt,
    pub q: QuadInt,
    pub e: QuadInt,
}

pub fn evaluate_system(sys: &PadeSystem, beta: &QuadInt, lambda: &QuadInt) -> Result<EvaluatedSystem, PadeError> {
    let r = sys.r() as usize;
    let k = sys.k() as usize;
    Ok(EvaluatedSystem {
        p: eval_at_z0(&sys.p, beta, lambda, r)?,
        q: eval_at_z0(&sys.q, beta, lambda, r)?,
        e: eval_at_z0(&sys.e, beta, lambda, k - r - 1)?,
    })
}

/// Checks `beta^k P - conj(beta)^k Q = (-1)^r lambda^(2r+1) E` on the
/// evaluated system; this is the polynomial identity multiplied through by
/// `beta^(k+r)`.
pub fn assembled_identity_holds(sys: &PadeSystem, ev: &EvaluatedSystem, beta: &QuadInt, lambda: &QuadInt) -> bool {
    let k = sys.k();
    let r = sys.r();
    let lhs = &(&beta.pow(k) * &ev.p) - &(&beta.conj().pow(k) * &ev.q);
    let mut rhs = &lambda.pow(2 * r + 1) * &ev.e;
    if r % 2 == 1 {
        rhs = -rhs;
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(8, 4), BigUint::from(70u32));
        assert_eq!(binom(9, 9), BigUint::one());
        assert_eq!(binom(4, -1), BigUint::zero());
        assert_eq!(binom(4, 5), BigUint::zero());
        assert_eq!(binom(0, 0), BigUint::one());
    }

    #[test]
    fn general_444_extension() {
        assert!(matches!(build_general(4, 0, 4, false), Err(PadeError::InvalidParameters(_))));
        let s = build_general(4, 0, 4, true).unwrap();
        assert_eq!(s.p, poly(&[70, -315, 540, -420, 126]));
        assert_eq!(s.q, poly(&[70, 35, 15, 5, 1]));
        assert_eq!(s.e, poly(&[1]));
    }

    #[test]
    fn general_small_cases() {
        let s = build_general(1, 1, 1, false).unwrap();
        assert!(s.identity_residual().is_zero());
        for (a, b, c) in [(1, 2, 3), (3, 1, 2), (2, 5, 1)] {
            let s = build_general(a, b, c, false).unwrap();
            assert_eq!(s.p.coeff(0), s.q.coeff(0));
        }
    }

    #[test]
    fn diagonal_j1() {
        let s = build_diagonal(1, 0).unwrap();
        assert_eq!(s.q, poly(&[70, 35, 15, 5, 1]));
        assert_eq!(s.p, poly(&[70, -315, 540, -420, 126]));
        assert_eq!(s.e, poly(&[1]));
        assert!(s.identity_residual().is_zero());
        let lhs = &s.p - &(&IntPolynomial::one_minus_z_pow(5) * &s.q);
        assert_eq!(lhs, IntPolynomial::monomial(1, 9));

        let s = build_diagonal(1, 1).unwrap();
        assert_eq!(s.q, poly(&[20, 20, 12, 4]));
        assert_eq!(s.p, poly(&[20, -80, 112, -56]));
        assert_eq!(s.e, poly(&[8, -4]));
        s.verify_identity().unwrap();
    }

    #[test]
    fn diagonal_degrees() {
        for j in 1..=8 {
            for g in 0..=1u8 {
                let s = build_diagonal(j, g).unwrap();
                let r = (4 * j - g as u32) as usize;
                assert_eq!(s.p.degree(), Some(r));
                assert_eq!(s.q.degree(), Some(r));
                assert_eq!(s.e.degree(), Some((j + g as u32 - 1) as usize));
            }
        }
        assert!(build_diagonal(0, 0).is_err());
        assert!(build_diagonal(1, 2).is_err());
    }

    #[test]
    fn contents_and_normalization() {
        assert_eq!(content(1, 0).unwrap(), BigUint::one());
        assert_eq!(content(1, 1).unwrap(), BigUint::from(4u32));
        let s = build_normalized(1, 0).unwrap();
        assert_eq!(s, build_diagonal(1, 0).unwrap());
        let s = build_normalized(1, 1).unwrap();
        assert_eq!(s.q, poly(&[5, 5, 3, 1]));
        assert_eq!(s.content, BigUint::from(4u32));
        s.verify_identity().unwrap();
    }

    #[test]
    fn content_violation_detected() {
        let mut s = build_diagonal(1, 1).unwrap();
        s.e = poly(&[1, 2]);
        assert!(matches!(normalize(&s), Err(PadeError::ContentViolation { which: "E", .. })));
    }

    #[test]
    fn cross_constants() {
        let a = build_diagonal(1, 1).unwrap();
        let b = build_diagonal(1, 0).unwrap();
        let c = cross_constant(&a, &b).unwrap();
        assert!(!c.is_zero());
        // brute force: the product difference is c z^7
        let res = &(&a.p * &b.q) - &(&a.q * &b.p);
        assert_eq!(res, IntPolynomial::monomial(c.clone(), 7));
        assert_eq!(cross_constant(&b, &a).unwrap(), -c);
        assert_eq!(cross_constant(&a, &a), Err(PadeError::DegenerateCross));
        let other = build_diagonal(2, 0).unwrap();
        assert_eq!(cross_constant(&a, &other), Err(PadeError::Incompatible));
        let an = normalize(&a).unwrap();
        let bn = normalize(&b).unwrap();
        assert!(cross_constant(&an, &bn).is_ok());
    }

    #[test]
    fn assembled_identity_small_j() {
        let beta = QuadInt::new(1015, 1, 76).unwrap();
        let lambda = QuadInt::new(0, 2, 76).unwrap();
        for j in 1..=4 {
            for g in 0..=1 {
                let sys = build_normalized(j, g).unwrap();
                let ev = evaluate_system(&sys, &beta, &lambda).unwrap();
                assert!(assembled_identity_holds(&sys, &ev, &beta, &lambda), "j={j} g={g}");
            }
        }
        let e = eval_at_z0(&poly(&[1]), &beta, &lambda, 0).unwrap();
        assert_eq!(e, QuadInt::one(76).unwrap());
        assert!(eval_at_z0(&poly(&[1, 1]), &beta, &lambda, 0).is_err());
    }

    #[test]
    fn conjugate_inputs_conjugate_outputs() {
        let beta = QuadInt::new(1015, 1, 76).unwrap();
        let lambda = QuadInt::new(0, 2, 76).unwrap();
        let sys = build_normalized(2, 0).unwrap();
        let v = eval_at_z0(&sys.q, &beta, &lambda, 8).unwrap();
        let w = eval_at_z0(&sys.q, &beta.conj(), &lambda.conj(), 8).unwrap();
        assert_eq!(v.conj(), w);
    }
}
