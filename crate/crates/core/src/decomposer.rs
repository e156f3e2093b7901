//! Writing a large solution as `x + sqrt(-D) = beta^k mu` and auditing the
//! inequality chain that bounds its cofactor.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::base::BaseSolution;
use crate::certifier::{AuditConstants, HugeSolutionCertificate};
use crate::pade::{self, PadeError};
use crate::quadring::{QuadError, QuadInt};
use crate::report::{ratio_string, ser_decimal, ser_quad, ser_ratio};
use crate::util::{ln_biguint, ratio_to_f64};

pub const DECOMPOSITION_SCHEMA: &str = "rnlab.decomposition/1";
pub const AUDIT_SCHEMA: &str = "rnlab.audit/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("precondition failed: {0}")]
    PreconditionFail(String),
    #[error("neither beta^{k} nor its conjugate divides x + sqrt(-D) for x = {x}, n = {n}")]
    NeitherBranch { x: String, n: u32, k: u64 },
    #[error("both beta^{k} and its conjugate divide x + sqrt(-D) for x = {x}, n = {n}")]
    BothBranches { x: String, n: u32, k: u64 },
    #[error("Q mu - P conj(mu) vanishes for g = 0 and g = 1 (j = {j})")]
    BothBranchesVanish { j: u32 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Pade(#[from] PadeError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    /// `beta^k` divides `gamma`.
    Plus,
    /// `conj(beta)^k` divides `gamma`.
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub schema: &'static str,
    #[serde(flatten)]
    pub base: BaseSolution,
    #[serde(serialize_with = "ser_decimal")]
    pub x: BigUint,
    pub n: u32,
    pub j: u32,
    pub k: u64,
    pub l: u32,
    pub branch: BranchKind,
    /// `beta^k mu - conj(beta)^k conj(mu) = sign * lambda`.
    pub sign: i8,
    #[serde(serialize_with = "ser_quad")]
    pub gamma: QuadInt,
    #[serde(serialize_with = "ser_quad")]
    pub mu: QuadInt,
    #[serde(serialize_with = "ser_decimal")]
    pub mu_norm: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub m: BigUint,
    #[serde(serialize_with = "ser_quad")]
    pub lambda: QuadInt,
}

fn exponents(base: &BaseSolution, n: u32) -> Result<(u32, u32), DecomposeError> {
    let off = base.norm_offset();
    if base.n0 <= off || n <= off {
        return Err(DecomposeError::PreconditionFail(format!(
            "exponents must exceed {off} for p = {}",
            base.p
        )));
    }
    Ok((n - off, base.n0 - off))
}

/// Split `gamma = x + sqrt(-D)` (halved for `p = 2`) along `beta^k`.
pub fn decompose(base: &BaseSolution, x: &BigUint, n: u32) -> Result<Decomposition, DecomposeError> {
    let fail = |s: String| Err(DecomposeError::PreconditionFail(s));
    if !base.is_exact_power() {
        return fail(format!("{}^2 + {} is not {}^{}", base.x0, base.d, base.p, base.n0));
    }
    if base.d % base.p == 0 {
        return fail(format!("{} divides D = {}", base.p, base.d));
    }
    if n <= 5 * base.n0 {
        return fail(format!("n = {n} must exceed 5 n0 = {}", 5 * base.n0));
    }
    let pn = base.p_pow(n);
    let (m, rem) = (x * x + base.d).div_rem(&pn);
    if !rem.is_zero() {
        return fail(format!("{}^{n} does not divide {x}^2 + {}", base.p, base.d));
    }
    let (e, e0) = exponents(base, n)?;
    let j = e / (5 * e0);
    let k = 5 * j as u64;
    let l = e - e0 * k as u32;

    let d = base.d;
    let xi = BigInt::from(x.clone());
    let gamma = if base.is_two() {
        QuadInt::from_halves(xi, 1, d)?
    } else {
        QuadInt::new(xi, 1, d)?
    };
    let beta = base.beta()?;
    let lambda = base.lambda()?;
    let bk = beta.pow(k);
    let plus = gamma.exact_div(&bk).ok();
    let minus = gamma.exact_div(&bk.conj()).ok().map(|v| v.conj());
    let (branch, sign, mu) = match (plus, minus) {
        (Some(mu), None) => (BranchKind::Plus, 1i8, mu),
        (None, Some(mu)) => (BranchKind::Minus, -1i8, mu),
        (None, None) => {
            return Err(DecomposeError::NeitherBranch { x: x.to_string(), n, k });
        }
        (Some(_), Some(_)) => {
            return Err(DecomposeError::BothBranches { x: x.to_string(), n, k });
        }
    };

    let lhs = &(&bk * &mu) - &(&bk.conj() * &mu.conj());
    let rhs = if sign > 0 { lambda.clone() } else { -&lambda };
    if lhs != rhs {
        return Err(DecomposeError::Invariant(format!(
            "beta^k mu - conj(beta^k mu) = {lhs}, expected {rhs}"
        )));
    }
    let mu_norm = mu.norm();
    if mu_norm != base.p_pow(l) * &m {
        return Err(DecomposeError::Invariant(format!("N(mu) = {mu_norm} is not p^{l} m")));
    }
    Ok(Decomposition {
        schema: DECOMPOSITION_SCHEMA,
        base: base.clone(),
        x: x.clone(),
        n,
        j,
        k,
        l,
        branch,
        sign,
        gamma,
        mu,
        mu_norm,
        m,
        lambda,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
    /// `ln(rhs) - ln(lhs)` for an inequality `lhs < rhs`; positive when it holds.
    pub log_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainAudit {
    pub g: u8,
    pub r: u64,
    /// `Q mu - P conj(mu) != 0`.
    pub nonzero: bool,
    #[serde(serialize_with = "ser_quad")]
    pub q_mu_minus_p_mubar: QuadInt,
    /// `beta^k (Q mu - P conj(mu)) = sign Q lambda - E conj(mu)`, exactly.
    pub identity_holds: bool,
    /// `|beta|^k <= |Q||lambda| + |E||mu|`.
    pub size_bound: Check,
    /// `m p^(5 n0 - 1) >= |mu|^2`.
    pub cofactor_bound: Check,
    /// Quoted intermediate inequalities; only binding above `X_star`.
    pub informational: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub schema: &'static str,
    pub decomposition: Decomposition,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma: BigRational,
    pub certified: bool,
    pub chains: Vec<ChainAudit>,
    pub any_nonzero: bool,
}

fn ln_sqrt(n: &BigUint) -> f64 {
    if n.is_zero() {
        f64::NEG_INFINITY
    } else {
        0.5 * ln_biguint(n)
    }
}

fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// `sqrt(a) <= sqrt(b) + sqrt(c)`, exactly.
fn sqrt_sum_dominates(a: &BigUint, b: &BigUint, c: &BigUint) -> bool {
    let (a, b, c) = (BigInt::from(a.clone()), BigInt::from(b.clone()), BigInt::from(c.clone()));
    let t = &a - &b - &c;
    t <= BigInt::zero() || &t * &t <= BigInt::from(4) * b * c
}

/// Audit the chain for one member `g` of the normalized diagonal family.
pub fn audit_theorem1_chain(cert: &HugeSolutionCertificate, dec: &Decomposition, g: u8) -> Result<ChainAudit, DecomposeError> {
    if cert.base != dec.base {
        return Err(DecomposeError::PreconditionFail(
            "certificate and decomposition describe different base solutions".into(),
        ));
    }
    let base = &dec.base;
    let beta = base.beta()?;
    let lambda = &dec.lambda;
    let sys = pade::build_normalized(dec.j, g)?;
    let ev = pade::evaluate_system(&sys, &beta, lambda)?;
    if !pade::assembled_identity_holds(&sys, &ev, &beta, lambda) {
        return Err(DecomposeError::Invariant(format!(
            "assembled Pade identity fails for j = {}, g = {g}",
            dec.j
        )));
    }
    let r = sys.r();
    let k = dec.k;
    let mu = &dec.mu;
    let mubar = mu.conj();
    // E' = (-1)^r lambda^(2r+1) E, so that beta^k P - conj(beta)^k Q = E'
    let mut e_full = &lambda.pow(2 * r + 1) * &ev.e;
    if r % 2 == 1 {
        e_full = -e_full;
    }
    let diff = &(&ev.q * mu) - &(&ev.p * &mubar);
    let q_lambda = &ev.q * lambda;
    let signed = if dec.sign > 0 { q_lambda } else { -&q_lambda };
    let identity_holds = &beta.pow(k) * &diff == &signed - &(&e_full * &mubar);
    if !identity_holds {
        return Err(DecomposeError::Invariant(format!(
            "beta^k (Q mu - P conj(mu)) identity fails for j = {}, g = {g}",
            dec.j
        )));
    }

    let beta_k_sq = beta.norm().pow(k as u32);
    let b_sq = ev.q.norm() * lambda.norm();
    let c_sq = e_full.norm() * dec.mu_norm.clone();
    let size_bound = Check {
        name: "|beta|^k <= |Q||lambda| + |E||mu|",
        holds: sqrt_sum_dominates(&beta_k_sq, &b_sq, &c_sq),
        log_margin: ln_add(ln_sqrt(&b_sq), ln_sqrt(&c_sq)) - ln_sqrt(&beta_k_sq),
    };

    let off = base.norm_offset();
    let gap = AuditConstants::p_pow_gap(base.n0 - off);
    let lhs = &dec.m * base.p_pow(gap);
    let cofactor_bound = Check {
        name: "m p^(5 n0 - 1) >= |mu|^2",
        holds: lhs >= dec.mu_norm,
        log_margin: ln_biguint(&lhs) - ln_biguint(&dec.mu_norm),
    };

    let ac = AuditConstants::default();
    let mut informational = Vec::new();
    let ln_beta = ln_sqrt(&beta.norm());
    let ln_q_lambda = ln_sqrt(&b_sq);
    informational.push(Check {
        name: "|Q||lambda| < 9/10 |beta|^k",
        holds: BigUint::from(100u32) * &b_sq < BigUint::from(81u32) * &beta_k_sq,
        log_margin: ratio_to_f64(&ac.nine_tenths).ln() + k as f64 * ln_beta - ln_q_lambda,
    });
    let quoted = ratio_to_f64(&ac.q_lambda_coeff).ln()
        + dec.j as f64 * 89.3445f64.ln()
        + (r as f64 + ratio_to_f64(&ac.beta_exp)) * ln_beta;
    informational.push(Check {
        name: "|Q||lambda| < 0.238074 89.3445^j |beta|^(r + 0.4873)",
        holds: quoted > ln_q_lambda,
        log_margin: quoted - ln_q_lambda,
    });
    let x_sq = &dec.x * &dec.x;
    let gamma_sq = dec.gamma.norm();
    let (x_holds, x_margin) = if base.is_two() {
        (
            BigUint::from(100u32) * &gamma_sq > BigUint::from(49u32) * &x_sq,
            ln_sqrt(&gamma_sq) - ratio_to_f64(&ac.x_coeff).ln() - ln_sqrt(&x_sq),
        )
    } else {
        (gamma_sq > x_sq, ln_sqrt(&gamma_sq) - ln_sqrt(&x_sq))
    };
    informational.push(Check {
        name: if base.is_two() { "|beta^k mu| > 0.7 x" } else { "|beta^k mu| > x" },
        holds: x_holds,
        log_margin: x_margin,
    });
    let sigma = ratio_to_f64(&cert.sigma);
    let ln_mu = ln_sqrt(&dec.mu_norm);
    let ln_x = ln_biguint(&dec.x);
    let t = (sigma + 0.04) / (1.96 - sigma);
    let margin = ln_mu - ratio_to_f64(&ac.mu_div).ln() - t * k as f64 * ln_beta;
    informational.push(Check {
        name: "|beta|^(k (sigma + 0.04)/(1.96 - sigma)) < |mu| / 6.89",
        holds: margin > 0.0,
        log_margin: margin,
    });
    let margin = 2.0 / (1.96 - sigma) * ln_mu - ratio_to_f64(&ac.mid_coeff).ln() - t * ln_x;
    informational.push(Check {
        name: "|mu|^(2/(1.96 - sigma)) > 5.24 x^((sigma + 0.04)/(1.96 - sigma))",
        holds: margin > 0.0,
        log_margin: margin,
    });
    let margin = 2.0 * ln_mu - ratio_to_f64(&ac.final_coeff).ln() - (sigma + 0.04) * ln_x;
    informational.push(Check {
        name: "|mu|^2 > 6.32 x^(sigma + 0.04)",
        holds: margin > 0.0,
        log_margin: margin,
    });

    Ok(ChainAudit {
        g,
        r,
        nonzero: !diff.is_zero(),
        q_mu_minus_p_mubar: diff,
        identity_holds,
        size_bound,
        cofactor_bound,
        informational,
    })
}

/// Audit both members of the family; at least one must give a nonzero
/// `Q mu - P conj(mu)`.
pub fn audit(cert: &HugeSolutionCertificate, dec: &Decomposition) -> Result<AuditReport, DecomposeError> {
    let chains = [0u8, 1]
        .iter()
        .map(|&g| audit_theorem1_chain(cert, dec, g))
        .collect::<Result<Vec<_>, _>>()?;
    let any_nonzero = chains.iter().any(|c| c.nonzero);
    if !any_nonzero {
        return Err(DecomposeError::BothBranchesVanish { j: dec.j });
    }
    Ok(AuditReport {
        schema: AUDIT_SCHEMA,
        decomposition: dec.clone(),
        sigma: cert.sigma.clone(),
        certified: cert.is_certified(),
        chains,
        any_nonzero,
    })
}

impl std::fmt::Display for Decomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "x = {} (n = {})", self.x, self.n)?;
        writeln!(f, "j = {}, k = {}, l = {}, branch = {:?}", self.j, self.k, self.l, self.branch)?;
        writeln!(f, "mu = {}", self.mu)?;
        writeln!(f, "N(mu) = {}^{} * m, m = {}", self.base.p, self.l, self.m)?;
        write!(
            f,
            "beta^k mu - conj(beta^k mu) = {}{}",
            if self.sign > 0 { "" } else { "-" },
            self.lambda
        )
    }
}

impl std::fmt::Display for AuditReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}", self.decomposition)?;
        writeln!(f, "sigma = {}, certified = {}", ratio_string(&self.sigma), self.certified)?;
        for c in &self.chains {
            writeln!(f, "g = {} (r = {}): Q mu - P conj(mu) {}", c.g, c.r, if c.nonzero { "!= 0" } else { "= 0" })?;
            for ch in std::iter::once(&c.size_bound).chain([&c.cofactor_bound]).chain(&c.informational) {
                writeln!(
                    f,
                    "  [{}] {} (ln margin {:.4})",
                    if ch.holds { "ok" } else { "--" },
                    ch.name,
                    ch.log_margin
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::{certify, Variant};
    use crate::hensel::roots_mod_pn;
    use crate::rigor::Precision;

    fn base() -> BaseSolution {
        BaseSolution::new(76, 101, 1015u32, 3)
    }

    #[test]
    fn n16_both_roots() {
        let st = roots_mod_pn(76, 101, 16).unwrap();
        let cert = certify(&base(), &BigRational::new(1.into(), 10.into()), Variant::FiveJ, Precision::default()).unwrap();
        let mut branches = Vec::new();
        for x in st.roots() {
            let d = decompose(&base(), &x, 16).unwrap();
            assert_eq!((d.j, d.k, d.l), (1, 5, 1));
            // independent norm accounting: N(gamma) = N(beta)^k N(mu)
            assert_eq!(d.gamma.norm(), BigUint::from(101u32).pow(15) * &d.mu_norm);
            assert_eq!(d.m, (&x * &x + 76u32) / BigUint::from(101u32).pow(16));
            // round trip on the plus branch
            if d.branch == BranchKind::Plus {
                assert_eq!(&base().beta().unwrap().pow(5) * &d.mu, d.gamma);
            }
            branches.push(d.branch);
            let rep = audit(&cert, &d).unwrap();
            assert!(rep.any_nonzero);
            assert!(rep.chains.iter().all(|c| c.cofactor_bound.holds));
        }
        branches.sort_by_key(|b| *b as u8);
        assert_eq!(branches, vec![BranchKind::Plus, BranchKind::Minus]);
    }

    #[test]
    fn boundary_rejected() {
        let st = roots_mod_pn(76, 101, 15).unwrap();
        let x = &st.roots()[0];
        assert!(matches!(decompose(&base(), x, 15), Err(DecomposeError::PreconditionFail(_))));
        assert!(matches!(
            decompose(&base(), &BigUint::from(3u32), 16),
            Err(DecomposeError::PreconditionFail(_))
        ));
    }

    #[test]
    fn two_adic_instance() {
        // 181^2 + 7 = 2^15; halved exponents n - 2 and n0 - 2
        let b = BaseSolution::new(7, 2, 181u32, 15);
        let st = roots_mod_pn(7, 2, 80).unwrap();
        for x in st.roots() {
            let d = decompose(&b, &x, 80).unwrap();
            assert_eq!((d.j, d.k, d.l), (1, 5, 78 - 65));
            assert_eq!(d.mu_norm, BigUint::from(2u32).pow(d.l) * &d.m);
        }
    }
}
