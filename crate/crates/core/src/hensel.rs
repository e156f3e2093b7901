//! Roots of `x^2 + D ≡ 0 (mod p^n)`.
//!
//! Odd primes: a square root of `-D` modulo `p` (Tonelli–Shanks) is lifted one
//! power at a time. Writing `x^2 + D = p^n q`, the lift is
//! `x' = x + t p^n` with `t ≡ -q (2x)^-1 (mod p)`, which is Newton's step
//! `x - (x^2 + D)(2x)^-1` reduced modulo `p^(n+1)`. The new cofactor is
//! `q' = (q + 2tx + t^2 p^n) / p`, and the exactness of that division is the
//! congruence check for the lifted root.
//!
//! `p = 2`: for `n >= 3` there are four roots, `±s` and `±s + 2^(n-1)`; one of
//! `s`, `s + 2^(n-1)` survives to the next power.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError {
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("-{d} is not a square modulo {p}; ({p}) does not split")]
    NoSplit { d: u64, p: u64 },
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("lifted root {root} fails x^2 + {d} ≡ 0 (mod {p}^{n})")]
    LiftFailure { root: String, d: u64, p: u64, n: u32 },
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a | p)` for an odd prime `p`: 0, 1 or -1.
pub fn legendre(a: u64, p: u64) -> i8 {
    match pow_mod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `a^-1 mod m` by the extended Euclidean algorithm.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Both square roots of `a` modulo an odd prime `p`, smaller first.
pub fn sqrt_mod_p(a: u64, p: u64) -> Result<(u64, u64), HenselError> {
    if p == 2 || !is_prime(p) {
        return Err(HenselError::CompositeModulus(p));
    }
    let a = a % p;
    if a == 0 {
        return Err(HenselError::NoRoot(format!("{p} divides the radicand")));
    }
    if legendre(a, p) != 1 {
        return Err(HenselError::NoRoot(format!("{a} is a non-residue modulo {p}")));
    }
    let r = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        tonelli_shanks(a, p)
    };
    let (x, y) = (r, p - r);
    debug_assert_eq!(mul_mod(x, x, p), a);
    Ok((x.min(y), x.max(y)))
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    // smallest non-residue, found deterministically
    let z = (2..p).find(|&z| legendre(z, p) == -1).expect("odd prime has a non-residue");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// One tracked root together with its cofactor `(x^2 + D) / p^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub root: BigUint,
    pub cofactor: BigUint,
}

/// All roots of `x^2 + D` modulo `p^n`, stored as one representative per
/// `±` pair; the partner of `r` is `p^n - r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftState {
    p: u64,
    d: u64,
    n: u32,
    modulus: BigUint,
    branches: Vec<Branch>,
}

impl LiftState {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `p^n`.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Every root in `[0, p^n)`, sorted and deduplicated.
    pub fn roots(&self) -> Vec<BigUint> {
        let mut v: Vec<BigUint> = self
            .branches
            .iter()
            .flat_map(|b| [b.root.clone(), (&self.modulus - &b.root) % &self.modulus])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Every root with its cofactor `(x^2 + D) / p^n`, sorted by root.
    pub fn roots_with_cofactors(&self) -> Vec<(BigUint, BigUint)> {
        let mut v: Vec<(BigUint, BigUint)> = Vec::new();
        for b in &self.branches {
            v.push((b.root.clone(), b.cofactor.clone()));
            if b.root.is_zero() {
                continue;
            }
            // (p^n - x)^2 + D = p^n (p^n - 2x + q)
            let partner = &self.modulus - &b.root;
            let q = &self.modulus + &b.cofactor - (&b.root << 1u32);
            v.push((partner, q));
        }
        v.sort();
        v.dedup();
        v
    }

    /// Rebuild a state from stored branch roots, verifying each congruence.
    pub fn from_roots(d: u64, p: u64, n: u32, roots: Vec<BigUint>) -> Result<Self, HenselError> {
        if n == 0 {
            return Err(HenselError::ZeroExponent);
        }
        let modulus = BigUint::from(p).pow(n);
        let mut branches = Vec::with_capacity(roots.len());
        for root in roots {
            let (q, rem) = (&root * &root + d).div_rem(&modulus);
            if !rem.is_zero() || root >= modulus {
                return Err(HenselError::LiftFailure {
                    root: root.to_string(),
                    d,
                    p,
                    n,
                });
            }
            branches.push(Branch { root, cofactor: q });
        }
        Ok(LiftState {
            p,
            d,
            n,
            modulus,
            branches,
        })
    }

    /// Full recomputation of every congruence, independent of the lift.
    pub fn verify(&self) -> bool {
        self.roots_with_cofactors()
            .iter()
            .all(|(x, q)| x * x + self.d == q * &self.modulus)
    }
}

/// Lift an odd-prime state from `p^n` to `p^(n+1)`.
pub fn lift_step_odd(state: &LiftState) -> Result<LiftState, HenselError> {
    let p = state.p;
    assert!(p % 2 == 1, "lift_step_odd needs an odd prime");
    let pb = BigUint::from(p);
    let branches = state
        .branches
        .iter()
        .map(|b| {
            let x_mod_p = (&b.root % p).to_u64().unwrap();
            let q_mod_p = (&b.cofactor % p).to_u64().unwrap();
            let inv = inv_mod(&BigInt::from(2 * x_mod_p % p), &BigInt::from(p))
                .and_then(|v| v.to_u64())
                .ok_or_else(|| HenselError::NoRoot(format!("{p} divides 2x")))?;
            let t = mul_mod((p - q_mod_p) % p, inv, p);
            let tb = BigUint::from(t);
            let num: BigUint = &b.cofactor + ((&tb * &b.root) << 1u32) + &tb * &tb * &state.modulus;
            let (q, rem) = num.div_rem(&pb);
            if !rem.is_zero() {
                return Err(HenselError::LiftFailure {
                    root: b.root.to_string(),
                    d: state.d,
                    p,
                    n: state.n + 1,
                });
            }
            Ok(Branch {
                root: &b.root + &tb * &state.modulus,
                cofactor: q,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LiftState {
        p,
        d: state.d,
        n: state.n + 1,
        modulus: &state.modulus * p,
        branches,
    })
}

/// Lift a `p = 2` state with `n >= 3` to `2^(n+1)`.
pub fn lift_step_two(state: &LiftState) -> Result<LiftState, HenselError> {
    assert!(state.p == 2 && state.n >= 3, "lift_step_two needs p = 2, n >= 3");
    let n = state.n;
    let half = BigUint::one() << (n - 1);
    let next_mod: BigUint = &state.modulus << 1u32;
    let s = &state.branches[0].root;
    let pick = [s.clone(), s + &half]
        .into_iter()
        .find(|c: &BigUint| ((c * c + state.d) % &next_mod).is_zero())
        .ok_or_else(|| HenselError::LiftFailure {
            root: s.to_string(),
            d: state.d,
            p: 2,
            n: n + 1,
        })?;
    two_state(state.d, n + 1, next_mod, pick)
}

// Branch representatives s and s + 2^(n-1) (reduced) for n >= 3.
fn two_state(d: u64, n: u32, modulus: BigUint, s: BigUint) -> Result<LiftState, HenselError> {
    let half = BigUint::one() << (n - 1);
    let s = s % &modulus;
    let other = (&s + &half) % &modulus;
    LiftState::from_roots(d, 2, n, vec![s, other])
}

/// Roots of `x^2 + D` modulo `2^n`, for odd `D`.
pub fn lift_two(d: u64, n: u32) -> Result<LiftState, HenselError> {
    if n == 0 {
        return Err(HenselError::ZeroExponent);
    }
    if d % 2 == 0 {
        return Err(HenselError::NoRoot(format!("2 divides D = {d}")));
    }
    match n {
        1 => LiftState::from_roots(d, 2, 1, vec![BigUint::one()]),
        2 if d % 4 == 3 => LiftState::from_roots(d, 2, 2, vec![BigUint::one()]),
        2 => Err(HenselError::NoRoot(format!("x^2 ≡ -{d} (mod 4) is unsolvable"))),
        _ if d % 8 != 7 => Err(HenselError::NoRoot(format!(
            "x^2 ≡ -{d} (mod 8) is unsolvable (D ≢ 7 mod 8)"
        ))),
        _ => {
            let mut st = two_state(d, 3, BigUint::from(8u32), BigUint::one())?;
            while st.n < n {
                st = lift_step_two(&st)?;
            }
            Ok(st)
        }
    }
}

/// Iterator over successive lift states `n = 1, 2, ...`.
pub struct Lifts {
    next: Option<Result<LiftState, HenselError>>,
}

impl Iterator for Lifts {
    type Item = Result<LiftState, HenselError>;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.next.take()?;
        if let Ok(st) = &cur {
            self.next = Some(advance(st));
        }
        Some(cur)
    }
}

/// The state at `n + 1`.
pub fn advance(st: &LiftState) -> Result<LiftState, HenselError> {
    if st.p == 2 {
        if st.n >= 3 {
            lift_step_two(st)
        } else {
            lift_two(st.d, st.n + 1)
        }
    } else {
        lift_step_odd(st)
    }
}

/// Successive lift states beginning at `start`.
pub fn lifts_from(start: LiftState) -> Lifts {
    Lifts {
        next: Some(Ok(start)),
    }
}

/// The root set modulo `p^1`.
pub fn base_state(d: u64, p: u64) -> Result<LiftState, HenselError> {
    if !is_prime(p) {
        return Err(HenselError::CompositeModulus(p));
    }
    if d % p == 0 {
        return Err(HenselError::NoRoot(format!("{p} divides D = {d}")));
    }
    if p == 2 {
        return lift_two(d, 1);
    }
    let a = (p - d % p) % p;
    let (r, _) = sqrt_mod_p(a, p).map_err(|e| match e {
        HenselError::NoRoot(_) => HenselError::NoSplit { d, p },
        e => e,
    })?;
    LiftState::from_roots(d, p, 1, vec![BigUint::from(r)])
}

/// Rebuild a lift state from its full root set, as listed by
/// [`LiftState::roots`]; fails unless the set is exactly right.
pub fn state_from_root_set(d: u64, p: u64, n: u32, roots: &[BigUint]) -> Result<LiftState, HenselError> {
    let bad = |why: &str| HenselError::NoRoot(format!("stored root set invalid: {why}"));
    let mut sorted = roots.to_vec();
    sorted.sort();
    sorted.dedup();
    let first = sorted.first().ok_or_else(|| bad("empty"))?.clone();
    let st = if p == 2 && n >= 3 {
        two_state(d, n, BigUint::one() << n, first)?
    } else if p == 2 {
        lift_two(d, n)?
    } else {
        LiftState::from_roots(d, p, n, vec![first])?
    };
    if st.roots() != sorted || !st.verify() {
        return Err(bad("does not match the congruence"));
    }
    Ok(st)
}

/// Full root set of `x^2 + D` modulo `p^n`.
pub fn roots_mod_pn(d: u64, p: u64, n: u32) -> Result<LiftState, HenselError> {
    if n == 0 {
        return Err(HenselError::ZeroExponent);
    }
    if p == 2 {
        if d % 2 == 1 {
            return lift_two(d, n);
        }
        return Err(HenselError::NoRoot(format!("2 divides D = {d}")));
    }
    let mut st = base_state(d, p)?;
    while st.n < n {
        st = lift_step_odd(&st)?;
    }
    Ok(st)
}
