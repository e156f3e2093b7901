//! Exhaustive identity sweeps over small parameter ranges.

use rayon::prelude::*;
use serde::Serialize;

use super::{build_diagonal, build_general, cross_constant, normalize, PadeError};

pub const SWEEP_SCHEMA: &str = "rnlab.pade-verify/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub j_max: u32,
    pub abc_max: u64,
    pub diagonal_checked: usize,
    pub general_checked: usize,
    pub cross_checked: usize,
    pub failures: Vec<String>,
    pub all_pass: bool,
}

fn diagonal_case(j: u32, g: u8) -> Result<(), PadeError> {
    let raw = build_diagonal(j, g)?;
    raw.verify_identity()?;
    normalize(&raw)?.verify_identity()
}

fn cross_case(j: u32) -> Result<(), PadeError> {
    let (a, b) = (build_diagonal(j, 0)?, build_diagonal(j, 1)?);
    cross_constant(&a, &b)?;
    cross_constant(&normalize(&a)?, &normalize(&b)?)?;
    Ok(())
}

/// Checks every diagonal system with `j <= j_max` (raw and normalized), the
/// cross identity for each adjacent pair, and every general system with
/// `A, B, C <= abc_max`.
pub fn verify_sweep(j_max: u32, abc_max: u64) -> SweepReport {
    let diag: Vec<(u32, u8)> = (1..=j_max).flat_map(|j| [(j, 0), (j, 1)]).collect();
    let mut failures: Vec<String> = diag
        .par_iter()
        .filter_map(|&(j, g)| diagonal_case(j, g).err().map(|e| format!("diagonal j={j} g={g}: {e}")))
        .collect();
    failures.extend(
        (1..=j_max)
            .into_par_iter()
            .filter_map(|j| cross_case(j).err().map(|e| format!("cross j={j}: {e}")))
            .collect::<Vec<_>>(),
    );
    let general: Vec<(u64, u64, u64)> = (0..=abc_max)
        .flat_map(|a| (0..=abc_max).flat_map(move |b| (0..=abc_max).map(move |c| (a, b, c))))
        .collect();
    failures.extend(
        general
            .par_iter()
            .filter_map(|&(a, b, c)| {
                build_general(a, b, c, true)
                    .err()
                    .map(|e| format!("general A={a} B={b} C={c}: {e}"))
            })
            .collect::<Vec<_>>(),
    );
    SweepReport {
        schema: SWEEP_SCHEMA,
        j_max,
        abc_max,
        diagonal_checked: diag.len(),
        general_checked: general.len(),
        cross_checked: j_max as usize,
        all_pass: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        let rep = verify_sweep(3, 3);
        assert!(rep.all_pass, "{:?}", rep.failures);
        assert_eq!(rep.general_checked, 64);
        assert_eq!(rep.diagonal_checked, 6);
    }
}
