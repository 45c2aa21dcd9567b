//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use racah_core::algebra::{
    verify_bispectral, verify_classical_presentation, verify_commutation, verify_lind,
    verify_rank_one, verify_shift_covariance, verify_sigma, verify_spectrum,
    verify_specialization,
};
use racah_core::orthogonality::verify_orthogonality_exact;
use racah_core::scalar::rat;
use racah_core::{ExactScalar, GeneratorTable, LabelSet, ParameterSet, RelationCheck, Result};

/// Float normalization tolerance for the Gram check.
const GRAM_TOLERANCE: f64 = 1e-9;

fn betas(n: usize) -> Vec<ExactScalar> {
    [rat(1, 3), rat(5, 3), rat(10, 3), rat(14, 3), rat(19, 3)][..n].to_vec()
}

fn params(n: usize, big_n: u32) -> ParameterSet {
    ParameterSet::new(n, big_n, betas(n)).expect("reference parameters are generic")
}

fn set(m: &[usize]) -> LabelSet {
    LabelSet::new(m.to_vec()).expect("valid label set")
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_checks(checks: &[RelationCheck]) -> Outcome {
    let failed: Vec<&RelationCheck> = checks.iter().filter(|c| !c.passed()).collect();
    let detail = match failed.first() {
        None => format!("{} relations pass", checks.len()),
        Some(c) => format!(
            "{} of {} relations failed; first: {} {:?}: {}",
            failed.len(),
            checks.len(),
            c.name,
            c.operands,
            c.witness.as_deref().unwrap_or("")
        ),
    };
    Outcome { passed: failed.is_empty(), detail }
}

fn criterion_1() -> Result<Outcome> {
    let checks = verify_specialization(&params(3, 10))?;
    let eigen = checks.iter().filter(|c| c.name == "specialization eigenvector").count();
    let mut out = from_checks(&checks);
    out.passed &= eigen == 11;
    Ok(out)
}

fn criterion_2() -> Result<Outcome> {
    let table = GeneratorTable::new(params(3, 10))?;
    let checks = verify_rank_one(&set(&[1]), &set(&[2]), &set(&[3]), &table)?;
    let mut out = from_checks(&checks);
    out.passed &= checks.len() == 6;
    Ok(out)
}

fn criterion_3() -> Result<Outcome> {
    let table = GeneratorTable::new(params(4, 5))?;
    let mut checks = verify_commutation(&table)?;
    checks.extend(verify_lind(&table)?);
    for (k, l, m) in [
        (set(&[1]), set(&[2]), set(&[3])),
        (set(&[1]), set(&[2, 3]), set(&[4])),
        (set(&[1, 2]), set(&[3]), set(&[4])),
        (set(&[1]), set(&[2]), set(&[3, 4])),
    ] {
        checks.extend(verify_rank_one(&k, &l, &m, &table)?);
    }
    let sigma = verify_sigma(&table)?;
    let c34 = sigma
        .iter()
        .find(|c| c.operands.first().map(String::as_str) == Some("C{3,4}"))
        .cloned();
    let mut out = from_checks(&checks.into_iter().chain(sigma).collect::<Vec<_>>());
    out.passed &= c34.is_some_and(|c| c.passed());
    Ok(out)
}

fn criterion_4() -> Result<Outcome> {
    let checks = verify_bispectral(&params(5, 5))?;
    let mut out = from_checks(&checks);
    out.passed &= checks.len() == 3 + 3;
    Ok(out)
}

fn criterion_5() -> Result<Outcome> {
    let summary = verify_orthogonality_exact(&params(4, 6))?;
    let mut out = from_checks(&summary.checks);
    let err = summary.normalization_error.unwrap_or(f64::INFINITY);
    out.passed &= err <= GRAM_TOLERANCE;
    out.detail = format!("{}; |normalization - 1| = {err:.3e} (tolerance {GRAM_TOLERANCE:e})", out.detail);
    Ok(out)
}

fn criterion_6() -> Result<Outcome> {
    let checks = verify_shift_covariance(&params(5, 4), &[(1, 1), (1, 2), (2, 1)])?;
    Ok(from_checks(&checks))
}

fn criterion_7() -> Result<Outcome> {
    let table = GeneratorTable::new(params(4, 3))?;
    Ok(from_checks(&[verify_spectrum(2, 4, &table)?]))
}

fn criterion_8() -> Result<Outcome> {
    let table = GeneratorTable::new(params(3, 4))?;
    let c = verify_classical_presentation(&table, &set(&[1, 2]), &set(&[2, 3]))?;
    let mut out = from_checks(&c.checks());
    out.detail = format!("{}; d = {}, e1 = {}, e2 = {}", out.detail, c.d, c.e1, c.e2);
    Ok(out)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>, Duration); 8] = [
        ("1 rank-one eigenvectors, n=3 N=10", criterion_1, Duration::from_secs(1)),
        ("2 rank-one relations, n=3 N=10", criterion_2, Duration::from_secs(1)),
        ("3 rank-two generators, n=4 N=5", criterion_3, Duration::from_secs(30)),
        ("4 bispectrality, n=5 N=5", criterion_4, Duration::from_secs(120)),
        ("5 orthogonality, n=4 N=6", criterion_5, Duration::from_secs(120)),
        ("6 shift covariance, n=5 N=4", criterion_6, Duration::from_secs(30)),
        ("7 spectrum of C[2..4], n=4 N=3", criterion_7, Duration::from_secs(30)),
        ("8 classical presentation, n=3 N=4", criterion_8, Duration::from_secs(30)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {name}: {} ({:.3}s, budget {}s) {detail}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
