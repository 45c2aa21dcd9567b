use racah_core::algebra::{
    rank_one_family, verify_bispectral, verify_centrality, verify_classical_presentation,
    verify_commutation, verify_lind, verify_rank_one, verify_shift_covariance, verify_sigma,
    verify_specialization, verify_spectrum,
};
use racah_core::orthogonality::{
    connection_matrix, verify_diagonalization, verify_orthogonality_exact, NORMALIZATION_TOLERANCE,
};
use racah_core::{GeneratorTable, LabelSet, RacahError, RelationCheck, Result, Status};
use rayon::prelude::*;

use crate::config::{Mode, RunConfig, Suite};

/// Errors that mean a relation does not hold rather than that the input was unusable.
fn is_relation_failure(e: &RacahError) -> bool {
    matches!(e, RacahError::Structure(_) | RacahError::SpectrumMismatch(_) | RacahError::Boundary(_))
}

/// Runs the selected suites in parallel; results keep suite order.
pub fn run(config: &RunConfig, table: &GeneratorTable) -> Result<Vec<RelationCheck>> {
    let results: Vec<Result<Vec<RelationCheck>>> = config
        .suites
        .par_iter()
        .map(|&suite| match run_one(suite, config, table) {
            Err(e) if is_relation_failure(&e) => {
                Ok(vec![RelationCheck::fail(suite.name(), vec![], e.to_string())])
            }
            other => other,
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn run_one(suite: Suite, config: &RunConfig, table: &GeneratorTable) -> Result<Vec<RelationCheck>> {
    let params = &config.params;
    let n = config.n;
    match suite {
        Suite::Commutation => {
            let mut checks = verify_commutation(table)?;
            checks.extend(verify_centrality(table)?);
            Ok(checks)
        }
        Suite::RankOne => {
            let family = rank_one_family(n, config.full_rank_one);
            let nested = family
                .par_iter()
                .map(|(k, l, m)| verify_rank_one(k, l, m, table))
                .collect::<Result<Vec<_>>>()?;
            Ok(nested.into_iter().flatten().collect())
        }
        Suite::Classical => {
            let a = LabelSet::new(vec![1, 2])?;
            let b = LabelSet::new(vec![2, 3])?;
            let presentation = verify_classical_presentation(table, &a, &b)?;
            Ok(presentation.checks())
        }
        Suite::Lind => verify_lind(table),
        Suite::Bispectral => {
            let mut checks = verify_bispectral(params)?;
            checks.extend(verify_diagonalization(table)?);
            Ok(checks)
        }
        Suite::Sigma => {
            let mut checks = verify_sigma(table)?;
            let dim = params.dim();
            let cases: Vec<_> = (1..=dim)
                .flat_map(|j| (1..=dim - j).map(move |offset| (j, offset)))
                .collect();
            checks.extend(verify_shift_covariance(params, &cases)?);
            Ok(checks)
        }
        Suite::Spectrum => {
            let intervals: Vec<_> = (1..=n).flat_map(|p| (p..=n).map(move |q| (p, q))).collect();
            intervals.par_iter().map(|&(p, q)| verify_spectrum(p, q, table)).collect()
        }
        Suite::Orthogonality => {
            let mut checks = Vec::new();
            if config.mode != Mode::Float {
                checks.extend(verify_orthogonality_exact(params)?.checks);
            }
            if config.mode != Mode::Exact {
                let error = connection_matrix(params)?.orthonormality_error();
                let operands = vec![format!("tolerance={NORMALIZATION_TOLERANCE:e}")];
                let mut check = RelationCheck::from_bool(
                    "connection orthonormality",
                    operands,
                    error <= NORMALIZATION_TOLERANCE,
                    || format!("max |M M^T - I| = {error:e}"),
                );
                if check.passed() {
                    check.status = Status::TolerancePass;
                }
                checks.push(check);
            }
            Ok(checks)
        }
        Suite::Specialization => verify_specialization(params),
    }
}
