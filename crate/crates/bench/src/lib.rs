//! Shared inputs for the benchmarks.

use racah_core::scalar::rat;
use racah_core::ParameterSet;

/// Generic parameters `beta_i = (1 + 13 i)/3 + i^2/7` for `n` labels and degree `big_n`.
pub fn sample_params(n: usize, big_n: u32) -> ParameterSet {
    let beta = (0..n as i64).map(|i| rat(1 + 13 * i, 3) + rat(i * i, 7)).collect();
    ParameterSet::new(n, big_n, beta).expect("sample parameters are generic")
}
