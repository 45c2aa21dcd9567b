use serde::{Deserialize, Serialize};

use crate::error::{RacahError, Result};
use crate::scalar::{int, serde_scalar_vec, ExactScalar};
use num_traits::{One, Signed};

/// Number of tensor factors `n`, grid size `N` and the parameters `beta_0..beta_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSet {
    n: usize,
    #[serde(rename = "N")]
    big_n: u32,
    #[serde(with = "serde_scalar_vec")]
    beta: Vec<ExactScalar>,
}

impl ParameterSet {
    /// Builds a parameter set and rejects non-generic choices.
    pub fn new(n: usize, big_n: u32, beta: Vec<ExactScalar>) -> Result<Self> {
        let params = Self::raw(n, big_n, beta)?;
        params.check_generic()?;
        Ok(params)
    }

    /// Shape checks only; used where a degenerate parameter is the point of the call.
    pub fn raw(n: usize, big_n: u32, beta: Vec<ExactScalar>) -> Result<Self> {
        if n < 3 {
            return Err(RacahError::Range(format!("n must be at least 3, got {n}")));
        }
        if beta.len() != n {
            return Err(RacahError::Dimension(format!(
                "expected {n} beta parameters, got {}",
                beta.len()
            )));
        }
        Ok(ParameterSet { n, big_n, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The grid size `N`, which is also the coordinate `x_{n-1}`.
    pub fn big_n(&self) -> u32 {
        self.big_n
    }

    /// Number of grid coordinates, `n - 2`.
    pub fn dim(&self) -> usize {
        self.n - 2
    }

    pub fn betas(&self) -> &[ExactScalar] {
        &self.beta
    }

    /// `beta_i`, with the convention `beta_{-1} = -1`.
    pub fn beta(&self, i: isize) -> ExactScalar {
        if i == -1 {
            return -ExactScalar::one();
        }
        self.beta[i as usize].clone()
    }

    /// Strict genericity: every `b_i` denominator is nonzero on the grid and
    /// no consecutive gap `beta_{j+1} - beta_j` is an integer.
    pub fn check_generic(&self) -> Result<()> {
        for i in 1..=self.dim() {
            for x in 0..=self.big_n {
                let s = int(2 * x as i64) + &self.beta[i];
                if s.is_integer() && s.abs() <= ExactScalar::one() {
                    return Err(RacahError::Genericity(format!(
                        "2*x_{i} + beta_{i} = {s} at x_{i} = {x} makes a b_{i} denominator vanish"
                    )));
                }
            }
        }
        for j in 0..self.n - 1 {
            let gap = &self.beta[j + 1] - &self.beta[j];
            if gap.is_integer() {
                return Err(RacahError::Genericity(format!(
                    "beta_{} - beta_{} = {gap} is an integer",
                    j + 1,
                    j
                )));
            }
        }
        Ok(())
    }

    pub fn is_generic(&self) -> bool {
        self.check_generic().is_ok()
    }

    /// `beta_0 > -1` and `beta_{j+1} - beta_j > 1`: every weight factor is positive.
    pub fn in_positivity_regime(&self) -> bool {
        if self.beta[0] <= -ExactScalar::one() {
            return false;
        }
        self.beta
            .windows(2)
            .all(|w| &w[1] - &w[0] > ExactScalar::one())
    }
}

/// Multi-index `(k_1, ..., k_{n-2})` with `|k| <= N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndexK(Vec<u32>);

impl MultiIndexK {
    pub fn new(k: Vec<u32>, big_n: u32) -> Result<Self> {
        let total: u64 = k.iter().map(|&v| v as u64).sum();
        if total > big_n as u64 {
            return Err(RacahError::Range(format!("|k| = {total} exceeds N = {big_n}")));
        }
        Ok(MultiIndexK(k))
    }

    /// The index whose partial sums are the coordinates of `point`.
    pub fn from_partial_sums(point: &GridPointX) -> Self {
        let mut prev = 0;
        MultiIndexK(
            point
                .coords()
                .iter()
                .map(|&x| {
                    let k = x - prev;
                    prev = x;
                    k
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|k|_j = k_1 + ... + k_j`, with `|k|_0 = 0`.
    pub fn partial_sum(&self, j: usize) -> u32 {
        self.0[..j].iter().sum()
    }
}

/// Grid point `(x_1, ..., x_{n-2})` with `0 <= x_1 <= ... <= x_{n-2} <= N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPointX(Vec<u32>);

impl GridPointX {
    pub fn new(x: Vec<u32>, big_n: u32) -> Result<Self> {
        let mut prev = 0;
        for (i, &v) in x.iter().enumerate() {
            if v < prev || v > big_n {
                return Err(RacahError::Range(format!(
                    "x = {x:?} is not on the simplex 0 <= x_1 <= ... <= N = {big_n} (position {})",
                    i + 1
                )));
            }
            prev = v;
        }
        Ok(GridPointX(x))
    }

    pub(crate) fn from_sorted(x: Vec<u32>) -> Self {
        GridPointX(x)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// `x_i` for `0 <= i <= n-1`, with `x_0 = 0` and `x_{n-1} = N`.
    pub fn coord(&self, i: usize, big_n: u32) -> u32 {
        if i == 0 {
            0
        } else if i <= self.0.len() {
            self.0[i - 1]
        } else {
            big_n
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn beta4() -> Vec<ExactScalar> {
        vec![rat(1, 3), rat(5, 3), rat(10, 3), rat(14, 3)]
    }

    #[test]
    fn accepts_reference_parameters() {
        let p = ParameterSet::new(4, 5, beta4()).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.beta(-1), int(-1));
        assert!(p.in_positivity_regime());
    }

    #[test]
    fn rejects_integer_gap() {
        let err = ParameterSet::new(3, 4, vec![rat(1, 3), rat(4, 3), rat(10, 3)]).unwrap_err();
        assert!(matches!(err, RacahError::Genericity(_)));
    }

    #[test]
    fn rejects_vanishing_b_denominator() {
        let err = ParameterSet::new(3, 4, vec![rat(-3, 2), int(-3), rat(10, 3)]).unwrap_err();
        assert!(matches!(err, RacahError::Genericity(_)));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(ParameterSet::raw(2, 1, vec![int(1), int(2)]), Err(RacahError::Range(_))));
        assert!(matches!(ParameterSet::raw(4, 1, beta4()[..3].to_vec()), Err(RacahError::Dimension(_))));
    }

    #[test]
    fn multi_index_partial_sums() {
        let k = MultiIndexK::new(vec![1, 2, 0], 4).unwrap();
        assert_eq!(k.partial_sum(0), 0);
        assert_eq!(k.partial_sum(2), 3);
        assert!(MultiIndexK::new(vec![3, 2], 4).is_err());
        let x = GridPointX::new(vec![1, 3, 3], 4).unwrap();
        assert_eq!(MultiIndexK::from_partial_sums(&x).entries(), &[1, 2, 0]);
    }

    #[test]
    fn grid_point_conventions() {
        let x = GridPointX::new(vec![2, 3], 5).unwrap();
        assert_eq!(x.coord(0, 5), 0);
        assert_eq!(x.coord(2, 5), 3);
        assert_eq!(x.coord(3, 5), 5);
        assert!(GridPointX::new(vec![3, 2], 5).is_err());
        assert!(GridPointX::new(vec![3, 6], 5).is_err());
    }
}
