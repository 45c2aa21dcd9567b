use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{RacahError, Result};
use crate::params::{GridPointX, MultiIndexK, ParameterSet};
use crate::scalar::ExactScalar;

/// The simplex `0 <= x_1 <= ... <= x_{n-2} <= N` in lexicographic order.
#[derive(Debug)]
pub struct SimplexGrid {
    params: ParameterSet,
    points: Vec<GridPointX>,
    index: HashMap<Vec<u32>, usize>,
}

impl PartialEq for SimplexGrid {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl SimplexGrid {
    pub fn new(params: ParameterSet) -> Arc<Self> {
        let dim = params.dim();
        let big_n = params.big_n();
        let mut points = Vec::new();
        let mut current = vec![0u32; dim];
        enumerate(&mut current, 0, 0, big_n, &mut points);
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.coords().to_vec(), i))
            .collect();
        Arc::new(SimplexGrid { params, points, index })
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GridPointX] {
        &self.points
    }

    pub fn point(&self, row: usize) -> &GridPointX {
        &self.points[row]
    }

    pub fn index_of(&self, coords: &[u32]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Row of `point + nu`, or `None` when the shifted point leaves the simplex.
    pub fn shifted_index(&self, point: &GridPointX, nu: &[i8]) -> Option<usize> {
        let mut shifted = Vec::with_capacity(nu.len());
        for (&x, &s) in point.coords().iter().zip(nu) {
            let v = x as i64 + s as i64;
            if v < 0 {
                return None;
            }
            shifted.push(v as u32);
        }
        self.index_of(&shifted)
    }

    /// Multi-indices `k` with `|k| <= N`, ordered so that `k` sits at the row of its
    /// partial-sum point.
    pub fn multi_indices(&self) -> Vec<MultiIndexK> {
        self.points.iter().map(MultiIndexK::from_partial_sums).collect()
    }

    pub fn ensure_same(&self, other: &SimplexGrid) -> Result<()> {
        if self != other {
            return Err(RacahError::Dimension(
                "operands live on different grids".to_string(),
            ));
        }
        Ok(())
    }
}

fn enumerate(current: &mut Vec<u32>, pos: usize, low: u32, big_n: u32, out: &mut Vec<GridPointX>) {
    if pos == current.len() {
        out.push(GridPointX::from_sorted(current.clone()));
        return;
    }
    for v in low..=big_n {
        current[pos] = v;
        enumerate(current, pos + 1, v, big_n, out);
    }
}

/// Exact-valued function on a simplex grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Arc<SimplexGrid>,
    values: Vec<ExactScalar>,
}

impl GridFunction {
    pub fn new(grid: Arc<SimplexGrid>, values: Vec<ExactScalar>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(RacahError::Dimension(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn<F>(grid: Arc<SimplexGrid>, f: F) -> Result<Self>
    where
        F: Fn(&GridPointX) -> Result<ExactScalar>,
    {
        let values = grid.points().iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(GridFunction { grid, values })
    }

    pub fn grid(&self) -> &Arc<SimplexGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[ExactScalar] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ExactScalar> {
        self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn binomial(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn cardinality_and_order() {
        for (n, big_n) in [(3usize, 0u32), (3, 10), (4, 5), (5, 5), (6, 3)] {
            let beta = (0..n).map(|i| rat(3 * i as i64 + 1, 3)).collect();
            let grid = SimplexGrid::new(ParameterSet::raw(n, big_n, beta).unwrap());
            assert_eq!(grid.len() as u64, binomial(big_n as u64 + n as u64 - 2, n as u64 - 2));
            let pts = grid.points();
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            for (i, p) in pts.iter().enumerate() {
                assert_eq!(grid.index_of(p.coords()), Some(i));
            }
        }
    }

    #[test]
    fn shifted_lookup_respects_simplex() {
        let beta = vec![rat(1, 3), rat(5, 3), rat(10, 3), rat(14, 3)];
        let grid = SimplexGrid::new(ParameterSet::raw(4, 3, beta).unwrap());
        let p = GridPointX::new(vec![1, 1], 3).unwrap();
        assert_eq!(grid.shifted_index(&p, &[1, 0]), None);
        assert!(grid.shifted_index(&p, &[0, 1]).is_some());
        let origin = GridPointX::new(vec![0, 0], 3).unwrap();
        assert_eq!(grid.shifted_index(&origin, &[-1, 0]), None);
    }

    #[test]
    fn multi_indices_cover_vk() {
        let beta = vec![rat(1, 3), rat(5, 3), rat(10, 3), rat(14, 3)];
        let grid = SimplexGrid::new(ParameterSet::raw(4, 3, beta).unwrap());
        let ks = grid.multi_indices();
        assert_eq!(ks.len(), 10);
        assert!(ks.iter().all(|k| k.partial_sum(2) <= 3));
        let unique: std::collections::BTreeSet<_> = ks.iter().collect();
        assert_eq!(unique.len(), 10);
    }
}
