//! Exact sparse matrices realizing operators on a simplex grid.

use std::collections::BTreeMap;
use std::ops;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{RacahError, Result};
use crate::grid::SimplexGrid;
use crate::scalar::{format_scalar, parse_scalar, ExactScalar};

type Row = Vec<(usize, ExactScalar)>;

/// Row-sparse exact matrix. Rows are sorted by column and never store zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    grid: Arc<SimplexGrid>,
    rows: Vec<Row>,
}

fn normalize_row(entries: BTreeMap<usize, ExactScalar>) -> Row {
    entries.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl OperatorMatrix {
    pub fn from_rows(grid: Arc<SimplexGrid>, rows: Vec<Vec<(usize, ExactScalar)>>) -> Result<Self> {
        if rows.len() != grid.len() {
            return Err(RacahError::Dimension(format!(
                "{} rows for a grid of {} points",
                rows.len(),
                grid.len()
            )));
        }
        let size = grid.len();
        let mut normalized = Vec::with_capacity(size);
        for row in rows {
            let mut acc = BTreeMap::new();
            for (c, v) in row {
                if c >= size {
                    return Err(RacahError::Dimension(format!("column {c} out of range")));
                }
                *acc.entry(c).or_insert_with(ExactScalar::zero) += v;
            }
            normalized.push(normalize_row(acc));
        }
        Ok(OperatorMatrix { grid, rows: normalized })
    }

    pub fn zero(grid: Arc<SimplexGrid>) -> Self {
        let rows = vec![Vec::new(); grid.len()];
        OperatorMatrix { grid, rows }
    }

    pub fn scalar(grid: Arc<SimplexGrid>, value: &ExactScalar) -> Self {
        let rows = (0..grid.len())
            .map(|r| if value.is_zero() { Vec::new() } else { vec![(r, value.clone())] })
            .collect();
        OperatorMatrix { grid, rows }
    }

    pub fn identity(grid: Arc<SimplexGrid>) -> Self {
        Self::scalar(grid, &ExactScalar::one())
    }

    pub fn diagonal(grid: Arc<SimplexGrid>, values: Vec<ExactScalar>) -> Result<Self> {
        let rows = values.into_iter().enumerate().map(|(r, v)| vec![(r, v)]).collect();
        Self::from_rows(grid, rows)
    }

    pub fn grid(&self) -> &Arc<SimplexGrid> {
        &self.grid
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, r: usize, c: usize) -> ExactScalar {
        match self.rows[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(pos) => self.rows[r][pos].1.clone(),
            Err(_) => ExactScalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// First nonzero entry in row-major order, used as a failure witness.
    pub fn first_nonzero(&self) -> Option<(usize, usize, ExactScalar)> {
        self.rows
            .iter()
            .enumerate()
            .find_map(|(r, row)| row.first().map(|(c, v)| (r, *c, v.clone())))
    }

    /// The scalar `c` if the matrix equals `c * Id`.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        let first = match self.rows.first()?.as_slice() {
            [] => ExactScalar::zero(),
            [(0, v)] => v.clone(),
            _ => return None,
        };
        let ok = self.rows.iter().enumerate().all(|(r, row)| match row.as_slice() {
            [] => first.is_zero(),
            [(c, v)] => *c == r && *v == first,
            _ => false,
        });
        ok.then_some(first)
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().all(|(c, _)| *c == r))
    }

    pub fn diagonal_entries(&self) -> Vec<ExactScalar> {
        (0..self.size()).map(|r| self.entry(r, r)).collect()
    }

    fn combine(&self, other: &Self, sign: &ExactScalar) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let rows = self
            .rows
            .par_iter()
            .zip(other.rows.par_iter())
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, ExactScalar> = a.iter().cloned().collect();
                for (c, v) in b {
                    *acc.entry(*c).or_insert_with(ExactScalar::zero) += v * sign;
                }
                normalize_row(acc)
            })
            .collect();
        Ok(OperatorMatrix { grid: self.grid.clone(), rows })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &ExactScalar::one())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-ExactScalar::one())
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        if factor.is_zero() {
            return Self::zero(self.grid.clone());
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v * factor)).collect())
            .collect();
        OperatorMatrix { grid: self.grid.clone(), rows }
    }

    /// Matrix product `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let rows = self
            .rows
            .par_iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, ExactScalar> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.rows[*k] {
                        *acc.entry(*c).or_insert_with(ExactScalar::zero) += a * b;
                    }
                }
                normalize_row(acc)
            })
            .collect();
        Ok(OperatorMatrix { grid: self.grid.clone(), rows })
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.try_sub(&other.compose(self)?)
    }

    /// `{self, other} = self*other + other*self`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.try_add(&other.compose(self)?)
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        if v.len() != self.size() {
            return Err(RacahError::Dimension(format!(
                "vector of length {} for a {}x{} matrix",
                v.len(),
                self.size(),
                self.size()
            )));
        }
        Ok(self
            .rows
            .par_iter()
            .map(|row| {
                row.iter()
                    .fold(ExactScalar::zero(), |acc, (c, a)| acc + a * &v[*c])
            })
            .collect())
    }

    pub fn to_dense(&self) -> Vec<Vec<ExactScalar>> {
        let n = self.size();
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![ExactScalar::zero(); n];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    /// Coefficients of `det(t I - M)`, lowest degree first.
    pub fn characteristic_polynomial(&self) -> Vec<ExactScalar> {
        characteristic_polynomial(self.to_dense())
    }

    pub fn to_json(&self) -> Value {
        let params = self.grid.params();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(row.iter().map(|(c, v)| json!([c, format_scalar(v)])).collect())
            })
            .collect();
        json!({
            "grid": {
                "n": params.n(),
                "N": params.big_n(),
                "beta": params.betas().iter().map(format_scalar).collect::<Vec<_>>(),
            },
            "rows": rows,
        })
    }

    /// Reads the `rows` array of a serialized matrix onto `grid`.
    pub fn from_json(grid: Arc<SimplexGrid>, doc: &Value) -> Result<Self> {
        let bad = |what: &str| RacahError::Parse(format!("malformed operator matrix: {what}"));
        let rows = doc.get("rows").and_then(Value::as_array).ok_or_else(|| bad("rows"))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let entries = row.as_array().ok_or_else(|| bad("row"))?;
            let mut out = Vec::with_capacity(entries.len());
            for e in entries {
                let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("entry"))?;
                let c = pair[0].as_u64().ok_or_else(|| bad("column"))? as usize;
                let v = parse_scalar(pair[1].as_str().ok_or_else(|| bad("value"))?)?;
                out.push((c, v));
            }
            parsed.push(out);
        }
        Self::from_rows(grid, parsed)
    }
}

/// Characteristic polynomial via exact similarity reduction to upper Hessenberg
/// form followed by the Hessenberg determinant recurrence.
pub fn characteristic_polynomial(mut h: Vec<Vec<ExactScalar>>) -> Vec<ExactScalar> {
    let n = h.len();
    for k in 0..n.saturating_sub(2) {
        let Some(pivot) = (k + 1..n).find(|&i| !h[i][k].is_zero()) else {
            continue;
        };
        if pivot != k + 1 {
            h.swap(pivot, k + 1);
            for row in h.iter_mut() {
                row.swap(pivot, k + 1);
            }
        }
        for r in k + 2..n {
            if h[r][k].is_zero() {
                continue;
            }
            let m = &h[r][k] / &h[k + 1][k];
            for c in 0..n {
                let delta = &m * &h[k + 1][c];
                h[r][c] -= delta;
            }
            for row in h.iter_mut() {
                let delta = &m * &row[r];
                row[k + 1] += delta;
            }
        }
    }

    // polys[k] = charpoly of the leading k x k block.
    let mut polys: Vec<Vec<ExactScalar>> = vec![vec![ExactScalar::one()]];
    for k in 1..=n {
        let hk = &h[k - 1][k - 1];
        let prev = &polys[k - 1];
        let mut next = vec![ExactScalar::zero(); k + 1];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= hk * c;
        }
        let mut sub_product = ExactScalar::one();
        for i in (1..k).rev() {
            sub_product *= &h[i][i - 1];
            if sub_product.is_zero() {
                break;
            }
            let factor = &h[i - 1][k - 1] * &sub_product;
            if factor.is_zero() {
                continue;
            }
            for (d, c) in polys[i - 1].iter().enumerate() {
                next[d] -= &factor * c;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap_or_else(|| vec![ExactScalar::one()])
}

/// Divides `poly` (lowest degree first) by `(t - root)`; `None` if the remainder is nonzero.
pub fn divide_by_root(poly: &[ExactScalar], root: &ExactScalar) -> Option<Vec<ExactScalar>> {
    if poly.len() < 2 {
        return None;
    }
    let deg = poly.len() - 1;
    let mut quotient = vec![ExactScalar::zero(); deg];
    let mut carry = ExactScalar::zero();
    for d in (1..=deg).rev() {
        carry = &poly[d] + carry * root;
        quotient[d - 1] = carry.clone();
    }
    let remainder = &poly[0] + carry * root;
    remainder.is_zero().then_some(quotient)
}

impl ops::Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.try_add(rhs).expect("operands must share a grid")
    }
}

impl ops::Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.try_sub(rhs).expect("operands must share a grid")
    }
}

impl ops::Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.compose(rhs).expect("operands must share a grid")
    }
}

impl ops::Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale(&-ExactScalar::one())
    }
}
