//! Symbolic shift operators on the simplex grid and their exact realization.

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{RacahError, Result};
use crate::expr::{EvalContext, Expr};
use crate::grid::{GridFunction, SimplexGrid};
use crate::matrix::OperatorMatrix;
use crate::params::{GridPointX, ParameterSet};
use crate::scalar::{rat, ExactScalar};

/// `b_i^s` in global numbering.
pub fn b_expr(i: usize, s: i8) -> Expr {
    let t = Expr::int(2) * Expr::x(i) + Expr::beta(i);
    match s {
        0 => (t.clone() + Expr::int(1)) * (t - Expr::int(1)),
        1 => (t.clone() + Expr::int(1)) * t,
        -1 => b_expr(i, 1).involution(i),
        _ => panic!("shift exponent must be -1, 0 or 1"),
    }
}

/// `B_i^{s,t}` in global numbering; involves `x_i, x_{i+1}, beta_i, beta_{i+1}`.
#[allow(non_snake_case)]
pub fn B_expr(i: usize, s: i8, t: i8) -> Expr {
    let (xi, xj, bi, bj) = (Expr::x(i), Expr::x(i + 1), Expr::beta(i), Expr::beta(i + 1));
    match (s, t) {
        (0, 0) => {
            xi.clone() * (xi + bi.clone())
                + xj.clone() * (xj + bj.clone())
                + Expr::constant(rat(1, 2)) * (bi + Expr::int(1)) * (bj - Expr::int(1))
        }
        (0, 1) => {
            (xj.clone() + xi.clone() + bj.clone()) * (xj - xi + bj - bi)
        }
        (1, 0) => (xj.clone() - xi.clone()) * (xj + xi + bj),
        (1, 1) => {
            let sum = xj + xi + bj;
            sum.clone() * (sum + Expr::int(1))
        }
        (-1, -1) => B_expr(i, 1, 1).involution(i + 1).involution(i),
        (-1, t) => B_expr(i, 1, t).involution(i),
        (s, -1) => B_expr(i, s, 1).involution(i + 1),
        _ => panic!("shift exponents must be -1, 0 or 1"),
    }
}

fn context<'a>(x: &GridPointX, params: &'a ParameterSet) -> EvalContext<'a> {
    EvalContext::new(x.coords(), params.big_n(), params.betas())
}

/// Evaluates `b_i^{nu_i}` at a grid point.
pub fn b_factor(i: usize, nu_i: i8, x: &GridPointX, params: &ParameterSet) -> Result<ExactScalar> {
    if i == 0 || i > params.dim() {
        return Err(RacahError::Range(format!("b_{i} needs 1 <= i <= {}", params.dim())));
    }
    b_expr(i, nu_i).eval(&context(x, params))
}

/// Evaluates `B_i^{s,t}` at a grid point.
#[allow(non_snake_case)]
pub fn B_factor(i: usize, s: i8, t: i8, x: &GridPointX, params: &ParameterSet) -> Result<ExactScalar> {
    if i + 1 >= params.n() {
        return Err(RacahError::Range(format!("B_{i} needs i <= {}", params.n() - 2)));
    }
    B_expr(i, s, t).eval(&context(x, params))
}

/// `kappa(x, beta) = (x + (beta+1)/2)(x + (beta-1)/2)` as an expression.
pub fn kappa_expr(x: Expr, beta: Expr) -> Expr {
    let half = Expr::constant(rat(1, 2));
    (x.clone() + half.clone() * (beta.clone() + Expr::int(1))) * (x + half * (beta - Expr::int(1)))
}

/// All of `{-1,0,1}^j` except zero, last coordinate varying fastest.
pub fn odometer(j: usize) -> Vec<Vec<i8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..j {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                [-1i8, 0, 1].into_iter().map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&s| s != 0));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftTerm {
    /// Shift over grid positions `1..=n-2`.
    pub nu: Vec<i8>,
    pub coefficient: Expr,
}

/// `sum_nu G_nu (E_nu - 1) + identity_part`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceOperator {
    dim: usize,
    terms: Vec<ShiftTerm>,
    identity_part: Expr,
}

impl DifferenceOperator {
    pub fn zero(dim: usize) -> Self {
        DifferenceOperator { dim, terms: Vec::new(), identity_part: Expr::zero() }
    }

    /// Multiplication by a function of the grid point.
    pub fn multiplication(dim: usize, factor: Expr) -> Self {
        DifferenceOperator { dim, terms: Vec::new(), identity_part: factor }
    }

    pub fn new(dim: usize, terms: Vec<ShiftTerm>, identity_part: Expr) -> Result<Self> {
        let mut op = Self::multiplication(dim, identity_part);
        for term in terms {
            if term.nu.len() != dim {
                return Err(RacahError::Dimension(format!(
                    "shift of length {} on a grid of dimension {dim}",
                    term.nu.len()
                )));
            }
            op.push_term(term.nu, term.coefficient);
        }
        Ok(op)
    }

    fn push_term(&mut self, nu: Vec<i8>, coefficient: Expr) {
        if nu.iter().all(|&s| s == 0) {
            return;
        }
        match self.terms.iter_mut().find(|t| t.nu == nu) {
            Some(t) => {
                let prev = std::mem::replace(&mut t.coefficient, Expr::zero());
                t.coefficient = prev + coefficient;
            }
            None => self.terms.push(ShiftTerm { nu, coefficient }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ShiftTerm] {
        &self.terms
    }

    pub fn identity_part(&self) -> &Expr {
        &self.identity_part
    }

    fn ensure_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(RacahError::Dimension(format!(
                "operators on grids of dimension {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_dim(other)?;
        let mut out = self.clone();
        out.identity_part = out.identity_part + other.identity_part.clone();
        for t in &other.terms {
            out.push_term(t.nu.clone(), t.coefficient.clone());
        }
        Ok(out)
    }

    /// Left multiplication by a function.
    pub fn scale(&self, factor: Expr) -> Self {
        DifferenceOperator {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| ShiftTerm { nu: t.nu.clone(), coefficient: factor.clone() * t.coefficient.clone() })
                .collect(),
            identity_part: factor * self.identity_part.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Expr::int(-1))
    }

    /// Coefficients `a_nu` of `sum_nu a_nu E_nu`, the zero shift first.
    fn shift_form(&self) -> Vec<(Vec<i8>, Expr)> {
        let mut diag = self.identity_part.clone();
        for t in &self.terms {
            diag = diag - t.coefficient.clone();
        }
        let mut out = vec![(vec![0; self.dim], diag)];
        out.extend(self.terms.iter().map(|t| (t.nu.clone(), t.coefficient.clone())));
        out
    }

    /// `self * other`, with `other` acting first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.ensure_dim(other)?;
        let mut grouped: Vec<(Vec<i8>, Expr)> = Vec::new();
        for (mu, a) in self.shift_form() {
            for (nu, b) in other.shift_form() {
                let shifted = b.map_leaves(&|leaf| match leaf {
                    Expr::X(p) if (1..=self.dim).contains(p) && mu[p - 1] != 0 => {
                        Some(Expr::X(*p) + Expr::int(mu[p - 1] as i64))
                    }
                    _ => None,
                });
                let total: Vec<i8> = mu.iter().zip(&nu).map(|(m, v)| m + v).collect();
                let product = a.clone() * shifted;
                match grouped.iter_mut().find(|(s, _)| *s == total) {
                    Some((_, c)) => {
                        let prev = std::mem::replace(c, Expr::zero());
                        *c = prev + product;
                    }
                    None => grouped.push((total, product)),
                }
            }
        }
        let identity = grouped
            .iter()
            .fold(Expr::zero(), |acc, (_, c)| acc + c.clone());
        let mut out = Self::multiplication(self.dim, identity);
        for (nu, c) in grouped {
            out.push_term(nu, c);
        }
        Ok(out)
    }

    fn relabel<F>(&self, offset: usize, leaf: F) -> Result<Self>
    where
        F: Fn(&Expr) -> Option<Expr>,
    {
        let n = self.dim + 2;
        let check = |e: &Expr| -> Result<()> {
            let (x, b) = e.max_indices();
            if x.is_some_and(|i| i + offset > n - 1) || b.is_some_and(|i| i + offset > n - 1) {
                return Err(RacahError::Range(format!("shifting by {offset} leaves the index range 0..{}", n - 1)));
            }
            Ok(())
        };
        check(&self.identity_part)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            check(&t.coefficient)?;
            if t.nu[self.dim - offset..].iter().any(|&s| s != 0) {
                return Err(RacahError::Range(format!(
                    "shift {:?} cannot move {offset} position(s) up",
                    t.nu
                )));
            }
            let mut nu = vec![0; offset];
            nu.extend_from_slice(&t.nu[..self.dim - offset]);
            terms.push(ShiftTerm { nu, coefficient: t.coefficient.map_leaves(&leaf) });
        }
        Ok(DifferenceOperator { dim: self.dim, terms, identity_part: self.identity_part.map_leaves(&leaf) })
    }

    /// `x_i -> x_{i+1}`, `beta_i -> beta_{i+1}`, `E_{x_i} -> E_{x_{i+1}}`.
    pub fn sigma_shift(&self) -> Result<Self> {
        if self.dim == 0 {
            return Err(RacahError::Range("no room to shift".into()));
        }
        self.relabel(1, |leaf| match leaf {
            Expr::X(i) => Some(Expr::X(i + 1)),
            Expr::Beta(i) => Some(Expr::Beta(i + 1)),
            _ => None,
        })
    }

    pub fn sigma_power(&self, m: usize) -> Result<Self> {
        (0..m).try_fold(self.clone(), |op, _| op.sigma_shift())
    }

    /// `x_t -> x_{t+i} - x_i`, `beta_t -> beta_{t+i} + 2 x_i`, shifts moved up by `i`.
    pub fn substitute_offset(&self, i: usize) -> Result<Self> {
        if i > self.dim {
            return Err(RacahError::Range(format!("offset {i} exceeds dimension {}", self.dim)));
        }
        self.relabel(i, move |leaf| match leaf {
            Expr::X(t) => Some(Expr::X(t + i) - Expr::X(i)),
            Expr::Beta(t) => Some(Expr::Beta(t + i) + Expr::int(2) * Expr::X(i)),
            _ => None,
        })
    }

    fn ensure_grid(&self, grid: &SimplexGrid) -> Result<()> {
        if grid.params().dim() != self.dim {
            return Err(RacahError::Dimension(format!(
                "operator of dimension {} on a grid of dimension {}",
                self.dim,
                grid.params().dim()
            )));
        }
        Ok(())
    }

    fn boundary_error(point: &GridPointX, nu: &[i8], c: &ExactScalar) -> RacahError {
        RacahError::Boundary(format!(
            "shift {nu:?} from {:?} leaves the simplex with coefficient {c}",
            point.coords()
        ))
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        let grid = f.grid();
        self.ensure_grid(grid)?;
        let params = grid.params();
        let values = f.values();
        let out = grid
            .points()
            .par_iter()
            .enumerate()
            .map(|(r, point)| {
                let ctx = context(point, params);
                let mut acc = self.identity_part.eval(&ctx)? * &values[r];
                for t in &self.terms {
                    let c = t.coefficient.eval(&ctx)?;
                    if c.is_zero() {
                        continue;
                    }
                    let col = grid
                        .shifted_index(point, &t.nu)
                        .ok_or_else(|| Self::boundary_error(point, &t.nu, &c))?;
                    acc += c * (&values[col] - &values[r]);
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid.clone(), out)
    }

    pub fn realize(&self, grid: &Arc<SimplexGrid>) -> Result<OperatorMatrix> {
        self.ensure_grid(grid)?;
        let params = grid.params();
        let rows = grid
            .points()
            .par_iter()
            .enumerate()
            .map(|(r, point)| {
                let ctx = context(point, params);
                let mut diag = self.identity_part.eval(&ctx)?;
                let mut row = Vec::with_capacity(self.terms.len() + 1);
                for t in &self.terms {
                    let c = t.coefficient.eval(&ctx)?;
                    if c.is_zero() {
                        continue;
                    }
                    let col = grid
                        .shifted_index(point, &t.nu)
                        .ok_or_else(|| Self::boundary_error(point, &t.nu, &c))?;
                    diag -= &c;
                    row.push((col, c));
                }
                row.push((r, diag));
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorMatrix::from_rows(grid.clone(), rows)
    }
}

/// `G_nu` for the operator acting on positions `offset+1..=offset+j`.
pub fn g_coefficient(nu: &[i8], offset: usize) -> Expr {
    let j = nu.len();
    let padded: Vec<i8> = std::iter::once(0).chain(nu.iter().copied()).chain(std::iter::once(0)).collect();
    let zeros = nu.iter().filter(|&&s| s == 0).count() as u32;
    let mut numerator = vec![Expr::constant(ExactScalar::from_integer((1u64 << zeros).into()))];
    numerator.extend((0..=j).map(|i| B_expr(offset + i, padded[i], padded[i + 1])));
    let denominator: Vec<Expr> = (1..=j).map(|i| b_expr(offset + i, padded[i])).collect();
    Expr::Product(numerator) / Expr::Product(denominator)
}

/// The Racah operator `L_j(x_offset, ..., x_{offset+j+1}, beta_offset, ..., E_{x_{offset+1}}, ...)`.
pub fn build_racah_operator(j: usize, offset: usize, params: &ParameterSet) -> Result<DifferenceOperator> {
    let dim = params.dim();
    if offset + j + 1 > params.n() - 1 {
        return Err(RacahError::Range(format!(
            "L_{j} with offset {offset} needs x_{} but n - 1 = {}",
            offset + j + 1,
            params.n() - 1
        )));
    }
    let terms = odometer(j)
        .into_iter()
        .map(|local| {
            let coefficient = g_coefficient(&local, offset);
            let mut nu = vec![0; dim];
            nu[offset..offset + j].copy_from_slice(&local);
            ShiftTerm { nu, coefficient }
        })
        .collect();
    DifferenceOperator::new(dim, terms, Expr::zero())
}

/// The two-term operator written out in closed form for `n = 3`.
pub fn rank_one_operator(params: &ParameterSet) -> Result<DifferenceOperator> {
    if params.n() != 3 {
        return Err(RacahError::Range("the closed-form rank-one operator needs n = 3".into()));
    }
    let (x, n) = (Expr::x(1), Expr::x(2));
    let (b0, b1, b2) = (Expr::beta(0), Expr::beta(1), Expr::beta(2));
    let two_x_b1 = Expr::int(2) * x.clone() + b1.clone();
    let up = (x.clone() + b1.clone() - b0.clone())
        * (x.clone() + b1.clone())
        * (n.clone() + x.clone() + b2.clone())
        * (n.clone() - x.clone())
        / (two_x_b1.clone() * (two_x_b1.clone() + Expr::int(1)));
    let down = (x.clone() + b0)
        * x.clone()
        * (n.clone() - x.clone() - b1.clone() + b2)
        * (n + x + b1)
        / (two_x_b1.clone() * (two_x_b1 - Expr::int(1)));
    DifferenceOperator::new(
        1,
        vec![ShiftTerm { nu: vec![1], coefficient: up }, ShiftTerm { nu: vec![-1], coefficient: down }],
        Expr::zero(),
    )
}

/// Multiplication by `value`.
pub fn scalar_operator(dim: usize, value: Expr) -> DifferenceOperator {
    DifferenceOperator::multiplication(dim, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{kappa, racah_univariate};
    use crate::scalar::int;

    fn params(n: usize, big_n: u32) -> ParameterSet {
        let beta = [rat(1, 3), rat(5, 3), rat(10, 3), rat(14, 3), rat(19, 3), rat(25, 3)];
        ParameterSet::new(n, big_n, beta[..n].to_vec()).unwrap()
    }

    #[test]
    fn small_factor_values() {
        let p = ParameterSet::raw(3, 4, vec![int(0), rat(1, 2), int(3)]).unwrap();
        let x = GridPointX::new(vec![1], 4).unwrap();
        assert_eq!(b_factor(1, 1, &x, &p).unwrap(), rat(35, 4));
        assert_eq!(b_factor(1, -1, &x, &p).unwrap(), rat(15, 4));
        let p = ParameterSet::raw(3, 4, vec![rat(1, 3), rat(5, 3), int(3)]).unwrap();
        let x = GridPointX::new(vec![2], 4).unwrap();
        assert_eq!(B_factor(0, 0, 0, &x, &p).unwrap(), rat(70, 9));
        let y = GridPointX::new(vec![4], 4).unwrap();
        assert_eq!(B_factor(1, 1, 0, &y, &p).unwrap(), int(0));
    }

    #[test]
    fn b_zero_vanishes_at_unit_argument() {
        let p = ParameterSet::raw(3, 4, vec![int(0), int(-1), int(0)]).unwrap();
        let x = GridPointX::new(vec![1], 4).unwrap();
        assert_eq!(b_factor(1, 0, &x, &p).unwrap(), int(0));
    }

    #[test]
    fn odometer_order_and_size() {
        assert_eq!(odometer(0).len(), 0);
        assert_eq!(odometer(1), vec![vec![-1], vec![1]]);
        let two = odometer(2);
        assert_eq!(two.len(), 8);
        assert_eq!(two[0], vec![-1, -1]);
        assert_eq!(two[1], vec![-1, 0]);
        assert_eq!(two[7], vec![1, 1]);
        assert_eq!(odometer(3).len(), 26);
    }

    #[test]
    fn zero_rank_operator_is_zero() {
        let p = params(4, 3);
        let op = build_racah_operator(0, 1, &p).unwrap();
        assert!(op.terms().is_empty());
        assert!(op.realize(&SimplexGrid::new(p)).unwrap().is_zero());
    }

    #[test]
    fn range_is_checked() {
        let p = params(4, 3);
        assert!(matches!(build_racah_operator(2, 1, &p), Err(RacahError::Range(_))));
        assert!(build_racah_operator(2, 0, &p).is_ok());
    }

    #[test]
    fn rank_one_matches_closed_form() {
        for big_n in [0u32, 1, 3, 6] {
            let p = params(3, big_n);
            let grid = SimplexGrid::new(p.clone());
            let general = build_racah_operator(1, 0, &p).unwrap().realize(&grid).unwrap();
            let explicit = rank_one_operator(&p).unwrap().realize(&grid).unwrap();
            assert_eq!(general, explicit);
        }
    }

    #[test]
    fn rank_one_matrix_is_tridiagonal() {
        let p = params(3, 3);
        let m = build_racah_operator(1, 0, &p).unwrap().realize(&SimplexGrid::new(p)).unwrap();
        for (r, row) in m.rows().iter().enumerate() {
            assert!(row.iter().all(|(c, _)| c.abs_diff(r) <= 1));
        }
        // First row: only the upward coefficient, G = (b1-b0)b1(N+b2)N/(b1(b1+1)).
        let (b0, b1, b2) = (rat(1, 3), rat(5, 3), rat(10, 3));
        let up = (&b1 - &b0) * &b1 * (int(3) + &b2) * int(3) / (&b1 * (&b1 + int(1)));
        assert_eq!(m.entry(0, 1), up);
        assert_eq!(m.entry(0, 0), -up);
    }

    #[test]
    fn apply_agrees_with_matrix() {
        let p = params(4, 3);
        let grid = SimplexGrid::new(p.clone());
        let op = build_racah_operator(2, 0, &p).unwrap();
        let m = op.realize(&grid).unwrap();
        let f = GridFunction::new(grid.clone(), (0..grid.len()).map(|i| rat(i as i64 * i as i64 - 3, 7)).collect()).unwrap();
        assert_eq!(op.apply(&f).unwrap().values(), m.mul_vec(f.values()).unwrap().as_slice());
        let ones = GridFunction::new(grid.clone(), vec![int(1); grid.len()]).unwrap();
        assert!(op.apply(&ones).unwrap().values().iter().all(Zero::is_zero));
    }

    #[test]
    fn univariate_eigenvectors() {
        let big_n = 5;
        let p = params(3, big_n);
        let grid = SimplexGrid::new(p.clone());
        let op = build_racah_operator(1, 0, &p).unwrap();
        let b = p.betas();
        for k in 0..=big_n {
            let values = (0..=big_n)
                .map(|x| {
                    racah_univariate(
                        k,
                        &(&b[1] - &b[0] - int(1)),
                        &(&b[2] - &b[1] - int(1)),
                        &int(-(big_n as i64) - 1),
                        &(&b[1] + int(big_n as i64)),
                        &int(x as i64),
                    )
                })
                .collect();
            let f = GridFunction::new(grid.clone(), values).unwrap();
            let lf = op.apply(&f).unwrap();
            let lambda = -int(k as i64) * (int(k as i64) - int(1) + &b[2] - &b[0]);
            let expected: Vec<_> = f.values().iter().map(|v| v * &lambda).collect();
            assert_eq!(lf.values(), expected.as_slice());
        }
        assert_eq!(kappa(&int(0), &int(1)), int(0));
    }

    #[test]
    fn composition_is_a_homomorphism() {
        let p = params(4, 3);
        let grid = SimplexGrid::new(p.clone());
        let l1 = build_racah_operator(1, 0, &p).unwrap();
        let l2 = build_racah_operator(2, 0, &p).unwrap();
        let symbolic = l1.compose(&l2).unwrap().realize(&grid).unwrap();
        let numeric = l1.realize(&grid).unwrap().compose(&l2.realize(&grid).unwrap()).unwrap();
        assert_eq!(symbolic, numeric);
    }

    #[test]
    fn sigma_relabels_indices() {
        let p = params(4, 3);
        let grid = SimplexGrid::new(p.clone());
        let k1 = scalar_operator(2, kappa_expr(Expr::x(1), Expr::beta(1)));
        let shifted = k1.sigma_shift().unwrap();
        let direct = scalar_operator(2, kappa_expr(Expr::x(2), Expr::beta(2)));
        assert_eq!(shifted.realize(&grid).unwrap(), direct.realize(&grid).unwrap());
        let l = build_racah_operator(1, 0, &p).unwrap();
        assert_eq!(
            l.sigma_shift().unwrap().realize(&grid).unwrap(),
            build_racah_operator(1, 1, &p).unwrap().realize(&grid).unwrap()
        );
        assert!(matches!(l.sigma_power(2), Err(RacahError::Range(_))));
    }

    #[test]
    fn offset_matches_substitution() {
        let p = params(5, 3);
        let grid = SimplexGrid::new(p.clone());
        for (j, i) in [(1, 1), (1, 2), (2, 1)] {
            let direct = build_racah_operator(j, i, &p).unwrap().realize(&grid).unwrap();
            let base = build_racah_operator(j, 0, &p).unwrap();
            let substituted = base.substitute_offset(i).unwrap().realize(&grid).unwrap();
            assert_eq!(direct, substituted);
        }
    }

    #[test]
    fn boundary_shift_with_nonzero_coefficient_is_an_error() {
        let p = params(3, 2);
        let grid = SimplexGrid::new(p);
        let op = DifferenceOperator::new(1, vec![ShiftTerm { nu: vec![1], coefficient: Expr::int(1) }], Expr::zero()).unwrap();
        assert!(matches!(op.realize(&grid), Err(RacahError::Boundary(_))));
    }
}
