//! Weights of the multivariate Racah polynomials, the normalized connection
//! coefficients, and exact orthogonality checks.
//!
//! A weight is a rational number times a product of powers of `Gamma(b)` with
//! `0 < b < 1`. On a fixed grid the Gamma part of every `omega(x)` is the same,
//! and likewise for `mu(k)`, so all exact statements are made on rational parts
//! and the Gamma part only enters the final float normalization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Div, Mul};
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{GeneratorTable, LabelSet};
use crate::error::{RacahError, Result};
use crate::grid::SimplexGrid;
use crate::params::{GridPointX, MultiIndexK, ParameterSet};
use crate::polynomials::{kappa, racah_grid_vector};
use crate::report::{RelationCheck, Status};
use crate::scalar::{factorial, format_scalar, int, ln_abs, log_gamma_float, pochhammer, serde_scalar, to_f64, ExactScalar, GammaBase};

/// Tolerance of the float normalization `constant * Gamma-part = 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// `rational_part * prod Gamma(base)^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightValue {
    #[serde(with = "serde_scalar")]
    rational_part: ExactScalar,
    gamma_exponents: BTreeMap<GammaBase, i64>,
}

impl WeightValue {
    pub fn rational(value: ExactScalar) -> Self {
        WeightValue { rational_part: value, gamma_exponents: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::rational(ExactScalar::one())
    }

    /// `Gamma(a)`, with the integer part of `a` moved into the rational part.
    pub fn gamma(a: &ExactScalar) -> Result<Self> {
        if a.is_integer() {
            if !a.is_positive() {
                return Err(RacahError::Pole(format!("Gamma({a})")));
            }
            let m = a.to_integer().to_u32().ok_or_else(|| {
                RacahError::Range(format!("Gamma({a}) is too large to expand"))
            })?;
            return Ok(Self::rational(factorial(m - 1)));
        }
        let floor = a.floor();
        let base = a - &floor;
        let m = floor
            .to_integer()
            .to_i64()
            .ok_or_else(|| RacahError::Range(format!("Gamma({a}) is too large to expand")))?;
        let rational_part = if m >= 0 {
            pochhammer(&base, m as u32)
        } else {
            pochhammer(a, (-m) as u32).recip()
        };
        let mut gamma_exponents = BTreeMap::new();
        gamma_exponents.insert(GammaBase::new(base)?, 1);
        Ok(WeightValue { rational_part, gamma_exponents })
    }

    pub fn rational_part(&self) -> &ExactScalar {
        &self.rational_part
    }

    pub fn gamma_exponents(&self) -> &BTreeMap<GammaBase, i64> {
        &self.gamma_exponents
    }

    fn combine(mut self, other: &WeightValue, sign: i64) -> Self {
        for (base, e) in &other.gamma_exponents {
            let entry = self.gamma_exponents.entry(base.clone()).or_insert(0);
            *entry += sign * e;
            if *entry == 0 {
                self.gamma_exponents.remove(base);
            }
        }
        self
    }

    /// `ln prod Gamma(base)^exponent`.
    pub fn ln_gamma_part(&self) -> Result<f64> {
        self.gamma_exponents.iter().try_fold(0.0, |acc, (base, e)| {
            Ok(acc + *e as f64 * log_gamma_float(to_f64(base.value()))?)
        })
    }

    /// Natural logarithm of the value; the rational part must be positive.
    pub fn ln(&self) -> Result<f64> {
        if !self.rational_part.is_positive() {
            return Err(RacahError::Sign(format!(
                "weight has rational part {}",
                format_scalar(&self.rational_part)
            )));
        }
        Ok(ln_abs(&self.rational_part)? + self.ln_gamma_part()?)
    }

    pub fn to_f64(&self) -> Result<f64> {
        Ok(self.ln()?.exp())
    }
}

impl Mul<&WeightValue> for WeightValue {
    type Output = WeightValue;
    fn mul(mut self, rhs: &WeightValue) -> WeightValue {
        self.rational_part *= &rhs.rational_part;
        self.combine(rhs, 1)
    }
}

impl Div<&WeightValue> for WeightValue {
    type Output = WeightValue;
    fn div(mut self, rhs: &WeightValue) -> WeightValue {
        self.rational_part /= &rhs.rational_part;
        self.combine(rhs, -1)
    }
}

fn gamma(a: ExactScalar) -> Result<WeightValue> {
    WeightValue::gamma(&a)
}

/// `omega_p(x)` with `x_0 = 0` and `x_{p+1} = N`.
pub fn weight_omega(p: usize, x: &GridPointX, params: &ParameterSet) -> Result<WeightValue> {
    if p == 0 || p > params.dim() {
        return Err(RacahError::Range(format!("p = {p} must lie in 1..={}", params.dim())));
    }
    if x.coords().len() != params.dim() {
        return Err(RacahError::Dimension(format!("x has {} entries, expected {}", x.coords().len(), params.dim())));
    }
    let big_n = params.big_n();
    let xs: Vec<u32> = (0..=p + 1)
        .map(|i| if i == p + 1 { big_n } else { x.coord(i, big_n) })
        .collect();
    let b = |i: usize| params.beta(i as isize);
    let mut w = WeightValue::one();
    for j in 0..=p {
        let (lo, hi) = (int(xs[j] as i64), int(xs[j + 1] as i64));
        if xs[j + 1] < xs[j] {
            return Err(RacahError::Range(format!("x_{} < x_{j}", j + 1)));
        }
        w = w * &gamma(b(j + 1) + &hi + &lo)?;
        w = w * &gamma(b(j + 1) - b(j) + &hi - &lo)?;
        w = w / &gamma(b(j) + &hi + int(1) + &lo)?;
        w = w / &WeightValue::rational(factorial(xs[j + 1] - xs[j]));
    }
    for (j, &xj) in xs.iter().enumerate().take(p + 1).skip(1) {
        w = w * &WeightValue::rational(b(j) + int(2 * xj as i64));
    }
    Ok(w)
}

/// `mu_p(k)`, the dual weight.
pub fn weight_mu(p: usize, k: &MultiIndexK, params: &ParameterSet) -> Result<WeightValue> {
    if p == 0 || p > params.dim() || p > k.len() {
        return Err(RacahError::Range(format!("p = {p} must lie in 1..={}", params.dim())));
    }
    let big_n = params.big_n();
    let kp = k.partial_sum(p);
    if kp > big_n {
        return Err(RacahError::Range(format!("|k|_{p} = {kp} exceeds N = {big_n}")));
    }
    let b = |i: usize| params.beta(i as isize);
    let b0 = b(0);
    let mut w = WeightValue::one();
    for j in 1..=p {
        let kj = k.entries()[j - 1];
        let prior = int(2 * k.partial_sum(j - 1) as i64);
        let kj_s = int(kj as i64);
        w = w * &gamma(&prior + &kj_s + b(j + 1) - &b0 - int(1))?;
        w = w * &WeightValue::rational(int(2 * k.partial_sum(j) as i64) + b(j + 1) - &b0 - int(1));
        w = w / &gamma(&kj_s + b(j + 1) - b(j))?;
        w = w / &gamma(&prior + &kj_s + b(j) - &b0)?;
        w = w / &WeightValue::rational(factorial(kj));
    }
    let (n_s, kp_s) = (int(big_n as i64), int(kp as i64));
    w = w * &gamma(&b0 + &n_s + int(1) - &kp_s)?;
    w = w * &WeightValue::rational(factorial(big_n - kp));
    w = w / &gamma(b(p + 1) - &b0 + &n_s + &kp_s)?;
    w = w / &gamma(b(p + 1) + &n_s + &kp_s)?;
    Ok(w)
}

fn shared_gamma_part(weights: &[WeightValue], what: &str) -> Result<BTreeMap<GammaBase, i64>> {
    let first = weights
        .first()
        .map(|w| w.gamma_exponents.clone())
        .unwrap_or_default();
    if let Some(pos) = weights.iter().position(|w| w.gamma_exponents != first) {
        return Err(RacahError::Structure(format!(
            "the Gamma part of {what} changes at index {pos}"
        )));
    }
    Ok(first)
}

/// Normalized connection coefficients `sqrt(omega(x) mu(k)) R(k; x)`:
/// one row per `k`, one column per `x`, both in grid order.
pub struct ConnectionMatrix {
    grid: Arc<SimplexGrid>,
    values: Vec<Vec<f64>>,
    /// `omega(x) mu(k) R(k; x)^2` without the Gamma part.
    exact_squares: Vec<Vec<ExactScalar>>,
}

impl ConnectionMatrix {
    pub fn grid(&self) -> &Arc<SimplexGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn exact_squares(&self) -> &[Vec<ExactScalar>] {
        &self.exact_squares
    }

    /// Largest entry of `|M M^T - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let rows = &self.values;
        (0..rows.len())
            .into_par_iter()
            .map(|a| {
                (0..rows.len())
                    .map(|b| {
                        let dot: f64 = rows[a].iter().zip(&rows[b]).map(|(u, v)| u * v).sum();
                        (dot - if a == b { 1.0 } else { 0.0 }).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Header of `x` labels, then one row per `k`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let label = |v: &[u32]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::from("k\\x");
        for point in self.grid.points() {
            let _ = write!(out, ",{}", label(point.coords()));
        }
        out.push('\n');
        for (k, row) in self.grid.multi_indices().iter().zip(&self.values) {
            out.push_str(&label(k.entries()));
            for v in row {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Connection coefficients with the positive square root of the weights.
pub fn connection_matrix(params: &ParameterSet) -> Result<ConnectionMatrix> {
    params.check_generic()?;
    let grid = SimplexGrid::new(params.clone());
    let p = params.dim();
    let omegas = grid
        .points()
        .par_iter()
        .map(|x| weight_omega(p, x, params))
        .collect::<Result<Vec<_>>>()?;
    let ks = grid.multi_indices();
    let mus = ks.par_iter().map(|k| weight_mu(p, k, params)).collect::<Result<Vec<_>>>()?;
    let ln_omega = omegas.iter().map(WeightValue::ln).collect::<Result<Vec<_>>>()?;
    let ln_mu = mus.iter().map(WeightValue::ln).collect::<Result<Vec<_>>>()?;

    let rows = ks
        .par_iter()
        .zip(mus.par_iter().zip(ln_mu.par_iter()))
        .map(|(k, (mu, lm))| -> Result<(Vec<f64>, Vec<ExactScalar>)> {
            let r = racah_grid_vector(k, &grid)?;
            let mut values = Vec::with_capacity(r.len());
            let mut squares = Vec::with_capacity(r.len());
            for ((rv, omega), lo) in r.iter().zip(&omegas).zip(&ln_omega) {
                squares.push(omega.rational_part() * mu.rational_part() * rv * rv);
                if rv.is_zero() {
                    values.push(0.0);
                    continue;
                }
                let magnitude = (0.5 * (lo + lm) + ln_abs(rv)?).exp();
                values.push(if rv.is_negative() { -magnitude } else { magnitude });
            }
            Ok((values, squares))
        })
        .collect::<Result<Vec<_>>>()?;
    let (values, exact_squares) = rows.into_iter().unzip();
    Ok(ConnectionMatrix { grid, values, exact_squares })
}

/// Outcome of the exact Gram computation.
#[derive(Clone, Debug)]
pub struct GramSummary {
    /// `sum_x omega(x) mu(k) R(k; x)^2` without Gamma parts; the same for all `k`.
    pub diagonal_constant: Option<ExactScalar>,
    /// `|constant * Gamma-part - 1|`.
    pub normalization_error: Option<f64>,
    pub checks: Vec<RelationCheck>,
}

/// Exact Gram matrix of the polynomials against `omega`, normalized by `mu`.
pub fn verify_orthogonality_exact(params: &ParameterSet) -> Result<GramSummary> {
    let grid = SimplexGrid::new(params.clone());
    let p = params.dim();
    let omegas = grid
        .points()
        .par_iter()
        .map(|x| weight_omega(p, x, params))
        .collect::<Result<Vec<_>>>()?;
    let ks = grid.multi_indices();
    let mus = ks.par_iter().map(|k| weight_mu(p, k, params)).collect::<Result<Vec<_>>>()?;
    let omega_gamma = WeightValue { rational_part: ExactScalar::one(), gamma_exponents: shared_gamma_part(&omegas, "omega")? };
    let mu_gamma = WeightValue { rational_part: ExactScalar::one(), gamma_exponents: shared_gamma_part(&mus, "mu")? };

    let vectors = ks.par_iter().map(|k| racah_grid_vector(k, &grid)).collect::<Result<Vec<_>>>()?;
    let weighted: Vec<Vec<ExactScalar>> = vectors
        .par_iter()
        .map(|v| v.iter().zip(&omegas).map(|(r, w)| r * w.rational_part()).collect())
        .collect();
    let dot = |a: &[ExactScalar], b: &[ExactScalar]| {
        a.iter().zip(b).fold(ExactScalar::zero(), |acc, (x, y)| acc + x * y)
    };

    let size = ks.len();
    let off_diagonal: Vec<(usize, usize)> = (0..size)
        .flat_map(|a| (a + 1..size).map(move |b| (a, b)))
        .collect();
    let bad_pair = off_diagonal
        .par_iter()
        .find_first(|&&(a, b)| !dot(&weighted[a], &vectors[b]).is_zero());
    let operands = vec![format!("n={}", params.n()), format!("N={}", params.big_n())];
    let mut checks = vec![RelationCheck::from_bool(
        "gram off-diagonal",
        operands.clone(),
        bad_pair.is_none(),
        || {
            let &(a, b) = bad_pair.expect("failure has a pair");
            format!("k = {:?}, k' = {:?}", ks[a].entries(), ks[b].entries())
        },
    )];

    let diagonal: Vec<ExactScalar> = (0..size)
        .into_par_iter()
        .map(|a| dot(&weighted[a], &vectors[a]) * mus[a].rational_part())
        .collect();
    let constant_pos = diagonal.iter().position(|d| *d != diagonal[0]);
    checks.push(RelationCheck::from_bool(
        "gram diagonal constant",
        operands.clone(),
        constant_pos.is_none(),
        || {
            let a = constant_pos.expect("failure has an index");
            format!(
                "k = {:?} gives {}, k = {:?} gives {}",
                ks[0].entries(),
                format_scalar(&diagonal[0]),
                ks[a].entries(),
                format_scalar(&diagonal[a])
            )
        },
    ));

    let (diagonal_constant, normalization_error) = if constant_pos.is_none() {
        let c = diagonal[0].clone();
        let gamma_part = omega_gamma * &mu_gamma;
        let err = if c.is_positive() {
            let ln_total = ln_abs(&c)? + gamma_part.ln_gamma_part()?;
            Some((ln_total.exp() - 1.0).abs())
        } else {
            None
        };
        (Some(c), err)
    } else {
        (None, None)
    };
    let ok = normalization_error.is_some_and(|e| e <= NORMALIZATION_TOLERANCE);
    let mut norm = RelationCheck::from_bool(
        "gram normalization",
        vec![operands[0].clone(), operands[1].clone(), format!("tolerance={NORMALIZATION_TOLERANCE:e}")],
        ok,
        || match normalization_error {
            Some(e) => format!("|constant * Gamma part - 1| = {e:e}"),
            None => "no positive constant diagonal".to_string(),
        },
    );
    if ok {
        norm.status = Status::TolerancePass;
    }
    checks.push(norm);
    Ok(GramSummary { diagonal_constant, normalization_error, checks })
}

/// `C_[2..m+1] R(k; .) = kappa(|k|_{m-1}, beta_m - beta_0 - 1) R(k; .)` for all `k`
/// and `m`, and `C_[1..m]` diagonal in `x`.
pub fn verify_diagonalization(table: &GeneratorTable) -> Result<Vec<RelationCheck>> {
    let params = table.params();
    let grid = table.grid();
    let n = params.n();
    let ks = grid.multi_indices();
    let vectors = ks.par_iter().map(|k| racah_grid_vector(k, grid)).collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    for m in 2..n {
        let label = LabelSet::interval(2, m + 1)?;
        let c = table.get(&label)?;
        let shift = params.beta(m as isize) - params.beta(0) - int(1);
        let failure = ks
            .par_iter()
            .zip(vectors.par_iter())
            .map(|(k, v)| -> Result<Option<String>> {
                let lambda = kappa(&int(k.partial_sum(m - 1) as i64), &shift);
                let image = c.mul_vec(v)?;
                Ok(image
                    .iter()
                    .zip(v)
                    .position(|(a, b)| *a != b * &lambda)
                    .map(|row| format!("k = {:?}, row {row}", k.entries())))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        let operands = vec![format!("C{label}")];
        checks.push(match failure {
            None => RelationCheck::pass("eigenvector", operands),
            Some(w) => RelationCheck::fail("eigenvector", operands, w),
        });
        let diag_label = LabelSet::interval(1, m)?;
        checks.push(RelationCheck::from_bool(
            "diagonal in x",
            vec![format!("C{diag_label}")],
            table.get(&diag_label)?.is_diagonal(),
            || "off-diagonal entry".to_string(),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_bigint::BigInt;

    fn params(n: usize, big_n: u32) -> ParameterSet {
        let beta = [rat(1, 3), rat(5, 3), rat(10, 3), rat(14, 3), rat(19, 3)];
        ParameterSet::new(n, big_n, beta[..n].to_vec()).unwrap()
    }

    fn decimal(text: &str) -> ExactScalar {
        let (whole, frac) = text.split_once('.').unwrap();
        let digits: BigInt = format!("{whole}{frac}").parse().unwrap();
        ExactScalar::new(digits, BigInt::from(10).pow(frac.len() as u32))
    }

    /// Substitutes 55-digit values of Gamma(1/3) and Gamma(2/3).
    fn evaluate_thirds(w: &WeightValue) -> ExactScalar {
        let g13 = decimal("2.678938534707747633655692940974677644128689377957301101");
        let g23 = decimal("1.354117939426400416945288028154513785519327266056793698");
        let mut value = w.rational_part().clone();
        for (base, e) in w.gamma_exponents() {
            let g = if *base.value() == rat(1, 3) { &g13 } else if *base.value() == rat(2, 3) { &g23 } else { panic!("unexpected base {base}") };
            let factor = if *e >= 0 { g.clone() } else { g.recip() };
            for _ in 0..e.unsigned_abs() {
                value *= &factor;
            }
        }
        value
    }

    fn assert_close(value: &ExactScalar, reference: &str) {
        let r = decimal(reference);
        let rel = ((value - &r) / &r).abs();
        assert!(rel < rat(1, 1) / ExactScalar::from_integer(BigInt::from(10).pow(40)), "relative error {}", to_f64(&rel));
    }

    #[test]
    fn gamma_decomposition() {
        let g = WeightValue::gamma(&rat(7, 3)).unwrap();
        assert_eq!(g.rational_part(), &rat(4, 9));
        assert_eq!(g.gamma_exponents().get(&GammaBase::new(rat(1, 3)).unwrap()), Some(&1));
        assert_eq!(WeightValue::gamma(&rat(-2, 3)).unwrap().rational_part(), &rat(-3, 2));
        assert_eq!(WeightValue::gamma(&int(4)).unwrap(), WeightValue::rational(int(6)));
        assert!(matches!(WeightValue::gamma(&int(0)), Err(RacahError::Pole(_))));
        assert!(matches!(WeightValue::gamma(&int(-2)), Err(RacahError::Pole(_))));
        let ratio = WeightValue::gamma(&rat(10, 3)).unwrap() / &WeightValue::gamma(&rat(1, 3)).unwrap();
        assert_eq!(ratio, WeightValue::rational(rat(28, 27)));
    }

    #[test]
    fn omega_and_mu_against_high_precision() {
        let p = params(4, 3);
        let x = GridPointX::new(vec![1, 2], 3).unwrap();
        assert_close(
            &evaluate_thirds(&weight_omega(2, &x, &p).unwrap()),
            "470.027868037155042207114928097686029829622996388993589",
        );
        let k = MultiIndexK::new(vec![1, 1], 3).unwrap();
        assert_close(
            &evaluate_thirds(&weight_mu(2, &k, &p).unwrap()),
            "0.000000004091734248602390036327096103986319092259078258064986542",
        );
    }

    fn rho(l: u32, p: &ParameterSet) -> WeightValue {
        let (b0, b1, b2) = (p.beta(0), p.beta(1), p.beta(2));
        let (l_s, n_s) = (int(l as i64), int(p.big_n() as i64));
        let g = |a: ExactScalar| WeightValue::gamma(&a).unwrap();
        WeightValue::one() * &g(&b1 + &l_s) * &g(&b1 - &b0 + &l_s)
            / &g(&b0 + int(1) + &l_s)
            / &WeightValue::rational(factorial(l))
            * &WeightValue::rational(&b1 + int(2) * &l_s)
            * &g(&b2 + &n_s + &l_s)
            * &g(&b2 - &b1 + &n_s - &l_s)
            / &g(&b1 + &n_s + int(1) + &l_s)
            / &WeightValue::rational(factorial(p.big_n() - l))
    }

    fn inverse_lambda(k: u32, p: &ParameterSet) -> WeightValue {
        let (b0, b1, b2) = (p.beta(0), p.beta(1), p.beta(2));
        let (k_s, n_s) = (int(k as i64), int(p.big_n() as i64));
        let g = |a: ExactScalar| WeightValue::gamma(&a).unwrap();
        WeightValue::one() * &g(&k_s + &b2 - &b0 - int(1))
            / &g(&k_s + &b2 - &b1)
            / &g(&k_s + &b1 - &b0)
            / &WeightValue::rational(factorial(k))
            * &WeightValue::rational(int(2) * &k_s + &b2 - &b0 - int(1))
            * &g(&b0 + &n_s + int(1) - &k_s)
            * &WeightValue::rational(factorial(p.big_n() - k))
            / &g(&k_s + &b2 - &b0 + &n_s)
            / &g(&b2 + &n_s + &k_s)
    }

    #[test]
    fn rank_one_weights_are_the_univariate_ones() {
        let p = params(3, 5);
        for l in 0..=5 {
            let x = GridPointX::new(vec![l], 5).unwrap();
            assert_eq!(weight_omega(1, &x, &p).unwrap(), rho(l, &p));
            let k = MultiIndexK::new(vec![l], 5).unwrap();
            assert_eq!(weight_mu(1, &k, &p).unwrap(), inverse_lambda(l, &p));
        }
    }

    #[test]
    fn gamma_part_is_constant_on_the_grid() {
        let p = params(4, 4);
        let grid = SimplexGrid::new(p.clone());
        let omegas: Vec<_> = grid.points().iter().map(|x| weight_omega(2, x, &p).unwrap()).collect();
        assert!(shared_gamma_part(&omegas, "omega").is_ok());
        let mus: Vec<_> = grid.multi_indices().iter().map(|k| weight_mu(2, k, &p).unwrap()).collect();
        assert!(shared_gamma_part(&mus, "mu").is_ok());
        assert!(omegas.iter().chain(&mus).all(|w| w.rational_part().is_positive()));
    }

    #[test]
    fn gram_rank_one() {
        let summary = verify_orthogonality_exact(&params(3, 6)).unwrap();
        assert!(summary.checks.iter().all(RelationCheck::passed), "{:?}", summary.checks);
        assert!(summary.normalization_error.unwrap() < NORMALIZATION_TOLERANCE);
    }

    #[test]
    fn connection_rows_are_orthonormal() {
        let c = connection_matrix(&params(3, 2)).unwrap();
        assert_eq!(c.values().len(), 3);
        assert!(c.orthonormality_error() < 1e-9);
        assert!(c.values()[0].iter().all(|v| *v > 0.0));
        let c = connection_matrix(&params(4, 3)).unwrap();
        assert_eq!(c.values().len(), 10);
        assert!(c.orthonormality_error() < 1e-9);
        let csv = c.to_csv();
        assert_eq!(csv.lines().count(), 11);
        assert!(csv.starts_with("k\\x,0 0,0 1,"));
    }

    #[test]
    fn outside_positivity_regime_is_a_sign_error() {
        let p = ParameterSet::new(3, 3, vec![rat(-4, 3), rat(1, 3), rat(8, 3)]).unwrap();
        assert!(!p.in_positivity_regime());
        assert!(matches!(connection_matrix(&p), Err(RacahError::Sign(_))));
    }

    #[test]
    fn diagonalization_rank_two() {
        let t = GeneratorTable::new(params(4, 3)).unwrap();
        assert!(verify_diagonalization(&t).unwrap().iter().all(RelationCheck::passed));
    }
}
