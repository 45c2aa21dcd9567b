//! Univariate and multivariate Racah polynomials in exact arithmetic.

use num_traits::{One, Zero};

use rayon::prelude::*;

use crate::error::{RacahError, Result};
use crate::grid::SimplexGrid;
use crate::params::{GridPointX, MultiIndexK, ParameterSet};
use crate::scalar::{int, rat, ExactScalar};

/// `kappa(x, beta) = (x + (beta+1)/2) (x + (beta-1)/2)`.
pub fn kappa(x: &ExactScalar, beta: &ExactScalar) -> ExactScalar {
    let half = rat(1, 2);
    let a = x + (beta + int(1)) * &half;
    let b = x + (beta - int(1)) * &half;
    a * b
}

/// Terminating `4F3(top; bottom; 1)` summed up to and including `depth`.
///
/// One of the top parameters must equal `-depth`. The sum is accumulated with
/// the running term ratio, so no Pochhammer is ever recomputed.
pub fn hyp4f3_terminating(
    top: &[ExactScalar; 4],
    bottom: &[ExactScalar; 3],
    depth: u32,
) -> Result<ExactScalar> {
    let stop = -int(depth as i64);
    if !top.contains(&stop) {
        return Err(RacahError::Domain(format!(
            "no top parameter equals -{depth}; the series would not terminate"
        )));
    }
    let mut sum = ExactScalar::one();
    let mut term = ExactScalar::one();
    for j in 0..depth {
        let shift = int(j as i64);
        let mut den = int(j as i64 + 1);
        for b in bottom {
            let factor = b + &shift;
            if factor.is_zero() {
                return Err(RacahError::Pole(format!(
                    "bottom Pochhammer ({b})_{} in the 4F3 sum",
                    j + 1
                )));
            }
            den *= factor;
        }
        let mut num = ExactScalar::one();
        for t in top {
            num *= t + &shift;
        }
        term = term * num / den;
        sum += &term;
    }
    Ok(sum)
}

/// Classical Racah polynomial `r_m(alpha, beta, gamma, delta; x)`.
///
/// Evaluated with the normalizing Pochhammers `(alpha+1)_m (beta+delta+1)_m (gamma+1)_m`
/// distributed into every term, so the result is a polynomial in all arguments and
/// never hits the removable poles of the bare `4F3`.
pub fn racah_univariate(
    m: u32,
    alpha: &ExactScalar,
    beta: &ExactScalar,
    gamma: &ExactScalar,
    delta: &ExactScalar,
    x: &ExactScalar,
) -> ExactScalar {
    let one = ExactScalar::one();
    let tops = [
        -int(m as i64),
        int(m as i64) + alpha + beta + &one,
        -x.clone(),
        x + gamma + delta + &one,
    ];
    let bottoms = [alpha + &one, beta + delta + &one, gamma + &one];

    // suffix[j] = prod_i (bottom_i + j)_{m-j}
    let mut suffix = vec![ExactScalar::one(); m as usize + 1];
    for j in (0..m as usize).rev() {
        let shift = int(j as i64);
        let mut factor = suffix[j + 1].clone();
        for b in &bottoms {
            factor *= b + &shift;
        }
        suffix[j] = factor;
    }

    let mut sum = ExactScalar::zero();
    let mut top_part = ExactScalar::one();
    for j in 0..=m as usize {
        if top_part.is_zero() {
            break;
        }
        sum += &top_part * &suffix[j];
        let shift = int(j as i64);
        let mut next = top_part;
        for t in &tops {
            next *= t + &shift;
        }
        top_part = next / int(j as i64 + 1);
    }
    sum
}

/// Multivariate Racah polynomial `R_p(k; x; beta; N)`: the product over `j <= p` of
/// univariate factors with chained parameters.
pub fn racah_multivariate(
    p: usize,
    k: &MultiIndexK,
    x: &GridPointX,
    params: &ParameterSet,
) -> Result<ExactScalar> {
    let dim = params.dim();
    if k.len() != dim || x.coords().len() != dim {
        return Err(RacahError::Dimension(format!(
            "k has {} and x has {} entries, expected {dim}",
            k.len(),
            x.coords().len()
        )));
    }
    if p > dim {
        return Err(RacahError::Range(format!("p = {p} exceeds n - 2 = {dim}")));
    }
    if k.partial_sum(p) > params.big_n() {
        return Err(RacahError::Range(format!("|k|_{p} exceeds N = {}", params.big_n())));
    }
    let big_n = params.big_n();
    let beta0 = params.beta(0);
    let mut value = ExactScalar::one();
    for j in 1..=p {
        let prior = int(k.partial_sum(j - 1) as i64);
        let beta_j = params.beta(j as isize);
        let beta_next = params.beta(j as isize + 1);
        let x_next = int(x.coord(j + 1, big_n) as i64);
        let x_j = int(x.coord(j, big_n) as i64);
        let alpha = int(2) * &prior + &beta_j - &beta0 - int(1);
        let b = &beta_next - &beta_j - int(1);
        let gamma = &prior - &x_next - int(1);
        let delta = &prior + &beta_j + &x_next;
        let arg = &x_j - &prior;
        value *= racah_univariate(k.entries()[j - 1], &alpha, &b, &gamma, &delta, &arg);
        if value.is_zero() {
            break;
        }
    }
    Ok(value)
}

/// `x -> R_{n-2}(k; x)` over every point of `grid`, in row order.
pub fn racah_grid_vector(k: &MultiIndexK, grid: &SimplexGrid) -> Result<Vec<ExactScalar>> {
    let params = grid.params();
    let p = params.dim();
    grid.points()
        .par_iter()
        .map(|x| racah_multivariate(p, k, x, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::pochhammer;
    use proptest::prelude::*;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&int(0), &int(1)), int(0));
        let beta = rat(7, 5);
        assert_eq!(kappa(&int(0), &beta), (&beta * &beta - int(1)) / int(4));
        assert_eq!(kappa(&int(2), &rat(3, 2)), rat(117, 16));
    }

    #[test]
    fn hyp4f3_short_sums() {
        let top = [int(0), rat(1, 2), int(3), int(4)];
        let bottom = [int(1), int(2), int(3)];
        assert_eq!(hyp4f3_terminating(&top, &bottom, 0).unwrap(), int(1));

        let (a, b, c) = (rat(2, 3), rat(-5, 7), int(4));
        let (d, e, f) = (rat(9, 2), rat(1, 3), rat(-7, 5));
        let top = [int(-1), a.clone(), b.clone(), c.clone()];
        let bottom = [d.clone(), e.clone(), f.clone()];
        let expected = int(1) - &a * &b * &c / (&d * &e * &f);
        assert_eq!(hyp4f3_terminating(&top, &bottom, 1).unwrap(), expected);
    }

    #[test]
    fn hyp4f3_matches_term_by_term_sum() {
        // Independent sum with explicit Pochhammers:
        // j=0: 1; j=1: (-2*4*-3*7)/(2*-5*3) = -5.6; j=2: (2*20*6*56)/(6*20*12*2) = 14/3.
        let top = [int(-2), int(4), int(-3), int(7)];
        let bottom = [int(2), int(-5), int(3)];
        let got = hyp4f3_terminating(&top, &bottom, 2).unwrap();
        assert_eq!(got, int(1) - rat(28, 5) + rat(14, 3));
    }

    #[test]
    fn hyp4f3_reports_poles() {
        let top = [int(-3), int(1), int(1), int(1)];
        let bottom = [int(-1), int(2), int(2)];
        assert!(matches!(hyp4f3_terminating(&top, &bottom, 3), Err(RacahError::Pole(_))));
        let top = [int(-3), int(1), int(1), int(1)];
        let bottom = [int(1), int(2), int(2)];
        assert!(matches!(hyp4f3_terminating(&top, &bottom, 2), Err(RacahError::Domain(_))));
    }

    #[test]
    fn racah_univariate_edges() {
        let (a, b, c, d) = (rat(1, 3), rat(5, 2), rat(-7, 2), rat(11, 4));
        assert_eq!(racah_univariate(0, &a, &b, &c, &d, &rat(3, 7)), int(1));
        let m = 3;
        let expected = pochhammer(&(&a + int(1)), m)
            * pochhammer(&(&b + &d + int(1)), m)
            * pochhammer(&(&c + int(1)), m);
        assert_eq!(racah_univariate(m, &a, &b, &c, &d, &int(0)), expected);
    }

    #[test]
    fn racah_degree_one_closed_form() {
        let samples = [
            (rat(1, 3), rat(5, 2), rat(-7, 2), rat(11, 4), rat(3, 7)),
            (rat(-2, 9), rat(4, 5), rat(6, 1), rat(-1, 3), int(2)),
            (rat(7, 8), rat(-3, 11), rat(1, 2), rat(5, 6), rat(-9, 4)),
        ];
        for (a, b, c, d, x) in samples {
            let expected = (&a + int(1)) * (&b + &d + int(1)) * (&c + int(1))
                + (&a + &b + int(2)) * &x * (&x + &c + &d + int(1));
            assert_eq!(racah_univariate(1, &a, &b, &c, &d, &x), expected);
        }
    }

    fn params4() -> ParameterSet {
        ParameterSet::new(4, 4, vec![rat(1, 3), rat(5, 3), rat(10, 3), rat(14, 3)]).unwrap()
    }

    #[test]
    fn multivariate_examples() {
        let params = params4();
        let x = GridPointX::new(vec![2, 3], 4).unwrap();
        let zero = MultiIndexK::new(vec![0, 0], 4).unwrap();
        assert_eq!(racah_multivariate(2, &zero, &x, &params).unwrap(), int(1));

        let k = MultiIndexK::new(vec![1, 1], 4).unwrap();
        let b = params.betas();
        // factor j=1: r_1(b1-b0-1, b2-b1-1, -x2-1, b1+x2; x1)
        let one = int(1);
        let f1 = prefactor_times_4f3(
            1,
            &(&b[1] - &b[0] - &one),
            &(&b[2] - &b[1] - &one),
            &(-int(3) - &one),
            &(&b[1] + int(3)),
            &int(2),
        );
        // factor j=2 with |k|_1 = 1: r_1(2+b2-b0-1, b3-b2-1, 1-N-1, 1+b2+N; x2-1)
        let f2 = prefactor_times_4f3(
            1,
            &(int(2) + &b[2] - &b[0] - &one),
            &(&b[3] - &b[2] - &one),
            &(int(1) - int(4) - &one),
            &(int(1) + &b[2] + int(4)),
            &int(2),
        );
        assert_eq!(racah_multivariate(2, &k, &x, &params).unwrap(), f1 * f2);

        let p1 = racah_multivariate(1, &k, &x, &params).unwrap();
        let direct = racah_univariate(
            1,
            &(&b[1] - &b[0] - &one),
            &(&b[2] - &b[1] - &one),
            &(-int(3) - &one),
            &(&b[1] + int(3)),
            &int(2),
        );
        assert_eq!(p1, direct);
    }

    #[test]
    fn multivariate_rejects_bad_shapes() {
        let params = params4();
        let x = GridPointX::new(vec![2, 3], 4).unwrap();
        let k3 = MultiIndexK::new(vec![0, 0, 1], 4).unwrap();
        assert!(matches!(racah_multivariate(2, &k3, &x, &params), Err(RacahError::Dimension(_))));
        let k = MultiIndexK::new(vec![0, 0], 4).unwrap();
        assert!(matches!(racah_multivariate(3, &k, &x, &params), Err(RacahError::Range(_))));
    }

    /// Prefactor times an independently summed 4F3 with explicit Pochhammers.
    fn prefactor_times_4f3(
        m: u32,
        a: &ExactScalar,
        b: &ExactScalar,
        c: &ExactScalar,
        d: &ExactScalar,
        x: &ExactScalar,
    ) -> ExactScalar {
        let one = int(1);
        let tops = [
            -int(m as i64),
            int(m as i64) + a + b + &one,
            -x.clone(),
            x + c + d + &one,
        ];
        let bottoms = [a + &one, b + d + &one, c + &one];
        let mut sum = ExactScalar::zero();
        for j in 0..=m {
            let mut term = ExactScalar::one();
            for t in &tops {
                term *= pochhammer(t, j);
            }
            for bt in &bottoms {
                term /= pochhammer(bt, j);
            }
            term /= crate::scalar::factorial(j);
            sum += term;
        }
        let mut pre = ExactScalar::one();
        for bt in &bottoms {
            pre *= pochhammer(bt, m);
        }
        pre * sum
    }

    fn small_rational() -> impl Strategy<Value = ExactScalar> {
        (-40i64..40, 1i64..9).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn pole_free_form_agrees_with_4f3(
            m in 0u32..6,
            a in small_rational(),
            b in small_rational(),
            c in small_rational(),
            d in small_rational(),
            x in small_rational(),
        ) {
            let one = int(1);
            let tops = [-int(m as i64), int(m as i64) + &a + &b + &one, -x.clone(), &x + &c + &d + &one];
            let bottoms = [&a + &one, &b + &d + &one, &c + &one];
            if let Ok(series) = hyp4f3_terminating(&tops, &bottoms, m) {
                let mut pre = ExactScalar::one();
                for bt in &bottoms {
                    pre *= pochhammer(bt, m);
                }
                prop_assert_eq!(racah_univariate(m, &a, &b, &c, &d, &x), pre * series);
            }
        }
    }
}
