//! Rational expressions in the grid coordinates `x_i` and the parameters `beta_i`.
//!
//! Operator coefficients are stored in this form so that index shifts and
//! parameter substitutions stay exact; they are only evaluated pointwise.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{RacahError, Result};
use crate::scalar::{int, ExactScalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(ExactScalar),
    /// Coordinate `x_i` in global numbering: `x_0 = 0`, `x_{n-1} = N`.
    X(usize),
    Beta(usize),
    Sum(Vec<Expr>),
    /// Factors are evaluated left to right and stop at the first zero.
    Product(Vec<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

/// Values of `x_0..x_{n-1}` and `beta_0..beta_{n-1}` at one grid point.
pub struct EvalContext<'a> {
    pub xs: Vec<ExactScalar>,
    pub betas: &'a [ExactScalar],
}

impl<'a> EvalContext<'a> {
    pub fn new(coords: &[u32], big_n: u32, betas: &'a [ExactScalar]) -> Self {
        let mut xs = Vec::with_capacity(coords.len() + 2);
        xs.push(ExactScalar::zero());
        xs.extend(coords.iter().map(|&c| int(c as i64)));
        xs.push(int(big_n as i64));
        EvalContext { xs, betas }
    }
}

impl Expr {
    pub fn constant(value: ExactScalar) -> Expr {
        Expr::Const(value)
    }

    pub fn int(value: i64) -> Expr {
        Expr::Const(int(value))
    }

    pub fn zero() -> Expr {
        Expr::Const(ExactScalar::zero())
    }

    pub fn x(i: usize) -> Expr {
        Expr::X(i)
    }

    pub fn beta(i: usize) -> Expr {
        Expr::Beta(i)
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn eval(&self, ctx: &EvalContext<'_>) -> Result<ExactScalar> {
        match self {
            Expr::Const(c) => Ok(c.clone()),
            Expr::X(i) => ctx
                .xs
                .get(*i)
                .cloned()
                .ok_or_else(|| RacahError::Range(format!("coordinate x_{i} does not exist"))),
            Expr::Beta(i) => ctx
                .betas
                .get(*i)
                .cloned()
                .ok_or_else(|| RacahError::Range(format!("parameter beta_{i} does not exist"))),
            Expr::Sum(terms) => {
                let mut acc = ExactScalar::zero();
                for t in terms {
                    acc += t.eval(ctx)?;
                }
                Ok(acc)
            }
            Expr::Product(factors) => {
                let mut acc = ExactScalar::one();
                for f in factors {
                    let v = f.eval(ctx)?;
                    if v.is_zero() {
                        return Ok(v);
                    }
                    acc *= v;
                }
                Ok(acc)
            }
            Expr::Quotient(num, den) => {
                let n = num.eval(ctx)?;
                if n.is_zero() {
                    return Ok(n);
                }
                let d = den.eval(ctx)?;
                if d.is_zero() {
                    let point: Vec<String> = ctx.xs.iter().map(|v| v.to_string()).collect();
                    return Err(RacahError::Pole(format!(
                        "denominator {den} at (x_0..x_{{n-1}}) = ({})",
                        point.join(", ")
                    )));
                }
                Ok(n / d)
            }
            Expr::Neg(inner) => Ok(-inner.eval(ctx)?),
        }
    }

    /// Rebuilds the expression with every `X`/`Beta` leaf passed through `f`;
    /// leaves for which `f` returns `None` are kept.
    pub fn map_leaves<F>(&self, f: &F) -> Expr
    where
        F: Fn(&Expr) -> Option<Expr>,
    {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::X(_) | Expr::Beta(_) => f(self).unwrap_or_else(|| self.clone()),
            Expr::Sum(terms) => Expr::Sum(terms.iter().map(|t| t.map_leaves(f)).collect()),
            Expr::Product(factors) => {
                Expr::Product(factors.iter().map(|t| t.map_leaves(f)).collect())
            }
            Expr::Quotient(n, d) => {
                Expr::Quotient(Box::new(n.map_leaves(f)), Box::new(d.map_leaves(f)))
            }
            Expr::Neg(inner) => Expr::Neg(Box::new(inner.map_leaves(f))),
        }
    }

    /// The involution `x_i -> -x_i - beta_i`.
    pub fn involution(&self, i: usize) -> Expr {
        self.map_leaves(&|leaf| match leaf {
            Expr::X(k) if *k == i => Some(-Expr::x(i) - Expr::beta(i)),
            _ => None,
        })
    }

    /// Largest `x` and `beta` indices referenced, if any.
    pub fn max_indices(&self) -> (Option<usize>, Option<usize>) {
        fn merge(a: Option<usize>, b: Option<usize>) -> Option<usize> {
            match (a, b) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, None) => x,
                (None, y) => y,
            }
        }
        match self {
            Expr::Const(_) => (None, None),
            Expr::X(i) => (Some(*i), None),
            Expr::Beta(i) => (None, Some(*i)),
            Expr::Sum(items) | Expr::Product(items) => items.iter().fold((None, None), |acc, e| {
                let (x, b) = e.max_indices();
                (merge(acc.0, x), merge(acc.1, b))
            }),
            Expr::Quotient(n, d) => {
                let (nx, nb) = n.max_indices();
                let (dx, db) = d.max_indices();
                (merge(nx, dx), merge(nb, db))
            }
            Expr::Neg(inner) => inner.max_indices(),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        if self.is_const_zero() {
            return rhs;
        }
        if rhs.is_const_zero() {
            return self;
        }
        match self {
            Expr::Sum(mut terms) => {
                terms.push(rhs);
                Expr::Sum(terms)
            }
            lhs => Expr::Sum(vec![lhs, rhs]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Product(mut factors) => {
                factors.push(rhs);
                Expr::Product(factors)
            }
            lhs => Expr::Product(vec![lhs, rhs]),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Quotient(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::X(i) => write!(f, "x{i}"),
            Expr::Beta(i) => write!(f, "b{i}"),
            Expr::Sum(terms) => {
                write!(f, "(")?;
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Expr::Product(factors) => {
                for (k, t) in factors.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Quotient(n, d) => write!(f, "({n})/({d})"),
            Expr::Neg(inner) => write!(f, "-({inner})"),
        }
    }
}
