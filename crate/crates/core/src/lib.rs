//! Exact discrete realization of the higher rank Racah algebra by multivariate
//! Racah difference operators, with the polynomials, weights and verifiers that
//! go with it.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod grid;
pub mod matrix;
pub mod operator;
pub mod orthogonality;
pub mod params;
pub mod polynomials;
pub mod report;
pub mod scalar;

pub use algebra::{GeneratorTable, LabelSet};
pub use error::{RacahError, Result};
pub use expr::Expr;
pub use grid::{GridFunction, SimplexGrid};
pub use matrix::OperatorMatrix;
pub use operator::{build_racah_operator, DifferenceOperator, ShiftTerm};
pub use orthogonality::{connection_matrix, ConnectionMatrix, WeightValue};
pub use params::{GridPointX, MultiIndexK, ParameterSet};
pub use polynomials::{hyp4f3_terminating, kappa, racah_multivariate, racah_univariate};
pub use report::{RelationCheck, Report, Status};
pub use scalar::{format_scalar, parse_scalar, ExactScalar, GammaBase};
