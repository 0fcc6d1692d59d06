//! Exact analysis of prepare-measure COPE matrices: ranks, ontological models,
//! nested polytopes and the equirank nonnegative rank.

pub mod error;
pub mod field;

pub use error::{CopeError, Result};
pub use field::{Float, QuadraticScalar, Round, Scalar};
pub mod matrix;
pub mod cope;
pub mod io;
pub mod lp;
pub mod polytope;
pub mod nested2d;
pub mod nnr;
pub mod enmf;
pub mod fixtures;

pub use cope::{rank_factorize, to_b_form, validate_cope, CopeMatrix, Form, RankFactorization};
pub use matrix::Matrix;
