//! Exact arithmetic: multivariable Laurent polynomials over `Z` and over
//! prime fields, dense univariate polynomials over `F_p`, matrices, and
//! Smith normal form over `Z` and `F_p[t]`.

mod fp;
mod matrix;
mod parse;
mod poly;
mod snf;

pub use fp::FpPoly;
pub use matrix::Mat;
pub use poly::{CoeffRing, LaurentPoly};
pub use snf::{
    laurent_smith_normal_form, mat_mul, smith_normal_form, smith_normal_form_with_transforms,
    SnfEntry, SnfResult,
};
