//! Exact scalar field `ℚ(i)` and dense linear algebra over it.

pub mod matrix;
pub mod scalar;

pub use matrix::{
    contained_in, in_span, independent_subset, inner, intersection, is_zero_vec, lin_comb,
    orth_project, same_span, span_dim, subspace_sum_dim, vec_add, vec_scale, vec_sub, Matrix,
    Vector,
};
pub use scalar::{rat, GaussianRational, Rational, GR};
