//! Exact invariant cohomology of complex structures on nilpotent and solvable Lie algebras.

pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod exterior;
pub mod hodge;
pub mod metrics;
pub mod report;
pub mod structure;

pub use error::{Error, Result};
pub use exact::{Matrix, Vector, GR};
pub use exterior::{Form, MultiIndex};
pub use structure::{FamilySpec, Operators, StructureEquations};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}
