pub mod charsum;
pub mod constructions;
pub mod error;
pub mod forms;
pub mod gf;
pub mod graphs;
pub mod linalg;
pub mod orthosets;
pub mod search;

pub use error::{Error, Result};
pub use forms::{BilinearForm, FormKind};
pub use gf::{Felt, Field, FieldCtx};
pub use graphs::Graph;
pub use linalg::{Matrix, Vector};
pub use orthosets::OrthoSet;

/// Exact rational, used for density bounds.
pub type Rational = num_rational::Ratio<i64>;
