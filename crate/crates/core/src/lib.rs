//! Sharp bounds on the second-order Toeplitz determinant `|a₃² − a₄²|` for
//! Ma–Minda convex classes, with numerical checks: Schwarz-function
//! sampling, a randomized sharpness search, the extremal function, and
//! directional-jet checks for mappings of the ball and polydisk in `ℂⁿ`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod extremal;
pub mod highdim;
pub mod psi;
pub mod schwarz;
pub mod series;

pub use bounds::{sharp_bound_t23, sharpness_search, BoundReport, SearchReport};
pub use coeffs::{coeffs_from_subordination, t23, CoefficientVector};
pub use error::{Error, Result};
pub use extremal::{build_extremal, verify_attainment, ExtremalFunction};
pub use psi::{PsiJet, PsiKind, PsiTarget};
pub use schwarz::{SchurParams, SchwarzJet};
pub use series::TruncatedSeries;
