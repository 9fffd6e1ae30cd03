//! Exact construction and verification of immersed Lagrangian charts in
//! doubled symplectic space, the integrable structures they carry, and
//! the Legendrian singularity catalog of their generating functions.

pub mod builders;
pub mod domain;
pub mod eds;
pub mod error;
pub mod immersion;
pub mod io;
pub mod jets;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod report;
pub mod singularities;
pub mod symplectic;

pub use error::{IasError, Result};
pub use jets::{Jet2, ScalarField};
pub use linalg::{Gaussian, Matrix, Rational, Scalar};
pub use poly::{GPoly, QPoly};
