//! Exact cohomology of double complexes over `ℚ(i)`: Dolbeault, Bott-Chern,
//! Aeppli and de Rham dimensions, the Frölicher spectral sequence, natural
//! maps between the cohomologies, harmonic forms, and complex structure
//! equations of nilpotent Lie algebras.
//!
//! Everything is generic over an exact [`scalar::Field`]; the aliases below
//! fix the scalar to Gaussian rationals, which is what files and models use.

pub mod bicomplex;
pub mod error;
pub mod hodge;
pub mod lie;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod search;

pub use scalar::{Field, GaussianRational, Rational};

pub type GaussMatrix = linalg::Matrix<GaussianRational>;
pub type GaussSubspace = linalg::Subspace<GaussianRational>;
pub type GaussBicomplex = bicomplex::Bicomplex<GaussianRational>;
pub type GaussMetric = hodge::MetricData<GaussianRational>;
pub type RatMatrix = linalg::Matrix<Rational>;
pub type RatSubspace = linalg::Subspace<Rational>;
