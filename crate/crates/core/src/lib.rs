//! Pseudospectral Kuramoto-Sivashinsky and Burgers-family solver together
//! with Besov-norm estimators and numerical checks of the Kármán-Howarth-Monin
//! family of identities.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the tolerances are stated for.

pub mod besov;
pub mod error;
pub mod evolution;
pub mod identities;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use spectral::{GridSpec, RealField, SpectralField, Trajectory};

pub type Grid64 = GridSpec<f64>;
pub type Field64 = RealField<f64>;
pub type Spectrum64 = SpectralField<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type Grid32 = GridSpec<f32>;
pub type Field32 = RealField<f32>;
pub type Trajectory32 = Trajectory<f32>;
