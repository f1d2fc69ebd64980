//! Near-field ultra-massive MIMO simulation library.
//!
//! Modules are layered bottom-up: [`numerics`] supplies special functions,
//! quadrature, dense linear algebra and seeded sampling; [`geometry`],
//! [`fields`] and [`channel`] build arrays and propagation models on top of it;
//! [`beam`], [`dof`], [`estimate`], [`mux`] and [`circuit`] implement the
//! analyses.

pub mod beam;
pub mod channel;
pub mod circuit;
pub mod dof;
pub mod error;
pub mod estimate;
pub mod fields;
pub mod geometry;
pub mod mux;
pub mod numerics;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<Complex64>;
/// Point or direction in meters.
pub type Point3 = [f64; 3];

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_8188e-12;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
