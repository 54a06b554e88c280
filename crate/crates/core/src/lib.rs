//! Dynamical and geometric phases of coherent-state motion on Hermitian
//! symmetric spaces.
//!
//! Points live in matrix charts of the classical families (AIII, CI, DIII,
//! BDI), Hamiltonians are linear in Lie-algebra generators, and the classical
//! flow is the fractional-linear action of the defining representation. Phases
//! come out as `α = β + γ`: dynamical from the Hamiltonian expectation,
//! geometric from the Kähler potential `λ ln K`. An exact spin-`j` simulator
//! serves as a ground-truth oracle, and a separate module computes Poincaré
//! polynomials of coadjoint orbits.
//!
//! ```
//! use kahler_phase::kernels::{validate_point, ManifoldSpec, Level};
//! use kahler_phase::matrix::{c64, scalar};
//! use kahler_phase::phase::triangle_phase;
//!
//! let spec = ManifoldSpec::cp1();
//! let z = validate_point(&spec, scalar(c64(1.0, 0.0))).unwrap();
//! let w = validate_point(&spec, scalar(c64(0.0, 1.0))).unwrap();
//! let gamma = triangle_phase(Level::ONE, &z, &w).unwrap();
//! assert!((gamma - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
//! ```

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod kahler;
pub mod kernels;
pub mod loops;
pub mod matrix;
pub mod phase;
pub mod su2;
pub mod topology;

pub use error::{Error, Result};
pub use kernels::{Family, Level, LevelSpec, ManifoldSpec, PointMatrix};
