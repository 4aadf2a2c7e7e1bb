//! Casimir-Polder energy shifts and decay-rate changes for an atom near a
//! uniaxial half-space or slab.
//!
//! Everything is dimensionless: frequencies, wave numbers and inverse lengths
//! are measured in units of a reference frequency `ω_ref`, with `ħ = c = ε₀ = 1`.
//! A distance `Z` therefore means `Z·ω_ref/c` and an energy means `E/(ħω_ref)`.
//!
//! The exact paths ([`shifts`]) integrate the shift functionals numerically;
//! the closed forms in [`asymptotics`] are separate approximations, and the
//! library never switches between the two on its own.

pub mod asymptotics;
pub mod error;
pub mod fresnel;
pub mod material;
pub mod oracle;
pub mod quadrature;
pub mod shifts;
pub mod specfun;

pub use error::{Error, Result};
pub use material::{AxisResponse, Material, MaybeInfinite};
pub use quadrature::{QuadResult, QuadSpec};
pub use shifts::{AtomSpec, FCoefficients, Geometry, ShiftResult, Transition};
