//! Closed-form finite trigonometric-hyperbolic sums and the free-fermion
//! observables of the periodic transverse-field Ising chain built on them.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiations. [`exact`] evaluates the closed
//! forms in rational arithmetic and [`ed`] supplies an exact-diagonalization
//! oracle for small chains.

pub mod ed;
pub mod error;
pub mod exact;
pub mod identities;
pub mod kernels;
pub mod observables;
pub mod real;
pub mod sector;
pub mod summation;

pub use error::{Error, Result};
pub use real::Real;
pub use sector::{FamilyTag, MomentumGrid, Parity, SectorFamily, SumKind};

pub type SumQuery64 = identities::SumQuery<f64>;
pub type SumQuery32 = identities::SumQuery<f32>;
pub type VerificationReport64 = identities::VerificationReport<f64>;
pub type VerificationReport32 = identities::VerificationReport<f32>;
pub type PoleTerm64 = kernels::PoleTerm<f64>;
pub type ChiPoint64 = observables::ChiPoint<f64>;
pub type CdCoefficients64 = observables::CdCoefficients<f64>;
