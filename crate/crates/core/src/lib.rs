//! Variational atomic structure for hydrogen- and helium-like systems
//! with Z-dependent inverse-square correction couplings.
//!
//! The crate computes the correction couplings and the derived orbital
//! exponents, the exact hydrogen-like eigensolutions of the corrected
//! radial/angular equations, closed-form correlated two-electron
//! integrals, and helium-like ground-state energies through a
//! two-exponent correlated variational basis. Embedded reference tables
//! and comparison metrics back a verification suite.

pub mod acceptance;
pub mod couplings;
pub mod functionals;
pub mod hydrogenic;
pub mod integrals;
pub mod linalg;
pub mod optimizer;
pub mod quadrature;
pub mod reference;
pub mod special;
