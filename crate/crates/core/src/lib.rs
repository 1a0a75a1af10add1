//! Adiabatic limit of the interacting thermal state of a scalar field under a
//! quadratic (mass-shift) perturbation.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//!
//! * [`thermal`]: the thermal coefficients `b±(β, ε)`, their β-derivative tower
//!   and the inverse-temperature shift that resums it.
//! * [`combinatorics`]: permutations and descents, Eulerian numbers, set
//!   partitions and connected (cumulant) functions.
//! * [`modes`]: the switching profile `χ_μ`, the mode equation
//!   `T̈ + ε_μ(k, t)² T = 0`, WKB comparison modes, switching integrals,
//!   Bogoliubov coefficients and ergodic averages.
//! * [`spectral`]: quasi-free two-point functions as spectral data and their
//!   pairing against Gaussian test packets.
//! * [`series`]: the order-by-order adiabatic-limit series and its resummation.
//!
//! Numerical building blocks live in [`quadrature`] and [`ode`].

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod combinatorics;
mod error;
pub mod modes;
pub mod ode;
pub mod quadrature;
pub mod series;
pub mod spectral;
pub mod thermal;

pub use error::{Error, Result};
pub use num_complex::Complex64;
