//! Quasi-free two-point functions written as spectral data
//! `ω(f, g) = ∫ dk/(2ω) Σ± c±(k) f̂(±ω, k) ĝ(∓ω, k)` on a frequency branch,
//! and their pairing against rotationally symmetric Gaussian packets.
//!
//! Temporal transforms use `f̂(ω) = ∫ e^{−iωt} f(t) dt`, under which the
//! positive-frequency mode `e^{−iεt}` pairs with `f̂(+ε)`.

mod packet;
mod pairing;
mod state;

pub use packet::{TestPacket, GAUSSIAN_TAIL};
pub use pairing::{
    finite_mu_integrand, pair, pair_at, pair_finite_mu, pair_integrand, PairingReport,
    RadialQuadrature, DEFAULT_RADIAL_NODES,
};
pub use state::{
    adiabatic, adiabatic_classical, bogoliubov_table, free_kms, ness_classical, BogoliubovTable,
    Branch, Coefficients, SpectralState, BOGOLIUBOV_NORMALIZATION_TOL,
};
