use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::quadrature::GaussLegendre;
use crate::{Error, Result};

/// Half-width, in units of the Gaussian width, beyond which a unit-height
/// Gaussian drops below `1e-16`: `sqrt(2 ln 1e16)`.
pub const GAUSSIAN_TAIL: f64 = 8.584_525_5;

/// A rotationally symmetric test function, Gaussian in `|k|` and in `t`.
///
/// Mixed representation `f̃(t, k) = a · e^{−(|k|−k_c)²/2σ_k²} · e^{−(t−t_c)²/2σ_t²}`;
/// frequency representation `f̂(ω, k) = ∫ e^{−iωt} f̃(t, k) dt`, which is
/// `a · e^{−(|k|−k_c)²/2σ_k²} · sqrt(2π) σ_t · e^{−σ_t²ω²/2} · e^{−iωt_c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestPacket {
    pub amplitude: f64,
    pub k_center: f64,
    pub k_width: f64,
    pub t_center: f64,
    pub t_width: f64,
}

impl TestPacket {
    pub fn new(k_center: f64, k_width: f64, t_center: f64, t_width: f64) -> Result<Self> {
        let p = Self {
            amplitude: 1.0,
            k_center,
            k_width,
            t_center,
            t_width,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_amplitude(self, amplitude: f64) -> Self {
        Self { amplitude, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.amplitude,
            self.k_center,
            self.k_width,
            self.t_center,
            self.t_width,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite || self.k_center < 0.0 || self.k_width <= 0.0 || self.t_width <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "packet",
                reason: "need finite values, k_center ≥ 0 and positive widths",
            });
        }
        Ok(())
    }

    pub fn spatial(&self, k_mag: f64) -> f64 {
        let x = (k_mag - self.k_center) / self.k_width;
        self.amplitude * libm::exp(-0.5 * x * x)
    }

    pub fn temporal(&self, t: f64) -> f64 {
        let x = (t - self.t_center) / self.t_width;
        libm::exp(-0.5 * x * x)
    }

    pub fn mixed(&self, t: f64, k_mag: f64) -> f64 {
        self.spatial(k_mag) * self.temporal(t)
    }

    pub fn temporal_hat(&self, omega: f64) -> Complex64 {
        let s = self.t_width;
        Complex64::new(0.0, -omega * self.t_center).exp()
            * (libm::sqrt(2.0 * PI) * s * libm::exp(-0.5 * s * s * omega * omega))
    }

    pub fn hat(&self, omega: f64, k_mag: f64) -> Complex64 {
        self.temporal_hat(omega) * self.spatial(k_mag)
    }

    /// Radius beyond which the spatial profile is below `1e-16` of its peak.
    pub fn k_max(&self) -> f64 {
        self.k_center + GAUSSIAN_TAIL * self.k_width
    }

    /// Interval outside which the temporal profile is below `1e-16`.
    pub fn time_support(&self) -> (f64, f64) {
        let half = GAUSSIAN_TAIL * self.t_width;
        (self.t_center - half, self.t_center + half)
    }

    /// Composite Gauss–Legendre nodes over [`Self::time_support`] resolving
    /// oscillations up to `omega_max`.
    pub(crate) fn time_nodes(&self, omega_max: f64) -> Vec<(f64, f64)> {
        let (lo, hi) = self.time_support();
        let panels = libm::ceil(2.0 * omega_max * (hi - lo)).max(4.0) as usize;
        GaussLegendre::new(16).composite(lo, hi, panels)
    }
}
