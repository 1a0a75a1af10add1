use crate::thermal::{DispersionPair, ThermalParams};
use crate::{Error, Result};

/// `χ(s) = ψ(s+1) / (ψ(s+1) + ψ(−s))` with `ψ(x) = e^{−1/x}` for `x > 0`:
/// smooth, monotone, exactly 0 for `s ≤ −1` and exactly 1 for `s ≥ 0`.
pub fn smooth_step(s: f64) -> f64 {
    if s <= -1.0 {
        return 0.0;
    }
    if s >= 0.0 {
        return 1.0;
    }
    // ψ(−s)/ψ(s+1) = e^u
    let u = 1.0 / (s + 1.0) + 1.0 / s;
    if u > 0.0 {
        let e = libm::exp(-u);
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + libm::exp(u))
    }
}

/// Derivative of [`smooth_step`].
pub fn smooth_step_derivative(s: f64) -> f64 {
    if s <= -1.0 || s >= 0.0 {
        return 0.0;
    }
    let u = 1.0 / (s + 1.0) + 1.0 / s;
    let e = libm::exp(-u.abs());
    let du = 1.0 / ((s + 1.0) * (s + 1.0)) + 1.0 / (s * s);
    du * e / ((1.0 + e) * (1.0 + e))
}

/// The switching function `χ_μ(t) = χ(t/μ)`, supported in `(−μ, ∞)` and
/// equal to one for `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchingProfile {
    mu: f64,
}

impl SwitchingProfile {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: "switching scale must be positive and finite",
            });
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Start of the switching interval; `χ_μ` vanishes at and before it.
    pub fn switch_start(&self) -> f64 {
        -self.mu
    }

    pub fn chi(&self, t: f64) -> f64 {
        smooth_step(t / self.mu)
    }

    pub fn chi_dot(&self, t: f64) -> f64 {
        smooth_step_derivative(t / self.mu) / self.mu
    }
}

/// `χ_μ(t)` for the given profile.
pub fn chi_value(t: f64, prof: &SwitchingProfile) -> f64 {
    prof.chi(t)
}

/// `ε_μ(k, t) = sqrt(ε² + (ε_λ² − ε²) χ_μ(t))`.
pub fn instantaneous_frequency(disp: &DispersionPair, prof: &SwitchingProfile, t: f64) -> f64 {
    libm::sqrt(disp.eps * disp.eps + disp.gap_sq() * prof.chi(t))
}

/// `ε_μ(k, t)` from raw parameters.
pub fn time_frequency(k_mag: f64, t: f64, prof: &SwitchingProfile, params: &ThermalParams) -> f64 {
    instantaneous_frequency(&crate::thermal::dispersion(k_mag, params), prof, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;
    use approx::assert_relative_eq;

    #[test]
    fn exact_zero_and_one_outside_switch() {
        for mu in [0.01, 1.0, 40.0] {
            let p = SwitchingProfile::new(mu).unwrap();
            assert_eq!(chi_value(1.0, &p), 1.0);
            assert_eq!(chi_value(0.0, &p), 1.0);
            assert_eq!(chi_value(-2.0 * mu, &p), 0.0);
            assert_eq!(chi_value(-mu, &p), 0.0);
            let mid = chi_value(-mu / 2.0, &p);
            assert!(mid > 0.0 && mid < 1.0);
            assert_relative_eq!(mid, 0.5, max_relative = 1e-15);
        }
    }

    #[test]
    fn monotone_and_derivative_consistent() {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let s = -1.0 + i as f64 / 1000.0;
            let v = smooth_step(s);
            assert!(v >= prev && (0.0..=1.0).contains(&v));
            prev = v;
            assert!(smooth_step_derivative(s) >= 0.0);
        }
        for &s in &[-0.9, -0.7, -0.5, -0.2, -0.05] {
            let h = 1e-6;
            let fd = (smooth_step(s + h) - smooth_step(s - h)) / (2.0 * h);
            assert!((smooth_step_derivative(s) - fd).abs() < 1e-9, "s = {s}");
        }
    }

    #[test]
    fn chi_dot_integrates_to_one() {
        let p = SwitchingProfile::new(7.0).unwrap();
        let total = integrate_adaptive(-7.0, 0.0, 1e-14, &mut |t| p.chi_dot(t));
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn frequency_interpolates() {
        let params = ThermalParams::new(1.0, 1.0, 1.0, 0.5).unwrap();
        let p = SwitchingProfile::new(3.0).unwrap();
        assert_eq!(time_frequency(0.5, -3.5, &p, &params), 1.25f64.sqrt());
        assert_eq!(time_frequency(0.5, 0.2, &p, &params), 1.75f64.sqrt());
        let free = params.with_lambda(0.0).unwrap();
        assert_eq!(time_frequency(0.5, -1.0, &p, &free), 1.25f64.sqrt());
        assert!(SwitchingProfile::new(0.0).is_err());
    }
}
