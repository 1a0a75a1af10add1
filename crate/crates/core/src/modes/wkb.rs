use num_complex::Complex64;

use super::profile::{instantaneous_frequency, SwitchingProfile};
use crate::quadrature::integrate_adaptive;
use crate::thermal::{dispersion, ThermalParams};
use crate::{Error, Result};

/// `∫_{t0}^{t} ε_μ(k, s) ds`, closed form outside the switch and adaptive
/// quadrature across it.
pub fn wkb_phase(
    k_mag: f64,
    t0: f64,
    t: f64,
    prof: &SwitchingProfile,
    params: &ThermalParams,
) -> f64 {
    if t < t0 {
        return -wkb_phase(k_mag, t, t0, prof, params);
    }
    let disp = dispersion(k_mag, params);
    let start = prof.switch_start();
    let before = (t.min(start) - t0.min(start)).max(0.0) * disp.eps;
    let after = (t.max(0.0) - t0.max(0.0)).max(0.0) * disp.eps_lambda;
    let (lo, hi) = (t0.clamp(start, 0.0), t.clamp(start, 0.0));
    let during = if hi > lo {
        integrate_adaptive(lo, hi, 1e-14 * (hi - lo).max(1.0), &mut |s| {
            instantaneous_frequency(&disp, prof, s)
        })
    } else {
        0.0
    };
    before + during + after
}

/// Adiabatic comparison mode
/// `T_a(t) = e^{−iεt₀} (2ε_μ(k,t))^{−1/2} exp(−i ∫_{t₀}^{t} ε_μ(k,s) ds)`.
///
/// The constant phase `e^{−iεt₀}` makes `T_a` coincide with the exact mode
/// before the switch.
pub fn wkb_mode(
    k_mag: f64,
    t: f64,
    prof: &SwitchingProfile,
    params: &ThermalParams,
    t0: f64,
) -> Result<Complex64> {
    if t0 > prof.switch_start() {
        return Err(Error::InvalidParameter {
            name: "t0",
            reason: "reference time must precede the switch (t0 ≤ −μ)",
        });
    }
    let disp = dispersion(k_mag, params);
    let phase = disp.eps * t0 + wkb_phase(k_mag, t0, t, prof, params);
    let freq = instantaneous_frequency(&disp, prof, t);
    Ok(Complex64::new(0.0, -phase).exp() / libm::sqrt(2.0 * freq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn modulus_and_free_limit() {
        let params = ThermalParams::new(1.0, 1.0, 1.0, 0.5).unwrap();
        let prof = SwitchingProfile::new(6.0).unwrap();
        for &t in &[-9.0, -3.0, -1.0, 2.0] {
            let ta = wkb_mode(0.4, t, &prof, &params, -7.0).unwrap();
            let f = instantaneous_frequency(&dispersion(0.4, &params), &prof, t);
            assert_relative_eq!(ta.norm(), 1.0 / (2.0 * f).sqrt(), max_relative = 1e-14);
        }
        let free = params.with_lambda(0.0).unwrap();
        let eps = dispersion(0.4, &free).eps;
        for &t in &[-9.0, -3.0, 5.0] {
            let ta = wkb_mode(0.4, t, &prof, &free, -7.0).unwrap();
            let plane = Complex64::new(0.0, -eps * t).exp() / (2.0 * eps).sqrt();
            assert!((ta - plane).norm() < 1e-13);
        }
        assert!(wkb_mode(0.4, 0.0, &prof, &params, -1.0).is_err());
    }

    #[test]
    fn phase_is_additive() {
        let params = ThermalParams::new(1.0, 1.0, 2.0, 0.3).unwrap();
        let prof = SwitchingProfile::new(3.0).unwrap();
        let a = wkb_phase(1.0, -5.0, -1.0, &prof, &params);
        let b = wkb_phase(1.0, -1.0, 2.0, &prof, &params);
        let c = wkb_phase(1.0, -5.0, 2.0, &prof, &params);
        assert_relative_eq!(a + b, c, max_relative = 1e-13);
    }
}
