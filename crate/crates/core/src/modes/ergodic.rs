use alloc::vec::Vec;

use num_complex::Complex64;

use super::bogoliubov::{bogoliubov, BogoliubovPair};
use super::profile::SwitchingProfile;
use super::trajectory::solve_modes;
use crate::ode::Tolerance;
use crate::quadrature::{pairwise_sum, GaussLegendre};
use crate::thermal::{dispersion, ThermalParams};
use crate::{Error, Result};

/// Time averages of `T(t₁+τ)T(t₂+τ)` and `T(t₁+τ)conj(T(t₂+τ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicAverages {
    pub tt: Complex64,
    pub tt_bar: Complex64,
}

/// Closed-form horizon → ∞ limits:
/// `⟨TT⟩ = A₊A₋/(2ε_λ) Σ± e^{∓iε_λ(t₁−t₂)}`,
/// `⟨T T̄⟩ = 1/(2ε_λ) Σ± |A±|² e^{∓iε_λ(t₁−t₂)}`.
pub fn ergodic_limits(pair: &BogoliubovPair, eps_lambda: f64, t1: f64, t2: f64) -> ErgodicAverages {
    let down = Complex64::new(0.0, -eps_lambda * (t1 - t2)).exp();
    let up = down.conj();
    let norm = 1.0 / (2.0 * eps_lambda);
    ErgodicAverages {
        tt: pair.a_plus * pair.a_minus * (down + up) * norm,
        tt_bar: (down * pair.a_plus.norm_sqr() + up * pair.a_minus.norm_sqr()) * norm,
    }
}

/// `∫_a^b e^{iωτ} dτ`.
fn oscillatory_integral(omega: f64, a: f64, b: f64) -> Complex64 {
    if omega == 0.0 {
        return Complex64::new(b - a, 0.0);
    }
    let ea = Complex64::new(0.0, omega * a).exp();
    let eb = Complex64::new(0.0, omega * b).exp();
    (eb - ea) / Complex64::new(0.0, omega)
}

/// Finite-horizon averages `(1/H) ∫₀^H … dτ`.
///
/// While either argument is still before `t = 0` the products are integrated
/// numerically from the solved mode; once both arguments are in the flat
/// region the mode is a two-frequency combination and the remaining integral
/// is done in closed form.
pub fn ergodic_averages(
    k_mag: f64,
    prof: &SwitchingProfile,
    params: &ThermalParams,
    t1: f64,
    t2: f64,
    horizon: f64,
    tol: Tolerance,
) -> Result<ErgodicAverages> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "horizon",
            reason: "averaging horizon must be positive",
        });
    }
    let disp = dispersion(k_mag, params);
    let w = disp.eps_lambda;
    let tau_min = (-t1.min(t2)).max(0.0);
    let numeric_end = tau_min.min(horizon);

    let t_solve = (t1.max(t2) + numeric_end).max(0.0);
    let traj = solve_modes(k_mag, prof, params, t_solve, tol)?;
    let pair = bogoliubov(&traj)?;

    let mut tt = Complex64::new(0.0, 0.0);
    let mut tt_bar = Complex64::new(0.0, 0.0);
    if numeric_end > 0.0 {
        let panels = libm::ceil(2.0 * disp.eps.max(w) * numeric_end).max(1.0) as usize;
        let points = GaussLegendre::new(16).composite(0.0, numeric_end, panels);
        let s1: Vec<f64> = points.iter().map(|p| t1 + p.0).collect();
        let s2: Vec<f64> = points.iter().map(|p| t2 + p.0).collect();
        let v1 = traj.sample(&s1)?;
        let v2 = traj.sample(&s2)?;
        let a: Vec<Complex64> = points
            .iter()
            .zip(v1.iter().zip(&v2))
            .map(|(p, (x, y))| x[0] * y[0] * p.1)
            .collect();
        let b: Vec<Complex64> = points
            .iter()
            .zip(v1.iter().zip(&v2))
            .map(|(p, (x, y))| x[0] * y[0].conj() * p.1)
            .collect();
        tt += pairwise_sum(&a);
        tt_bar += pairwise_sum(&b);
    }
    if horizon > tau_min {
        let (lo, hi) = (tau_min, horizon);
        let (ap, am) = (pair.a_plus, pair.a_minus);
        let norm = 1.0 / (2.0 * w);
        let len = Complex64::new(hi - lo, 0.0);
        let down_sum = Complex64::new(0.0, -w * (t1 + t2)).exp();
        let rel = Complex64::new(0.0, -w * (t1 - t2)).exp();
        let osc_down = oscillatory_integral(-2.0 * w, lo, hi);
        let osc_up = oscillatory_integral(2.0 * w, lo, hi);
        tt += (ap * ap * down_sum * osc_down
            + am * am * down_sum.conj() * osc_up
            + ap * am * (rel + rel.conj()) * len)
            * norm;
        tt_bar += (rel * ap.norm_sqr() * len
            + rel.conj() * am.norm_sqr() * len
            + ap * am.conj() * down_sum * osc_down
            + am * ap.conj() * down_sum.conj() * osc_up)
            * norm;
    }
    Ok(ErgodicAverages {
        tt: tt / horizon,
        tt_bar: tt_bar / horizon,
    })
}
