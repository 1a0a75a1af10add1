use num_complex::Complex64;

use super::profile::SwitchingProfile;
use super::trajectory::{solve_modes, ModeTrajectory};
use crate::ode::Tolerance;
use crate::quadrature::{pairwise_sum, GaussLegendre};
use crate::thermal::ThermalParams;
use crate::{Error, Result};

const NODES_PER_PANEL: usize = 16;

/// `I_sq = ∫ T² χ̇_μ dt` and `I_abs = ∫ |T|² χ̇_μ dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchIntegrals {
    pub i_sq: Complex64,
    pub i_abs: f64,
}

impl SwitchIntegrals {
    /// Value `I_abs` tends to as `μ → ∞`: `1/(ε_λ + ε)`.
    pub fn abs_limit(eps: f64, eps_lambda: f64) -> f64 {
        1.0 / (eps + eps_lambda)
    }
}

/// Solves the mode up to `t = 0` and integrates it against `χ̇_μ`.
pub fn switch_integrals(
    k_mag: f64,
    prof: &SwitchingProfile,
    params: &ThermalParams,
    tol: Tolerance,
) -> Result<SwitchIntegrals> {
    let traj = solve_modes(k_mag, prof, params, 0.0, tol)?;
    switch_integrals_on(&traj)
}

/// Composite Gauss–Legendre quadrature over `[−μ, 0]`, about one radian of
/// phase of `T²` per panel.
pub fn switch_integrals_on(traj: &ModeTrajectory) -> Result<SwitchIntegrals> {
    let prof = traj.equation().profile();
    let (lo, hi) = (prof.switch_start(), 0.0);
    if traj.t_start() > lo || traj.t_end() < hi {
        return Err(Error::OutsideTrajectory {
            t: if traj.t_start() > lo { lo } else { hi },
            start: traj.t_start(),
            end: traj.t_end(),
        });
    }
    let disp = traj.dispersion();
    let w_max = disp.eps.max(disp.eps_lambda);
    let panels = libm::ceil(2.0 * w_max * prof.mu()).max(8.0) as usize;
    let rule = GaussLegendre::new(NODES_PER_PANEL);
    let points = rule.composite(lo, hi, panels);
    let times: alloc::vec::Vec<f64> = points.iter().map(|p| p.0).collect();
    let states = traj.sample(&times)?;

    let mut sq = alloc::vec::Vec::with_capacity(points.len());
    let mut abs = alloc::vec::Vec::with_capacity(points.len());
    for (&(t, w), s) in points.iter().zip(&states) {
        let weight = w * prof.chi_dot(t);
        sq.push(s[0] * s[0] * weight);
        abs.push(s[0].norm_sqr() * weight);
    }
    Ok(SwitchIntegrals {
        i_sq: pairwise_sum(&sq),
        i_abs: pairwise_sum(&abs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unperturbed_values() {
        let params = ThermalParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let prof = SwitchingProfile::new(5.0).unwrap();
        let r = switch_integrals(0.0, &prof, &params, Tolerance::default()).unwrap();
        // |T|² = 1/(2ε) and ∫χ̇ = 1, up to integrator error
        assert_relative_eq!(
            r.i_abs,
            SwitchIntegrals::abs_limit(1.0, 1.0),
            max_relative = 1e-9
        );
    }

    #[test]
    fn requires_coverage() {
        let params = ThermalParams::new(1.0, 1.0, 1.0, 0.5).unwrap();
        let prof = SwitchingProfile::new(5.0).unwrap();
        let traj = solve_modes(0.0, &prof, &params, -1.0, Tolerance::default()).unwrap();
        assert!(switch_integrals_on(&traj).is_err());
    }
}
