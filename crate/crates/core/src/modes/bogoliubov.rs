use num_complex::Complex64;

use super::trajectory::{ModeState, ModeTrajectory};
use crate::thermal::DispersionPair;
use crate::{Error, Result};

/// Amplitudes of `T(t) = (A₊ e^{−iε_λ t} + A₋ e^{iε_λ t}) / sqrt(2ε_λ)` on the
/// region `t ≥ 0` where the perturbation is fully on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
}

impl BogoliubovPair {
    pub const TRIVIAL: BogoliubovPair = BogoliubovPair {
        a_plus: Complex64::new(1.0, 0.0),
        a_minus: Complex64::new(0.0, 0.0),
    };

    /// `|A₊|² − |A₋|² − 1`.
    pub fn normalization_residual(&self) -> f64 {
        self.a_plus.norm_sqr() - self.a_minus.norm_sqr() - 1.0
    }

    /// The mode and its derivative at `t ≥ 0`.
    pub fn mode_state(&self, eps_lambda: f64, t: f64) -> ModeState {
        let norm = 1.0 / libm::sqrt(2.0 * eps_lambda);
        let down = Complex64::new(0.0, -eps_lambda * t).exp();
        let up = down.conj();
        let w = Complex64::new(0.0, eps_lambda);
        [
            (self.a_plus * down + self.a_minus * up) * norm,
            (-self.a_plus * down + self.a_minus * up) * w * norm,
        ]
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        (self.a_plus - other.a_plus)
            .norm()
            .max((self.a_minus - other.a_minus).norm())
    }
}

/// Solves the 2×2 matching system for `A±` from `(T, Ṫ)` at `t* ≥ 0`:
/// `A± e^{∓iε_λ t*} = sqrt(2ε_λ)/2 (T ± iṪ/ε_λ)`. The basis matrix has
/// determinant `i`, so the system is never singular.
pub fn match_plane_waves(state: &ModeState, eps_lambda: f64, t_star: f64) -> BogoliubovPair {
    let scale = 0.5 * libm::sqrt(2.0 * eps_lambda);
    let i_dot = Complex64::i() * state[1] / eps_lambda;
    BogoliubovPair {
        a_plus: (state[0] + i_dot) * scale * Complex64::new(0.0, eps_lambda * t_star).exp(),
        a_minus: (state[0] - i_dot) * scale * Complex64::new(0.0, -eps_lambda * t_star).exp(),
    }
}

/// Bogoliubov coefficients read off the trajectory at `t* ≥ 0`.
pub fn bogoliubov_at(traj: &ModeTrajectory, t_star: f64) -> Result<BogoliubovPair> {
    if t_star < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t_star",
            reason: "matching time must lie in the flat region t ≥ 0",
        });
    }
    let state = traj.value_at(t_star)?;
    Ok(match_plane_waves(
        &state,
        traj.dispersion().eps_lambda,
        t_star,
    ))
}

/// Bogoliubov coefficients matched at `t* = 0`.
pub fn bogoliubov(traj: &ModeTrajectory) -> Result<BogoliubovPair> {
    bogoliubov_at(traj, 0.0)
}

/// Coefficients for an instantaneous switch at `t = 0`, obtained by
/// continuing `T` and `Ṫ` of the incoming plane wave:
/// `A± = ½ (sqrt(ε_λ/ε) ± sqrt(ε/ε_λ))`.
pub fn sudden_quench_coefficients(disp: &DispersionPair) -> BogoliubovPair {
    let r = libm::sqrt(disp.eps_lambda / disp.eps);
    BogoliubovPair {
        a_plus: Complex64::new(0.5 * (r + 1.0 / r), 0.0),
        a_minus: Complex64::new(0.5 * (r - 1.0 / r), 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{solve_modes, SwitchingProfile};
    use crate::ode::Tolerance;
    use crate::thermal::ThermalParams;

    #[test]
    fn unperturbed_is_trivial() {
        let params = ThermalParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let prof = SwitchingProfile::new(3.0).unwrap();
        let traj = solve_modes(0.5, &prof, &params, 2.0, Tolerance::default()).unwrap();
        let pair = bogoliubov(&traj).unwrap();
        assert!(pair.max_abs_difference(&BogoliubovPair::TRIVIAL) < 1e-8);
    }

    #[test]
    fn matching_inverts_mode_state() {
        let pair = BogoliubovPair {
            a_plus: Complex64::new(1.1, 0.3),
            a_minus: Complex64::new(-0.2, 0.45),
        };
        for t in [0.0, 0.7, 13.0] {
            let back = match_plane_waves(&pair.mode_state(1.3, t), 1.3, t);
            assert!(back.max_abs_difference(&pair) < 1e-13);
        }
    }

    #[test]
    fn extraction_is_time_independent_and_normalised() {
        let params = ThermalParams::new(1.0, 1.0, 1.0, 0.5).unwrap();
        let prof = SwitchingProfile::new(2.0).unwrap();
        let traj = solve_modes(0.0, &prof, &params, 1.5, Tolerance::default()).unwrap();
        let a = bogoliubov_at(&traj, 0.0).unwrap();
        let b = bogoliubov_at(&traj, 1.0).unwrap();
        assert!(a.max_abs_difference(&b) < 1e-9);
        assert!(a.normalization_residual().abs() < 1e-8);
        assert!(a.a_minus.norm() > 1e-6);
        assert!(bogoliubov_at(&traj, -0.5).is_err());
        assert!(bogoliubov_at(&traj, 3.0).is_err());
    }

    #[test]
    fn sudden_quench_normalised() {
        let disp = DispersionPair {
            eps: 1.0,
            eps_lambda: 1.5f64.sqrt(),
        };
        let p = sudden_quench_coefficients(&disp);
        assert!(p.normalization_residual().abs() < 1e-15);
    }
}
