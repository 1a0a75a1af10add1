use alloc::vec::Vec;

use num_complex::Complex64;

use super::profile::{instantaneous_frequency, SwitchingProfile};
use crate::ode::{ComplexSystem, Dopri5, Tolerance};
use crate::thermal::{dispersion, DispersionPair, ThermalParams};
use crate::{Error, Result};

/// `(T, Ṫ)` at one instant.
pub type ModeState = [Complex64; 2];

/// The mode equation `T̈ + ε_μ(k, t)² T = 0` for one momentum and profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEquation {
    k_mag: f64,
    disp: DispersionPair,
    profile: SwitchingProfile,
}

impl ModeEquation {
    pub fn new(k_mag: f64, profile: SwitchingProfile, params: &ThermalParams) -> Self {
        Self {
            k_mag,
            disp: dispersion(k_mag, params),
            profile,
        }
    }

    pub fn k_mag(&self) -> f64 {
        self.k_mag
    }

    pub fn dispersion(&self) -> DispersionPair {
        self.disp
    }

    pub fn profile(&self) -> SwitchingProfile {
        self.profile
    }

    /// Time at which integration starts, one unit before the switch.
    pub fn initial_time(&self) -> f64 {
        self.profile.switch_start() - 1.0
    }

    /// The incoming plane wave `e^{−iεt}/sqrt(2ε)` and its derivative, valid
    /// for `t ≤ −μ`.
    pub fn free_state(&self, t: f64) -> ModeState {
        let eps = self.disp.eps;
        let value = Complex64::new(0.0, -eps * t).exp() / libm::sqrt(2.0 * eps);
        [value, value * Complex64::new(0.0, -eps)]
    }

    pub fn frequency(&self, t: f64) -> f64 {
        instantaneous_frequency(&self.disp, &self.profile, t)
    }

    fn frequency_sq(&self, t: f64) -> f64 {
        self.disp.eps * self.disp.eps + self.disp.gap_sq() * self.profile.chi(t)
    }

    fn max_frequency(&self) -> f64 {
        self.disp.eps.max(self.disp.eps_lambda)
    }
}

impl ComplexSystem<2> for ModeEquation {
    fn rhs(&self, t: f64, y: &ModeState) -> ModeState {
        [y[1], -y[0] * self.frequency_sq(t)]
    }
}

/// `conj(Ṫ) T − conj(T) Ṫ`; equal to `i` for correctly normalised modes.
pub fn wronskian(state: &ModeState) -> Complex64 {
    state[1].conj() * state[0] - state[0].conj() * state[1]
}

/// Sampled solution of the mode equation on `[t₀, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory {
    equation: ModeEquation,
    tol: Tolerance,
    grid: Vec<f64>,
    values: Vec<ModeState>,
}

impl ModeTrajectory {
    pub fn equation(&self) -> &ModeEquation {
        &self.equation
    }

    pub fn k_mag(&self) -> f64 {
        self.equation.k_mag
    }

    pub fn mu(&self) -> f64 {
        self.equation.profile.mu()
    }

    pub fn dispersion(&self) -> DispersionPair {
        self.equation.disp
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[ModeState] {
        &self.values
    }

    pub fn t_start(&self) -> f64 {
        self.grid[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// `max_t |W(t) − i|` over the stored samples.
    pub fn max_wronskian_deviation(&self) -> f64 {
        self.values
            .iter()
            .map(|s| (wronskian(s) - Complex64::i()).norm())
            .fold(0.0, f64::max)
    }

    /// `max_t |T(t)|` over the stored samples.
    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|s| s[0].norm()).fold(0.0, f64::max)
    }

    /// Mode values at the given non-decreasing times. Times before `t₀` use the
    /// incoming plane wave; later ones are integrated from the nearest stored
    /// sample at or before the first requested time.
    pub fn sample(&self, times: &[f64]) -> Result<Vec<ModeState>> {
        let mut out = Vec::with_capacity(times.len());
        let t0 = self.t_start();
        let end = self.t_end();
        let solver = Dopri5::new(self.tol);
        let mut cursor: Option<(f64, ModeState, f64)> = None;
        let mut prev = f64::NEG_INFINITY;
        for &t in times {
            if t < prev {
                return Err(Error::InvalidParameter {
                    name: "times",
                    reason: "sample times must be non-decreasing",
                });
            }
            prev = t;
            if t <= t0 {
                out.push(self.equation.free_state(t));
                continue;
            }
            if t > end {
                return Err(Error::OutsideTrajectory { t, start: t0, end });
            }
            let (mut tc, mut yc, mut h) = match cursor {
                Some(c) => c,
                None => {
                    let idx = self.grid.partition_point(|&g| g <= t) - 1;
                    let h = self
                        .grid
                        .get(idx + 1)
                        .map_or(0.01, |&next| next - self.grid[idx]);
                    (self.grid[idx], self.values[idx], h)
                }
            };
            solver.advance(&self.equation, &mut tc, &mut yc, t, &mut h, |_, _| {})?;
            out.push(yc);
            cursor = Some((tc, yc, h));
        }
        Ok(out)
    }

    pub fn value_at(&self, t: f64) -> Result<ModeState> {
        Ok(self.sample(&[t])?[0])
    }
}

/// Integrates the mode equation from `t₀ = −μ − 1` (plane-wave data) to
/// `t_max`, recording every accepted step.
pub fn solve_modes(
    k_mag: f64,
    prof: &SwitchingProfile,
    params: &ThermalParams,
    t_max: f64,
    tol: Tolerance,
) -> Result<ModeTrajectory> {
    let equation = ModeEquation::new(k_mag, *prof, params);
    solve_equation(equation, t_max, tol)
}

pub(crate) fn solve_equation(
    equation: ModeEquation,
    t_max: f64,
    tol: Tolerance,
) -> Result<ModeTrajectory> {
    let t0 = equation.initial_time();
    if !t_max.is_finite() || t_max < t0 {
        return Err(Error::InvalidParameter {
            name: "t_max",
            reason: "final time must be finite and not precede the initial time",
        });
    }
    let mut t = t0;
    let mut y = equation.free_state(t0);
    let mut grid = alloc::vec![t0];
    let mut values = alloc::vec![y];
    let mut h = 0.05 / equation.max_frequency();
    Dopri5::new(tol).advance(&equation, &mut t, &mut y, t_max, &mut h, |ts, ys| {
        grid.push(ts);
        values.push(*ys);
    })?;
    Ok(ModeTrajectory {
        equation,
        tol,
        grid,
        values,
    })
}

/// A bound on `|T_{k,μ}(t)|` valid for every `t` and `μ`:
/// `|T|² ≤ ε / min(ε, ε_λ)²`.
///
/// With `E = |Ṫ|² + ε_μ²|T|²` one has `Ė = 2 ε_μ ε̇_μ |T|²`. For an increasing
/// frequency `E/ε_μ²` is non-increasing, giving `|T|² ≤ 1/ε`; for a
/// decreasing one `E` is non-increasing, giving `|T|² ≤ ε/ε_λ²`.
pub fn uniform_mode_bound(disp: &DispersionPair) -> f64 {
    libm::sqrt(disp.eps) / disp.eps.min(disp.eps_lambda)
}
