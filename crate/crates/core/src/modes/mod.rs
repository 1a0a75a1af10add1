//! Mode functions of the time-dependent oscillator `T̈ + ε_μ(k,t)² T = 0`.
//!
//! Before the switch (`t ≤ −μ`) the mode is the plane wave
//! `e^{−iεt}/sqrt(2ε)`; after it (`t ≥ 0`) it is a combination of
//! `e^{∓iε_λ t}` with Bogoliubov amplitudes `A±`.

mod bogoliubov;
mod ergodic;
mod integrals;
mod profile;
mod trajectory;
mod wkb;

pub use bogoliubov::{
    bogoliubov, bogoliubov_at, match_plane_waves, sudden_quench_coefficients, BogoliubovPair,
};
pub use ergodic::{ergodic_averages, ergodic_limits, ErgodicAverages};
pub use integrals::{switch_integrals, switch_integrals_on, SwitchIntegrals};
pub use profile::{
    chi_value, instantaneous_frequency, smooth_step, smooth_step_derivative, time_frequency,
    SwitchingProfile,
};
pub use trajectory::{
    solve_modes, uniform_mode_bound, wronskian, ModeEquation, ModeState, ModeTrajectory,
};
pub use wkb::{wkb_mode, wkb_phase};
