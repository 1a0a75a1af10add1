//! The ten acceptance criteria with their pinned tolerances and time budgets.

use std::fmt;
use std::time::{Duration, Instant};

use adiabatic_kms::combinatorics::{
    assemble_moments, connected_from_moments, eulerian_row_by_enumeration, eulerian_row_recursive,
    factorial, wick_moments, SubsetTable,
};
use adiabatic_kms::modes::{
    bogoliubov, solve_modes, sudden_quench_coefficients, switch_integrals_on, BogoliubovPair,
    SwitchIntegrals, SwitchingProfile,
};
use adiabatic_kms::ode::Tolerance;
use adiabatic_kms::quadrature::pairwise_sum;
use adiabatic_kms::series::{verify_resummation, Verdict, DUAL_PATH_TOL};
use adiabatic_kms::spectral::{
    adiabatic_classical, bogoliubov_table, finite_mu_integrand, ness_classical, pair,
    BogoliubovTable,
};
use adiabatic_kms::thermal::{
    bose_coefficient, bose_derivative, dispersion, shifted_beta, Sign, ThermalParams,
};
use adiabatic_kms::Complex64;
use rayon::prelude::*;

use crate::{CliError, RunConfig};

pub const CRITERIA: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

pub const EULERIAN_MAX_ORDER: usize = 8;
pub const DERIVATIVE_POINTS: [(f64, f64); 3] = [(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)];
pub const DERIVATIVE_MAX_ORDER: usize = 4;
pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const RESUMMATION_IDENTITY_TOL: f64 = 1e-12;
pub const WRONSKIAN_TOL: f64 = 1e-8;
pub const LADDER_MU: [f64; 4] = [5.0, 10.0, 20.0, 40.0];
pub const LEMMA2_K: [f64; 2] = [0.0, 1.0];
pub const LEMMA2_LAMBDA: f64 = 0.5;
pub const LEMMA2_FINAL_TOL: f64 = 1e-2;
pub const LEMMA1_FINAL_TOL: f64 = 1e-2;
pub const SERIES_ORDER: usize = 8;
pub const SERIES_TOL: f64 = 1e-8;
pub const NORMALIZATION_TOL: f64 = 1e-8;
pub const SUDDEN_TOL: f64 = 1e-3;
pub const NESS_CCR_TOL: f64 = 1e-10;
pub const NESS_TRIVIAL_TOL: f64 = 1e-12;
pub const CUMULANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub measured: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !matches!(self.status, Status::Fail)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match &self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped(_) => "SKIPPED",
        };
        write!(
            f,
            "[{tag}] {:>2} {}: {} ({:.2} s of {} s)",
            self.id,
            self.name,
            self.measured,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )?;
        if let Status::Skipped(reason) = &self.status {
            write!(f, " reason: {reason}")?;
        }
        Ok(())
    }
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "Eulerian cross-oracle",
        2 => "derivative tower",
        3 => "resummation identity",
        4 => "Wronskian health",
        5 => "switching-integral ladder",
        6 => "classical adiabatic pairing ladder",
        7 => "perturbative resummation",
        8 => "Bogoliubov normalization and sudden quench",
        9 => "NESS spectral data",
        10 => "connected-function oracle",
        _ => "unknown",
    }
}

pub fn budget(id: u8) -> Duration {
    Duration::from_secs(match id {
        1 | 9 | 10 => 5,
        2 | 3 => 1,
        4 | 8 => 30,
        5 | 7 => 60,
        6 => 120,
        _ => 0,
    })
}

struct Outcome {
    ok: bool,
    measured: String,
    skipped: Option<String>,
}

impl Outcome {
    fn new(ok: bool, measured: String) -> Self {
        Self {
            ok,
            measured,
            skipped: None,
        }
    }
}

pub fn run_criterion(id: u8, cfg: &RunConfig) -> Result<CriterionReport, CliError> {
    let start = Instant::now();
    let outcome = match id {
        1 => eulerian()?,
        2 => derivative_tower()?,
        3 => resummation_identity()?,
        4 => wronskian_health(cfg)?,
        5 => lemma2_ladder(cfg)?,
        6 => lemma1_ladder(cfg)?,
        7 => series(cfg)?,
        8 => bogoliubov_checks(cfg)?,
        9 => ness(cfg)?,
        10 => cumulants()?,
        _ => return Err(CliError::Config(format!("no acceptance criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let budget = budget(id);
    let in_time = elapsed <= budget;
    let mut measured = outcome.measured;
    if !in_time {
        measured.push_str("; over time budget");
    }
    let status = match outcome.skipped {
        Some(reason) => Status::Skipped(reason),
        None if outcome.ok && in_time => Status::Pass,
        None => Status::Fail,
    };
    Ok(CriterionReport {
        id,
        name: name(id),
        status,
        measured,
        elapsed,
        budget,
    })
}

fn eulerian() -> Result<Outcome, CliError> {
    let mut ok = true;
    for n in 1..=EULERIAN_MAX_ORDER {
        let r = eulerian_row_recursive(n)?;
        let e = eulerian_row_by_enumeration(n)?;
        ok &= r == e && r.sum() == factorial(n);
    }
    Ok(Outcome::new(
        ok,
        format!(
            "rows 1..={EULERIAN_MAX_ORDER} {}",
            if ok { "match" } else { "differ" }
        ),
    ))
}

/// `d^n f / dx^n` from central differences at steps `h`, `h/2`, `h/4`, with
/// two Richardson extrapolation passes removing the `h²` and `h⁴` errors.
pub fn richardson_derivative(f: &dyn Fn(f64) -> f64, x: f64, n: usize, h: f64) -> f64 {
    let central = |h: f64| {
        let mut binom = 1.0;
        let mut sum = 0.0;
        for j in 0..=n {
            let offset = (n as f64 / 2.0 - j as f64) * h;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * f(x + offset);
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        sum / h.powi(n as i32)
    };
    let d = [central(h), central(h / 2.0), central(h / 4.0)];
    let r1 = [(4.0 * d[1] - d[0]) / 3.0, (4.0 * d[2] - d[1]) / 3.0];
    (16.0 * r1[1] - r1[0]) / 15.0
}

fn derivative_tower() -> Result<Outcome, CliError> {
    let mut worst = 0.0f64;
    for &(beta, eps) in &DERIVATIVE_POINTS {
        let b = |x: f64| bose_coefficient(Sign::Plus, x, eps);
        for n in 1..=DERIVATIVE_MAX_ORDER {
            let exact = bose_derivative(n, Sign::Plus, beta, eps)?;
            let h = 0.05 * beta.min(1.0 / eps);
            let fd = richardson_derivative(&b, beta, n, h);
            worst = worst.max((fd - exact).abs() / exact.abs());
        }
    }
    Ok(Outcome::new(
        worst <= DERIVATIVE_TOL,
        format!("max relative deviation {worst:.3e} (tol {DERIVATIVE_TOL:e})"),
    ))
}

fn resummation_identity() -> Result<Outcome, CliError> {
    let mut worst = 0.0f64;
    for i in 0..10 {
        let lambda = -0.5 + 0.25 * i as f64;
        let p = ThermalParams::new(1.0, 1.0, 1.0, lambda)?;
        for j in 0..10 {
            let k = 0.5 * j as f64;
            let d = dispersion(k, &p);
            let b2 = shifted_beta(&p, &d);
            for s in Sign::BOTH {
                let lhs = bose_coefficient(s, b2, d.eps);
                let rhs = bose_coefficient(s, p.beta(), d.eps_lambda);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(Outcome::new(
        worst <= RESUMMATION_IDENTITY_TOL,
        format!("max |b(beta', eps) - b(beta, eps_lambda)| = {worst:.3e} on 100 points"),
    ))
}

fn lemma2_params() -> Result<ThermalParams, CliError> {
    Ok(ThermalParams::new(1.0, 1.0, 1.0, LEMMA2_LAMBDA)?)
}

/// Trajectories of the kind every other criterion solves: the switching
/// ladder, the ladder carried out to the packet region, and short switches.
fn wronskian_health(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = [lemma2_params()?, cfg.thermal_params()?];
    let (f, g) = cfg.packet_pair()?;
    let t_far = (f.time_support().1).max(g.time_support().1).max(1.0);
    let tol = cfg.ode_tolerance();
    let mut jobs = Vec::new();
    for (pi, _) in params.iter().enumerate() {
        for &mu in LADDER_MU
            .iter()
            .chain(&[cfg.profile.mu, cfg.profile.sudden_mu])
        {
            for k in [0.0, 0.5, 1.0, 2.0, 4.0] {
                jobs.push((pi, mu, k));
            }
        }
    }
    let devs = jobs
        .par_iter()
        .map(|&(pi, mu, k)| {
            let prof = SwitchingProfile::new(mu)?;
            let traj = solve_modes(k, &prof, &params[pi], t_far, tol)?;
            Ok(traj.max_wronskian_deviation())
        })
        .collect::<Result<Vec<f64>, adiabatic_kms::Error>>()?;
    let worst = devs.iter().copied().fold(0.0, f64::max);
    Ok(Outcome::new(
        worst <= WRONSKIAN_TOL,
        format!("max |W - i| = {worst:.3e} over {} trajectories", devs.len()),
    ))
}

/// `(|I_abs − 1/(ε_λ+ε)|, |I_sq|)` along the μ ladder at one `k`.
pub fn lemma2_gaps(k: f64, tol: Tolerance) -> Result<Vec<(f64, f64)>, CliError> {
    let p = lemma2_params()?;
    let d = dispersion(k, &p);
    let target = SwitchIntegrals::abs_limit(d.eps, d.eps_lambda);
    LADDER_MU
        .par_iter()
        .map(|&mu| {
            let prof = SwitchingProfile::new(mu)?;
            let traj = solve_modes(k, &prof, &p, 0.0, tol)?;
            let r = switch_integrals_on(&traj)?;
            Ok(((r.i_abs - target).abs(), r.i_sq.norm()))
        })
        .collect()
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn lemma2_ladder(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &k in &LEMMA2_K {
        let gaps = lemma2_gaps(k, cfg.ode_tolerance())?;
        let abs: Vec<f64> = gaps.iter().map(|g| g.0).collect();
        let sq: Vec<f64> = gaps.iter().map(|g| g.1).collect();
        ok &= strictly_decreasing(&abs) && strictly_decreasing(&sq);
        ok &= abs[abs.len() - 1] <= LEMMA2_FINAL_TOL && sq[sq.len() - 1] <= LEMMA2_FINAL_TOL;
        parts.push(format!(
            "k={k}: I_abs gap {:.2e} -> {:.2e}, |I_sq| {:.2e} -> {:.2e}",
            abs[0],
            abs[abs.len() - 1],
            sq[0],
            sq[sq.len() - 1]
        ));
    }
    Ok(Outcome::new(ok, parts.join("; ")))
}

/// Relative gap between the finite-μ pairing and its classical adiabatic
/// limit along the μ ladder.
pub fn lemma1_gaps(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let p = cfg.thermal_params()?;
    let (f, g) = cfg.packet_pair()?;
    let quad = cfg.radial_quadrature()?;
    let target = pair(
        &adiabatic_classical(&p),
        &f,
        &g,
        &quad,
        cfg.tolerance("pairing_refinement"),
    )?
    .value;
    let tol = cfg.ode_tolerance();
    let points = quad.points();
    LADDER_MU
        .iter()
        .map(|&mu| {
            let prof = SwitchingProfile::new(mu)?;
            let terms = points
                .par_iter()
                .map(|&(k, w)| Ok(finite_mu_integrand(&prof, &p, &f, &g, k, tol)? * w))
                .collect::<Result<Vec<Complex64>, adiabatic_kms::Error>>()?;
            Ok((pairwise_sum(&terms) - target).norm() / target.norm())
        })
        .collect()
}

fn lemma1_ladder(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let gaps = lemma1_gaps(cfg)?;
    let last = gaps[gaps.len() - 1];
    let ok = last <= LEMMA1_FINAL_TOL && strictly_decreasing(&gaps);
    let list: Vec<String> = gaps.iter().map(|g| format!("{g:.2e}")).collect();
    Ok(Outcome::new(
        ok,
        format!("relative gaps over mu ladder [{}]", list.join(", ")),
    ))
}

fn series(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.thermal_params()?;
    let (f, g) = cfg.packet_pair()?;
    let quad = cfg.radial_quadrature()?;
    let r = verify_resummation(&p, &f, &g, &quad, SERIES_ORDER, SERIES_TOL)?;
    let measured = format!(
        "gap at N={SERIES_ORDER}: {:.3e}, max dual-path deviation {:.3e}, radius ratio {:.3}",
        r.final_gap(),
        r.max_dual_path_deviation(),
        r.radius_ratio
    );
    if r.verdict == Verdict::NotExpectedToConverge {
        return Ok(Outcome {
            ok: true,
            measured,
            skipped: Some(crate::formats::RADIUS_REASON.to_string()),
        });
    }
    let ok = r.final_gap() <= SERIES_TOL && r.max_dual_path_deviation() <= DUAL_PATH_TOL;
    Ok(Outcome::new(ok, measured))
}

fn bogoliubov_checks(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = [lemma2_params()?, cfg.thermal_params()?];
    let tol = cfg.ode_tolerance();
    let ks = [0.0, 0.5, 1.0, 2.0, 4.0];
    let mut jobs = Vec::new();
    for pi in 0..params.len() {
        for &mu in LADDER_MU.iter().chain(&[cfg.profile.mu]) {
            for &k in &ks {
                jobs.push((pi, mu, k));
            }
        }
    }
    let norms = jobs
        .par_iter()
        .map(|&(pi, mu, k)| {
            let prof = SwitchingProfile::new(mu)?;
            let traj = solve_modes(k, &prof, &params[pi], 0.0, tol)?;
            Ok(bogoliubov(&traj)?.normalization_residual().abs())
        })
        .collect::<Result<Vec<f64>, adiabatic_kms::Error>>()?;
    let worst_norm = norms.iter().copied().fold(0.0, f64::max);
    let sudden = SwitchingProfile::new(cfg.profile.sudden_mu)?;
    let mut worst_sudden = 0.0f64;
    for p in &params {
        for &k in &ks {
            let traj = solve_modes(k, &sudden, p, 0.0, tol)?;
            let a = bogoliubov(&traj)?;
            let oracle = sudden_quench_coefficients(&traj.dispersion());
            worst_sudden = worst_sudden.max(a.max_abs_difference(&oracle));
        }
    }
    Ok(Outcome::new(
        worst_norm <= NORMALIZATION_TOL && worst_sudden <= SUDDEN_TOL,
        format!(
            "max normalization residual {worst_norm:.3e}; sudden-quench deviation {worst_sudden:.3e} at mu={}",
            cfg.profile.sudden_mu
        ),
    ))
}

/// Bogoliubov table at the radial nodes, one mode solve per node in parallel.
pub fn ness_table(cfg: &RunConfig) -> Result<BogoliubovTable, CliError> {
    let p = cfg.thermal_params()?;
    let prof = SwitchingProfile::new(cfg.profile.mu)?;
    let tol = cfg.ode_tolerance();
    let ks: Vec<f64> = cfg
        .radial_quadrature()?
        .points()
        .iter()
        .map(|q| q.0)
        .collect();
    let parts = ks
        .par_iter()
        .map(|&k| bogoliubov_table(&p, &prof, &[k], tol))
        .collect::<Result<Vec<_>, adiabatic_kms::Error>>()?;
    Ok(BogoliubovTable::new(
        parts
            .iter()
            .flat_map(|t| t.entries().iter().copied())
            .collect(),
    ))
}

fn ness(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.thermal_params()?;
    let table = ness_table(cfg)?;
    let ks: Vec<f64> = table.entries().iter().map(|e| e.0).collect();
    let state = ness_classical(&p, table)?;
    let ccr = state.ccr_residual(&ks)?;
    let trivial = ness_classical(
        &p,
        BogoliubovTable::new(ks.iter().map(|&k| (k, BogoliubovPair::TRIVIAL)).collect()),
    )?;
    let reference = adiabatic_classical(&p);
    let mut worst = 0.0f64;
    for &k in &ks {
        let (a, b) = (trivial.coefficients_at(k)?, reference.coefficients_at(k)?);
        worst = worst.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
    }
    Ok(Outcome::new(
        ccr <= NESS_CCR_TOL && worst <= NESS_TRIVIAL_TOL,
        format!(
            "CCR residual {ccr:.3e} over {} nodes; A_-=0 deviation {worst:.3e}",
            ks.len()
        ),
    ))
}

fn cumulants() -> Result<Outcome, CliError> {
    let mut round_trip_exact = true;
    let mut worst = 0.0f64;
    for n in 1..=6 {
        // integer-valued moments: the inversion is exact in floating point
        let moments = SubsetTable::from_fn(n, |m| {
            let m = m as i64;
            Complex64::new(
                ((m * 37 + 11) % 23 - 11) as f64,
                ((m * 53 + 7) % 19 - 9) as f64,
            )
        })?;
        let back = assemble_moments(&connected_from_moments(&moments));
        round_trip_exact &= back.max_abs_difference(&moments) == 0.0;
    }
    for n in 3..=6 {
        let two_point = |i: usize, j: usize| {
            let (a, b) = (i as f64, j as f64);
            Complex64::new(1.0 / (1.0 + a + 2.0 * b), 0.3 * (a - b).cos())
        };
        let connected = connected_from_moments(&wick_moments(n, two_point)?);
        for (mask, v) in connected.iter() {
            if mask.count_ones() >= 3 {
                worst = worst.max(v.norm());
            }
        }
    }
    Ok(Outcome::new(
        round_trip_exact && worst <= CUMULANT_TOL,
        format!(
            "round trip {}; max higher connected part {worst:.3e}",
            if round_trip_exact { "exact" } else { "inexact" }
        ),
    ))
}
