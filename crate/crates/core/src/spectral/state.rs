use alloc::string::String;
use alloc::vec::Vec;

use crate::modes::{bogoliubov, solve_modes, BogoliubovPair, SwitchingProfile};
use crate::ode::Tolerance;
use crate::thermal::{bose_coefficient, dispersion, Sign, ThermalParams};
use crate::{Error, Result};

/// Which dispersion relation a state's modes oscillate with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `ε(k) = sqrt(|k|² + m²)`
    Free,
    /// `ε_λ(k) = sqrt(|k|² + m² + λm₀²)`
    Shifted,
}

impl Branch {
    pub fn frequency(self, k_mag: f64, params: &ThermalParams) -> f64 {
        let d = dispersion(k_mag, params);
        match self {
            Branch::Free => d.eps,
            Branch::Shifted => d.eps_lambda,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Free => "free",
            Branch::Shifted => "shifted",
        }
    }
}

/// `(k, A±(k))` samples, sorted by `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovTable {
    entries: Vec<(f64, BogoliubovPair)>,
}

impl BogoliubovTable {
    pub fn new(mut entries: Vec<(f64, BogoliubovPair)>) -> Self {
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self { entries }
    }

    pub fn entries(&self) -> &[(f64, BogoliubovPair)] {
        &self.entries
    }

    pub fn lookup(&self, k_mag: f64) -> Option<&BogoliubovPair> {
        let i = self
            .entries
            .partition_point(|e| e.0 < k_mag - 1e-12 * k_mag.max(1.0));
        self.entries
            .get(i)
            .filter(|e| (e.0 - k_mag).abs() <= 1e-12 * k_mag.max(1.0))
            .map(|e| &e.1)
    }
}

/// Solves the mode equation at every `k` and records `A±` matched at `t = 0`.
pub fn bogoliubov_table(
    params: &ThermalParams,
    prof: &SwitchingProfile,
    k_nodes: &[f64],
    tol: Tolerance,
) -> Result<BogoliubovTable> {
    let entries = k_nodes
        .iter()
        .map(|&k| {
            let traj = solve_modes(k, prof, params, 0.0, tol)?;
            Ok((k, bogoliubov(&traj)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BogoliubovTable::new(entries))
}

/// How `c±(k)` is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    /// `c± = b±(β, ω(k))` with `ω` taken from the given branch.
    Thermal { frequency: Branch },
    /// `c₊ = Σ± b±(β,ε)|A±|²`, `c₋ = Σ± b±(β,ε)|A∓|²` from tabulated
    /// Bogoliubov coefficients.
    Bogoliubov(BogoliubovTable),
}

/// A quasi-free two-point function
/// `ω(f, g) = ∫ dk/(2ω) Σ± c±(k) f̂(±ω, k) ĝ(∓ω, −k)` on one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    params: ThermalParams,
    branch: Branch,
    coefficients: Coefficients,
    label: String,
}

impl SpectralState {
    pub fn params(&self) -> &ThermalParams {
        &self.params
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn frequency(&self, k_mag: f64) -> f64 {
        self.branch.frequency(k_mag, &self.params)
    }

    /// `(c₊(k), c₋(k))`.
    pub fn coefficients_at(&self, k_mag: f64) -> Result<(f64, f64)> {
        let beta = self.params.beta();
        match &self.coefficients {
            Coefficients::Thermal { frequency } => {
                let w = frequency.frequency(k_mag, &self.params);
                Ok((
                    bose_coefficient(Sign::Plus, beta, w),
                    bose_coefficient(Sign::Minus, beta, w),
                ))
            }
            Coefficients::Bogoliubov(table) => {
                let pair = table
                    .lookup(k_mag)
                    .ok_or(Error::MissingTabulation { k: k_mag })?;
                let eps = dispersion(k_mag, &self.params).eps;
                let bp = bose_coefficient(Sign::Plus, beta, eps);
                let bm = bose_coefficient(Sign::Minus, beta, eps);
                let (ap, am) = (pair.a_plus.norm_sqr(), pair.a_minus.norm_sqr());
                Ok((bp * ap + bm * am, bp * am + bm * ap))
            }
        }
    }

    /// Largest `|c₊ − c₋ − 1|` over the given momenta; errors if positivity
    /// `c₊ + c₋ ≥ 0` fails anywhere.
    pub fn ccr_residual(&self, k_nodes: &[f64]) -> Result<f64> {
        let mut worst = 0.0f64;
        for &k in k_nodes {
            let (cp, cm) = self.coefficients_at(k)?;
            if cp + cm < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "state",
                    reason: "positivity c₊ + c₋ ≥ 0 violated",
                });
            }
            worst = worst.max((cp - cm - 1.0).abs());
        }
        Ok(worst)
    }
}

/// The free KMS state at inverse temperature `β`: `c± = b±(β, ε)` on the free
/// branch.
pub fn free_kms(params: &ThermalParams) -> SpectralState {
    SpectralState {
        params: *params,
        branch: Branch::Free,
        coefficients: Coefficients::Thermal {
            frequency: Branch::Free,
        },
        label: "free_kms".into(),
    }
}

/// μ → ∞ limit of the thermal state pulled back by the classical Møller map:
/// shifted-branch modes carrying the unshifted coefficients `b±(β, ε)`.
pub fn adiabatic_classical(params: &ThermalParams) -> SpectralState {
    SpectralState {
        params: *params,
        branch: Branch::Shifted,
        coefficients: Coefficients::Thermal {
            frequency: Branch::Free,
        },
        label: "adiabatic_classical".into(),
    }
}

/// The KMS state at squared mass `m² + λm₀²`: `c± = b±(β, ε_λ)` on the shifted
/// branch.
pub fn adiabatic(params: &ThermalParams) -> SpectralState {
    SpectralState {
        params: *params,
        branch: Branch::Shifted,
        coefficients: Coefficients::Thermal {
            frequency: Branch::Shifted,
        },
        label: "adiabatic".into(),
    }
}

/// Default tolerance on `|A₊|² − |A₋|² − 1` accepted by [`ness_classical`].
pub const BOGOLIUBOV_NORMALIZATION_TOL: f64 = 1e-8;

/// Ergodic mean of the classically pulled-back thermal state.
pub fn ness_classical(params: &ThermalParams, table: BogoliubovTable) -> Result<SpectralState> {
    for (k, pair) in table.entries() {
        let residual = pair.normalization_residual();
        if residual.is_nan() || residual.abs() > BOGOLIUBOV_NORMALIZATION_TOL {
            return Err(Error::BogoliubovNormalization { k: *k, residual });
        }
    }
    Ok(SpectralState {
        params: *params,
        branch: Branch::Shifted,
        coefficients: Coefficients::Bogoliubov(table),
        label: "ness_classical".into(),
    })
}
