//! Run configuration: a single JSON document with a schema version.

use std::collections::BTreeMap;
use std::path::Path;

use adiabatic_kms::modes::SwitchingProfile;
use adiabatic_kms::ode::Tolerance;
use adiabatic_kms::spectral::{RadialQuadrature, TestPacket, DEFAULT_RADIAL_NODES};
use adiabatic_kms::thermal::ThermalParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Named tolerances and their defaults. Config files may override any of
/// these but may not introduce new names.
pub const DEFAULT_TOLERANCES: [(&str, f64); 5] = [
    ("ode_rtol", 1e-12),
    ("ode_atol", 1e-14),
    ("pairing_refinement", 1e-9),
    ("series", 1e-8),
    ("ccr", 1e-10),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub beta: f64,
    pub m_sq: f64,
    pub m0_sq: f64,
    pub lambda: f64,
}

impl Default for ParamsSpec {
    fn default() -> Self {
        Self {
            beta: 1.0,
            m_sq: 1.0,
            m0_sq: 1.0,
            lambda: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileSpec {
    /// Switching time used for NESS Bogoliubov tables.
    pub mu: f64,
    /// Near-instantaneous switch compared against the sudden-quench formula.
    pub sudden_mu: f64,
    /// Argument pair `(t₁, t₂)` of the ergodic averages.
    pub ergodic_times: [f64; 2],
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self {
            mu: 1.0,
            sudden_mu: 1e-3,
            ergodic_times: [-2.0, -1.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub k_center: f64,
    pub k_width: f64,
    pub t_center: f64,
    pub t_width: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Ladders {
    pub mu: Vec<f64>,
    pub orders: Vec<usize>,
    pub horizons: Vec<f64>,
}

impl Default for Ladders {
    fn default() -> Self {
        Self {
            mu: vec![5.0, 10.0, 20.0, 40.0],
            orders: (0..=8).collect(),
            horizons: vec![50.0, 100.0, 200.0, 400.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: DEFAULT_RADIAL_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default)]
    pub profile: ProfileSpec,
    #[serde(default = "default_packets")]
    pub packets: Vec<PacketSpec>,
    #[serde(default)]
    pub ladders: Ladders,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_k_values")]
    pub k_values: Vec<f64>,
}

fn default_packets() -> Vec<PacketSpec> {
    [10.0, 11.0]
        .iter()
        .map(|&t_center| PacketSpec {
            k_center: 1.0,
            k_width: 0.5,
            t_center,
            t_width: 1.0,
            amplitude: 1.0,
        })
        .collect()
}

fn default_k_values() -> Vec<f64> {
    vec![0.0, 1.0]
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            params: ParamsSpec::default(),
            profile: ProfileSpec::default(),
            packets: default_packets(),
            ladders: Ladders::default(),
            quadrature: QuadratureSpec::default(),
            tolerances: BTreeMap::new(),
            k_values: default_k_values(),
        }
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn strictly_increasing<T: PartialOrd>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| config_error(format!("schema: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config_error(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.thermal_params()?;
        SwitchingProfile::new(self.profile.mu)
            .map_err(|e| config_error(format!("profile.mu: {e}")))?;
        SwitchingProfile::new(self.profile.sudden_mu)
            .map_err(|e| config_error(format!("profile.sudden_mu: {e}")))?;
        if self.profile.ergodic_times.iter().any(|t| !t.is_finite()) {
            return Err(config_error("profile.ergodic_times must be finite"));
        }
        if self.packets.is_empty() || self.packets.len() > 2 {
            return Err(config_error("packets: give one or two packets"));
        }
        self.packet_pair()?;
        let l = &self.ladders;
        if l.mu.is_empty() || l.orders.is_empty() || l.horizons.is_empty() {
            return Err(config_error("ladders must be non-empty"));
        }
        if !strictly_increasing(&l.mu)
            || !strictly_increasing(&l.orders)
            || !strictly_increasing(&l.horizons)
        {
            return Err(config_error("ladders must be strictly increasing"));
        }
        if l.mu
            .iter()
            .chain(&l.horizons)
            .any(|x| !x.is_finite() || *x <= 0.0)
        {
            return Err(config_error(
                "ladder entries for mu and horizons must be positive",
            ));
        }
        if self.quadrature.radial_nodes == 0 {
            return Err(config_error("quadrature.radial_nodes must be positive"));
        }
        for (name, value) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == name) {
                return Err(config_error(format!("unknown tolerance '{name}'")));
            }
            if !value.is_finite() || *value <= 0.0 {
                return Err(config_error(format!("tolerance '{name}' must be positive")));
            }
        }
        if self.k_values.is_empty() || self.k_values.iter().any(|k| !k.is_finite() || *k < 0.0) {
            return Err(config_error("k_values must be non-empty and non-negative"));
        }
        Ok(())
    }

    pub fn thermal_params(&self) -> Result<ThermalParams, CliError> {
        let p = &self.params;
        ThermalParams::new(p.beta, p.m_sq, p.m0_sq, p.lambda)
            .map_err(|e| config_error(format!("params: {e}")))
    }

    /// `(f, g)`; a single packet is paired with itself.
    pub fn packet_pair(&self) -> Result<(TestPacket, TestPacket), CliError> {
        let build = |s: &PacketSpec| {
            TestPacket::new(s.k_center, s.k_width, s.t_center, s.t_width)
                .map(|p| p.with_amplitude(s.amplitude))
                .map_err(|e| config_error(format!("packets: {e}")))
        };
        let f = build(&self.packets[0])?;
        let g = match self.packets.get(1) {
            Some(s) => build(s)?,
            None => f,
        };
        Ok((f, g))
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .unwrap_or_else(|| panic!("no default for tolerance '{name}'"))
        })
    }

    pub fn ode_tolerance(&self) -> Tolerance {
        Tolerance::new(self.tolerance("ode_rtol"), self.tolerance("ode_atol"))
            .expect("validated positive")
    }

    pub fn radial_quadrature(&self) -> Result<RadialQuadrature, CliError> {
        let (f, g) = self.packet_pair()?;
        RadialQuadrature::for_packets(self.quadrature.radial_nodes, &f, &g)
            .map_err(|e| config_error(format!("quadrature: {e}")))
    }

    /// Twice the radial nodes and a geometric midpoint between neighbouring
    /// μ and horizon ladder entries.
    pub fn refined(&self) -> Self {
        fn densify(xs: &[f64]) -> Vec<f64> {
            let mut out = Vec::with_capacity(2 * xs.len());
            for w in xs.windows(2) {
                out.push(w[0]);
                out.push((w[0] * w[1]).sqrt());
            }
            out.extend(xs.last());
            out
        }
        let mut cfg = self.clone();
        cfg.quadrature.radial_nodes *= 2;
        cfg.ladders.mu = densify(&self.ladders.mu);
        cfg.ladders.horizons = densify(&self.ladders.horizons);
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_takes_defaults() {
        let cfg = RunConfig::from_json(r#"{"schema_version": 1}"#).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.tolerance("series"), 1e-8);
    }

    #[test]
    fn guards() {
        let bad = [
            r#"{"schema_version": 2}"#,
            r#"{"schema_version": 1, "tolerances": {"series": -1e-8}}"#,
            r#"{"schema_version": 1, "tolerances": {"bogus": 1e-8}}"#,
            r#"{"schema_version": 1, "ladders": {"mu": [10, 5]}}"#,
            r#"{"schema_version": 1, "ladders": {"orders": [0, 2, 2]}}"#,
            r#"{"schema_version": 1, "params": {"beta": -1, "m_sq": 1, "m0_sq": 1, "lambda": 0}}"#,
            r#"{"schema_version": 1, "extra": 3}"#,
            r#"{"schema_version": 1, "packets": []}"#,
            r#"{"params": {}}"#,
        ];
        for doc in bad {
            assert!(
                matches!(RunConfig::from_json(doc), Err(CliError::Config(_))),
                "{doc}"
            );
        }
    }

    #[test]
    fn refinement_densifies() {
        let cfg = RunConfig::default().refined();
        assert_eq!(cfg.quadrature.radial_nodes, 128);
        assert_eq!(cfg.ladders.mu.len(), 7);
        assert!((cfg.ladders.mu[1] - 50f64.sqrt()).abs() < 1e-12);
        cfg.validate().unwrap();
    }
}
