use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::packet::TestPacket;
use super::state::SpectralState;
use crate::modes::{solve_modes, SwitchingProfile};
use crate::ode::Tolerance;
use crate::quadrature::{pairwise_sum, GaussLegendre};
use crate::thermal::{bose_coefficient, dispersion, Sign, ThermalParams};
use crate::{Error, Result};

pub const DEFAULT_RADIAL_NODES: usize = 64;

/// Gauss–Legendre rule on `[0, k_max]` for radial momentum integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialQuadrature {
    pub nodes: usize,
    pub k_max: f64,
}

impl RadialQuadrature {
    pub fn new(nodes: usize, k_max: f64) -> Result<Self> {
        if nodes == 0 || !k_max.is_finite() || k_max <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "radial quadrature",
                reason: "need at least one node and a positive finite k_max",
            });
        }
        Ok(Self { nodes, k_max })
    }

    /// Cutoff where both packets have decayed below `1e-16` of their peaks.
    pub fn for_packets(nodes: usize, f: &TestPacket, g: &TestPacket) -> Result<Self> {
        Self::new(nodes, f.k_max().min(g.k_max()))
    }

    /// `(k, w)` with the measure `4πk²` folded into `w`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        GaussLegendre::new(self.nodes)
            .mapped(0.0, self.k_max)
            .map(|(k, w)| (k, 4.0 * PI * k * k * w))
            .collect()
    }

    pub fn refined(&self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            ..*self
        }
    }

    /// Momenta used by [`pair`]: this rule followed by its refinement.
    pub fn all_nodes(&self) -> Vec<f64> {
        let mut ks: Vec<f64> = self.points().into_iter().map(|p| p.0).collect();
        ks.extend(self.refined().points().into_iter().map(|p| p.0));
        ks
    }
}

/// `(1/2ω) Σ± c± f̂(±ω, k) ĝ(∓ω, k)` at one momentum.
pub fn pair_integrand(
    state: &SpectralState,
    f: &TestPacket,
    g: &TestPacket,
    k_mag: f64,
) -> Result<Complex64> {
    let w = state.frequency(k_mag);
    let (cp, cm) = state.coefficients_at(k_mag)?;
    let plus = f.hat(w, k_mag) * g.hat(-w, k_mag);
    let minus = f.hat(-w, k_mag) * g.hat(w, k_mag);
    Ok((plus * cp + minus * cm) / (2.0 * w))
}

/// The pairing on a single radial rule.
pub fn pair_at(
    state: &SpectralState,
    f: &TestPacket,
    g: &TestPacket,
    quad: &RadialQuadrature,
) -> Result<Complex64> {
    let terms = quad
        .points()
        .into_iter()
        .map(|(k, w)| Ok(pair_integrand(state, f, g, k)? * w))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingReport {
    /// Value on the refined rule.
    pub value: Complex64,
    /// `|value − value on the base rule|`.
    pub refinement_delta: f64,
    /// Node count of the refined rule.
    pub nodes: usize,
}

/// `ω(f, g)` with a refinement check: the base and doubled rules must agree to
/// `tol` relative to the result.
pub fn pair(
    state: &SpectralState,
    f: &TestPacket,
    g: &TestPacket,
    quad: &RadialQuadrature,
    tol: f64,
) -> Result<PairingReport> {
    let coarse = pair_at(state, f, g, quad)?;
    let fine_quad = quad.refined();
    let value = pair_at(state, f, g, &fine_quad)?;
    let refinement_delta = (value - coarse).norm();
    if refinement_delta > tol * value.norm() {
        return Err(Error::QuadratureNotConverged {
            delta: refinement_delta,
            tol,
        });
    }
    Ok(PairingReport {
        value,
        refinement_delta,
        nodes: fine_quad.nodes,
    })
}

/// Radial integrand of the pulled-back thermal state at finite `μ`:
/// `s_f(k) s_g(k) [b₊ F conj(G) + b₋ conj(F) G]` with `F = ∫ f(t) T_k(t) dt`,
/// `b± = b±(β, ε(k))`.
pub fn finite_mu_integrand(
    prof: &SwitchingProfile,
    params: &ThermalParams,
    f: &TestPacket,
    g: &TestPacket,
    k_mag: f64,
    tol: Tolerance,
) -> Result<Complex64> {
    let disp = dispersion(k_mag, params);
    let omega_max = disp.eps.max(disp.eps_lambda);
    let f_nodes = f.time_nodes(omega_max);
    let g_nodes = g.time_nodes(omega_max);
    let t_max = f_nodes
        .iter()
        .chain(&g_nodes)
        .map(|p| p.0)
        .fold(prof.switch_start() - 1.0, f64::max);
    let traj = solve_modes(k_mag, prof, params, t_max, tol)?;
    let project = |packet: &TestPacket, nodes: &[(f64, f64)]| -> Result<Complex64> {
        let times: Vec<f64> = nodes.iter().map(|p| p.0).collect();
        let states = traj.sample(&times)?;
        let terms: Vec<Complex64> = nodes
            .iter()
            .zip(&states)
            .map(|(&(t, w), s)| s[0] * (packet.temporal(t) * w))
            .collect();
        Ok(pairwise_sum(&terms))
    };
    let big_f = project(f, &f_nodes)?;
    let big_g = project(g, &g_nodes)?;
    let bp = bose_coefficient(Sign::Plus, params.beta(), disp.eps);
    let bm = bose_coefficient(Sign::Minus, params.beta(), disp.eps);
    let spatial = f.spatial(k_mag) * g.spatial(k_mag);
    Ok((big_f * big_g.conj() * bp + big_f.conj() * big_g * bm) * spatial)
}

/// The thermal state pulled back along the switched dynamics at finite `μ`,
/// paired in the time domain.
pub fn pair_finite_mu(
    prof: &SwitchingProfile,
    params: &ThermalParams,
    f: &TestPacket,
    g: &TestPacket,
    quad: &RadialQuadrature,
    tol: Tolerance,
) -> Result<Complex64> {
    let terms = quad
        .points()
        .into_iter()
        .map(|(k, w)| Ok(finite_mu_integrand(prof, params, f, g, k, tol)? * w))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{adiabatic, adiabatic_classical, free_kms};

    fn packets() -> (TestPacket, TestPacket) {
        (
            TestPacket::new(1.0, 0.5, 0.0, 1.0).unwrap(),
            TestPacket::new(0.8, 0.6, 0.7, 1.3).unwrap(),
        )
    }

    fn params(lambda: f64) -> ThermalParams {
        ThermalParams::new(1.0, 1.0, 1.0, lambda).unwrap()
    }

    #[test]
    fn radial_rule_integrates_gaussian_moment() {
        // ∫_0^∞ 4πk² e^{−k²} dk = π^{3/2}
        let q = RadialQuadrature::new(64, 8.0).unwrap();
        let s: f64 = q.points().iter().map(|&(k, w)| w * (-k * k).exp()).sum();
        assert!((s - PI.powf(1.5)).abs() < 1e-13);
    }

    #[test]
    fn vacuum_diagonal_is_positive() {
        let vac = free_kms(&ThermalParams::new(800.0, 1.0, 0.0, 0.0).unwrap());
        assert_eq!(vac.coefficients_at(0.3).unwrap(), (1.0, 0.0));
        let f = TestPacket::new(1.0, 0.2, 0.0, 3.0).unwrap();
        let q = RadialQuadrature::for_packets(64, &f, &f).unwrap();
        let v = pair(&vac, &f, &f, &q, 1e-9).unwrap().value;
        assert!(v.re > 0.0 && v.im.abs() <= 1e-14 * v.re);
    }

    #[test]
    fn commutator_is_state_independent() {
        let (f, g) = packets();
        let p = params(0.3);
        let q = RadialQuadrature::for_packets(64, &f, &g).unwrap();
        let comm = |s: &SpectralState| {
            pair(s, &f, &g, &q, 1e-9).unwrap().value - pair(s, &g, &f, &q, 1e-9).unwrap().value
        };
        let a = comm(&adiabatic(&p));
        let b = comm(&adiabatic_classical(&p));
        assert!((a - b).norm() <= 1e-12 * a.norm());
        let c = comm(&free_kms(&p));
        let d = comm(&free_kms(&p.with_beta(3.0).unwrap()));
        assert!((c - d).norm() <= 1e-12 * c.norm());
    }

    #[test]
    fn swap_conjugates_symmetric_part() {
        let (f, g) = packets();
        let s = adiabatic(&params(0.3));
        let q = RadialQuadrature::for_packets(64, &f, &g).unwrap();
        let fg = pair(&s, &f, &g, &q, 1e-9).unwrap().value;
        let gf = pair(&s, &g, &f, &q, 1e-9).unwrap().value;
        assert!((fg - gf.conj()).norm() <= 1e-12 * fg.norm());
    }

    #[test]
    fn refinement_is_stable() {
        let (f, g) = packets();
        let q = RadialQuadrature::for_packets(64, &f, &g).unwrap();
        let r = pair(&free_kms(&params(0.0)), &f, &g, &q, 1e-9).unwrap();
        assert!(r.refinement_delta <= 1e-9 * r.value.norm());
        assert_eq!(r.nodes, 128);
        let coarse = RadialQuadrature::for_packets(3, &f, &g).unwrap();
        assert!(matches!(
            pair(&free_kms(&params(0.0)), &f, &g, &coarse, 1e-9),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }

    #[test]
    fn two_routes_to_the_shifted_kms_state() {
        let (f, g) = packets();
        let p = params(0.4);
        let p2 = p.shifted_free();
        let q = RadialQuadrature::for_packets(64, &f, &g).unwrap();
        let a = pair(&adiabatic(&p), &f, &g, &q, 1e-9).unwrap().value;
        let b = pair(&adiabatic_classical(&p2), &f, &g, &q, 1e-9)
            .unwrap()
            .value;
        assert!((a - b).norm() <= 1e-13 * a.norm());
    }

    #[test]
    fn finite_mu_without_coupling_is_free_kms() {
        let (f, g) = packets();
        let p = params(0.0);
        let prof = SwitchingProfile::new(2.0).unwrap();
        let q = RadialQuadrature::for_packets(24, &f, &g).unwrap();
        let tol = Tolerance::new(1e-11, 1e-13).unwrap();
        let a = pair_finite_mu(&prof, &p, &f, &g, &q, tol).unwrap();
        let b = pair_at(&free_kms(&p), &f, &g, &q).unwrap();
        assert!((a - b).norm() <= 1e-8 * b.norm(), "{a} {b}");
    }

    #[test]
    fn finite_mu_diagonal_is_real() {
        let f = TestPacket::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let prof = SwitchingProfile::new(2.0).unwrap();
        let q = RadialQuadrature::for_packets(16, &f, &f).unwrap();
        let v = pair_finite_mu(&prof, &params(0.5), &f, &f, &q, Tolerance::default()).unwrap();
        assert!(v.im.abs() <= 1e-10 * v.norm());
    }
}
