//! The adiabatic-limit perturbative series of the interacting thermal state.
//!
//! Order `n` contributes
//! `(β^n/n!) ∫ dk/(2ε_λ) Σ± f̂(±ε_λ) ĝ(∓ε_λ) [λm₀²/((ε_λ+ε)ε)]^n ∂β^n b±(β, ε)`,
//! and the zeroth order is the classical adiabatic state. Expanding the
//! derivative over descents gives the equivalent form
//! `(−1)^n (β^n/n!) [λm₀²/(ε_λ+ε)]^n Σ_j c_{n,j} b±^{n+1−j} b∓^j`.
//! Summed to all orders the series is the Taylor expansion of
//! `b±(β + δ, ε) = b±(β, ε_λ)` in `δ`, i.e. the thermal state at the shifted
//! mass.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::combinatorics::{eulerian_row_recursive, EulerianRow};
use crate::quadrature::pairwise_sum;
use crate::spectral::{adiabatic, adiabatic_classical, pair_at, RadialQuadrature, TestPacket};
use crate::thermal::{
    bose_coefficient, bose_derivative_iterated, dispersion, Sign, ThermalParams, DEFAULT_ORDER_CAP,
};
use crate::{Error, Result};

/// Relative agreement required between the two evaluation paths.
pub const DUAL_PATH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    /// Eulerian-number expansion of the β-derivative.
    DescentSum,
    /// Direct β-derivative by polynomial differentiation.
    BetaDerivative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub order: usize,
    pub path: Path,
    pub value: Complex64,
}

/// `β^n / n!`, the volume of `{0 ≤ u₁ ≤ … ≤ u_n ≤ β}`.
pub fn simplex_volume(beta: f64, n: usize) -> f64 {
    let mut v = 1.0;
    for i in 1..=n {
        v *= beta / i as f64;
    }
    v
}

#[derive(Debug, Clone, Copy)]
struct NodeFactors {
    /// `w · f̂(±ε_λ) ĝ(∓ε_λ) / (2ε_λ)` for the two branches.
    weight: [Complex64; 2],
    eps: f64,
    /// `λm₀² / (ε_λ + ε)`
    shift: f64,
    b_plus: f64,
    b_minus: f64,
}

/// Per-node factors of the series integrand, computed once and reused for
/// every order.
#[derive(Debug, Clone)]
pub struct SeriesIntegrand {
    params: ThermalParams,
    nodes: Vec<NodeFactors>,
    cap: usize,
}

impl SeriesIntegrand {
    pub fn new(
        params: &ThermalParams,
        f: &TestPacket,
        g: &TestPacket,
        quad: &RadialQuadrature,
    ) -> Self {
        let beta = params.beta();
        let nodes = quad
            .points()
            .into_iter()
            .map(|(k, w)| {
                let d = dispersion(k, params);
                let el = d.eps_lambda;
                let scale = w / (2.0 * el);
                NodeFactors {
                    weight: [
                        f.hat(el, k) * g.hat(-el, k) * scale,
                        f.hat(-el, k) * g.hat(el, k) * scale,
                    ],
                    eps: d.eps,
                    shift: params.mass_shift() / (el + d.eps),
                    b_plus: bose_coefficient(Sign::Plus, beta, d.eps),
                    b_minus: bose_coefficient(Sign::Minus, beta, d.eps),
                }
            })
            .collect();
        Self {
            params: *params,
            nodes,
            cap: DEFAULT_ORDER_CAP,
        }
    }

    pub fn with_cap(self, cap: usize) -> Self {
        Self { cap, ..self }
    }

    pub fn params(&self) -> &ThermalParams {
        &self.params
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `max |δ|/β = max |ε_λ − ε|/ε` over the nodes. The β-Taylor series of
    /// `b±` converges at a node iff this is below one, since the nearest
    /// singularity of `b±(·, ε)` to `β` is the pole at the origin.
    pub fn radius_ratio(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| (n.shift / n.eps).abs())
            .fold(0.0, f64::max)
    }

    fn check_order(&self, n: usize) -> Result<EulerianRow> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "order",
                reason: "series terms start at n = 1",
            });
        }
        if n > self.cap {
            return Err(Error::OrderCapExceeded {
                order: n,
                cap: self.cap,
            });
        }
        eulerian_row_recursive(n)
    }

    pub fn term(&self, n: usize, path: Path) -> Result<SeriesTerm> {
        let row = self.check_order(n)?;
        let beta = self.params.beta();
        let vol = simplex_volume(beta, n);
        let terms: Vec<Complex64> = match path {
            Path::DescentSum => self
                .nodes
                .iter()
                .map(|nd| {
                    let plus = descent_sum(&row, nd.b_plus, nd.b_minus);
                    let minus = descent_sum(&row, nd.b_minus, nd.b_plus);
                    let pre = powi(-nd.shift, n);
                    (nd.weight[0] * plus + nd.weight[1] * minus) * pre
                })
                .collect(),
            Path::BetaDerivative => self
                .nodes
                .iter()
                .map(|nd| {
                    let plus = bose_derivative_iterated(n, Sign::Plus, beta, nd.eps);
                    let minus = bose_derivative_iterated(n, Sign::Minus, beta, nd.eps);
                    let pre = powi(nd.shift / nd.eps, n);
                    (nd.weight[0] * plus + nd.weight[1] * minus) * pre
                })
                .collect(),
        };
        Ok(SeriesTerm {
            order: n,
            path,
            value: pairwise_sum(&terms) * vol,
        })
    }

    /// Descent-sum term using `c_{n,j} = c_{n,n+1−j}` to share one polynomial
    /// between the two branches.
    pub fn term_symmetrized(&self, n: usize) -> Result<Complex64> {
        let row = self.check_order(n)?;
        let vol = simplex_volume(self.params.beta(), n);
        let terms: Vec<Complex64> = self
            .nodes
            .iter()
            .map(|nd| {
                let s = 0.5
                    * (descent_sum(&row, nd.b_plus, nd.b_minus)
                        + descent_sum(&row, nd.b_minus, nd.b_plus));
                (nd.weight[0] + nd.weight[1]) * (s * powi(-nd.shift, n))
            })
            .collect();
        Ok(pairwise_sum(&terms) * vol)
    }

    /// Terms `1..=n_max` on the descent-sum path.
    pub fn terms(&self, n_max: usize, path: Path) -> Result<Vec<SeriesTerm>> {
        (1..=n_max).map(|n| self.term(n, path)).collect()
    }
}

/// `Σ_j c_{n,j} x^{n+1−j} y^j`.
fn descent_sum(row: &EulerianRow, x: f64, y: f64) -> f64 {
    let n = row.order();
    row.coefficients()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let j = i + 1;
            c as f64 * powi(x, n + 1 - j) * powi(y, j)
        })
        .sum()
}

fn powi(x: f64, n: usize) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

/// The `n`-th order term, `n ≥ 1`.
pub fn nth_order_term(
    n: usize,
    params: &ThermalParams,
    f: &TestPacket,
    g: &TestPacket,
    quad: &RadialQuadrature,
    path: Path,
) -> Result<SeriesTerm> {
    SeriesIntegrand::new(params, f, g, quad).term(n, path)
}

/// Classical adiabatic pairing plus orders `1..=n_max` (descent-sum path).
pub fn partial_sum(
    n_max: usize,
    params: &ThermalParams,
    f: &TestPacket,
    g: &TestPacket,
    quad: &RadialQuadrature,
) -> Result<Complex64> {
    let zeroth = pair_at(&adiabatic_classical(params), f, g, quad)?;
    let terms = SeriesIntegrand::new(params, f, g, quad).terms(n_max, Path::DescentSum)?;
    Ok(terms.iter().fold(zeroth, |acc, t| acc + t.value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Some quadrature node lies outside the convergence disk; no gap is
    /// expected to close.
    NotExpectedToConverge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub order: usize,
    pub term_value: Complex64,
    pub cumulative: Complex64,
    /// `|cumulative − closed form| / |closed form|`
    pub gap_to_closed_form: f64,
    /// Relative deviation between the two paths; zero at order 0.
    pub dual_path_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResummationReport {
    pub rows: Vec<SeriesRow>,
    /// Pairing against the thermal state at the shifted mass.
    pub closed_form: Complex64,
    pub radius_ratio: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

impl ResummationReport {
    pub fn final_gap(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.gap_to_closed_form)
    }

    pub fn max_dual_path_deviation(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.dual_path_deviation)
            .fold(0.0, f64::max)
    }

    /// Whether the gap never increases from one order to the next.
    pub fn gap_is_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].gap_to_closed_form <= w[0].gap_to_closed_form)
    }
}

/// Sums the series to order `n_max` and compares each partial sum with the
/// shifted-mass thermal state on the same radial rule.
pub fn verify_resummation(
    params: &ThermalParams,
    f: &TestPacket,
    g: &TestPacket,
    quad: &RadialQuadrature,
    n_max: usize,
    tol: f64,
) -> Result<ResummationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "tolerance must be positive",
        });
    }
    let integrand = SeriesIntegrand::new(params, f, g, quad);
    if n_max > integrand.cap() {
        return Err(Error::OrderCapExceeded {
            order: n_max,
            cap: integrand.cap(),
        });
    }
    let closed_form = pair_at(&adiabatic(params), f, g, quad)?;
    let zeroth = pair_at(&adiabatic_classical(params), f, g, quad)?;
    let gap = |v: Complex64| {
        let d = (v - closed_form).norm();
        if closed_form.norm() > 0.0 {
            d / closed_form.norm()
        } else {
            d
        }
    };
    let mut rows = Vec::with_capacity(n_max + 1);
    rows.push(SeriesRow {
        order: 0,
        term_value: zeroth,
        cumulative: zeroth,
        gap_to_closed_form: gap(zeroth),
        dual_path_deviation: 0.0,
    });
    let mut cumulative = zeroth;
    for n in 1..=n_max {
        let a = integrand.term(n, Path::DescentSum)?.value;
        let b = integrand.term(n, Path::BetaDerivative)?.value;
        let scale = a.norm().max(b.norm());
        let dev = if scale > 0.0 {
            (a - b).norm() / scale
        } else {
            0.0
        };
        cumulative += a;
        rows.push(SeriesRow {
            order: n,
            term_value: a,
            cumulative,
            gap_to_closed_form: gap(cumulative),
            dual_path_deviation: dev,
        });
    }
    let radius_ratio = integrand.radius_ratio();
    let mut report = ResummationReport {
        rows,
        closed_form,
        radius_ratio,
        tol,
        verdict: Verdict::Fail,
    };
    report.verdict = if radius_ratio >= 1.0 {
        Verdict::NotExpectedToConverge
    } else if report.final_gap() <= tol && report.max_dual_path_deviation() <= DUAL_PATH_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::factorial;
    use crate::quadrature::GaussLegendre;

    fn bench(lambda: f64) -> (ThermalParams, TestPacket, TestPacket, RadialQuadrature) {
        let p = ThermalParams::new(1.0, 1.0, 1.0, lambda).unwrap();
        let f = TestPacket::new(1.0, 0.5, 0.0, 1.0).unwrap();
        let g = TestPacket::new(1.0, 0.5, 0.5, 1.0).unwrap();
        let q = RadialQuadrature::for_packets(64, &f, &g).unwrap();
        (p, f, g, q)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn paths_agree_at_every_order() {
        let (p, f, g, q) = bench(0.1);
        let s = SeriesIntegrand::new(&p, &f, &g, &q);
        for n in 1..=DEFAULT_ORDER_CAP {
            let a = s.term(n, Path::DescentSum).unwrap().value;
            let b = s.term(n, Path::BetaDerivative).unwrap().value;
            assert!(rel(a, b) <= DUAL_PATH_TOL, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn first_order_closed_form() {
        // n = 1: −β ∫ dk/(2ε_λ) Σ± f̂ ĝ · λm₀²/(ε_λ+ε) · b₊b₋
        let (p, f, g, q) = bench(0.1);
        let expected: Complex64 = q
            .points()
            .into_iter()
            .map(|(k, w)| {
                let d = dispersion(k, &p);
                let el = d.eps_lambda;
                let pairing = f.hat(el, k) * g.hat(-el, k) + f.hat(-el, k) * g.hat(el, k);
                let bb = bose_coefficient(Sign::Plus, 1.0, d.eps)
                    * bose_coefficient(Sign::Minus, 1.0, d.eps);
                -pairing * (w / (2.0 * el) * p.mass_shift() / (el + d.eps) * bb)
            })
            .sum();
        let t = nth_order_term(1, &p, &f, &g, &q, Path::DescentSum)
            .unwrap()
            .value;
        assert!(rel(t, expected) <= 1e-13);
        assert!(t.re < 0.0);
    }

    #[test]
    fn symmetrization_is_consistent() {
        let (p, f, g, q) = bench(0.2);
        let s = SeriesIntegrand::new(&p, &f, &g, &q);
        for n in 1..=8 {
            let a = s.term(n, Path::DescentSum).unwrap().value;
            assert!(rel(s.term_symmetrized(n).unwrap(), a) <= 1e-13);
        }
    }

    #[test]
    fn zero_coupling_terms_vanish() {
        let (p, f, g, q) = bench(0.0);
        let s = SeriesIntegrand::new(&p, &f, &g, &q);
        for n in 1..=6 {
            for path in [Path::DescentSum, Path::BetaDerivative] {
                assert_eq!(s.term(n, path).unwrap().value.norm(), 0.0);
            }
        }
        let r = verify_resummation(&p, &f, &g, &q, 0, 1e-8).unwrap();
        assert_eq!(r.final_gap(), 0.0);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn simplex_volume_by_nested_quadrature() {
        fn nested(lo: f64, hi: f64, depth: usize, gl: &GaussLegendre) -> f64 {
            if depth == 0 {
                return 1.0;
            }
            gl.integrate(lo, hi, |u| nested(u, hi, depth - 1, gl))
        }
        let gl = GaussLegendre::new(8);
        for n in 1..=4 {
            for beta in [0.5, 1.0, 2.3] {
                let v = simplex_volume(beta, n);
                assert!((nested(0.0, beta, n, &gl) - v).abs() <= 1e-13 * v);
                assert!((simplex_volume(2.0 * beta, n) / v - (1u32 << n) as f64).abs() < 1e-12);
            }
        }
        assert_eq!(simplex_volume(3.0, 0), 1.0);
        assert!((simplex_volume(1.0, 5) - 1.0 / factorial(5) as f64).abs() < 1e-18);
    }

    #[test]
    fn bench_resums_at_order_eight() {
        let (p, f, g, q) = bench(0.1);
        let r = verify_resummation(&p, &f, &g, &q, 8, 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!(r.gap_is_monotone());
        let direct = partial_sum(8, &p, &f, &g, &q).unwrap();
        assert_eq!(direct, r.rows[8].cumulative);
    }

    #[test]
    fn term_ratios_within_geometric_envelope() {
        let (p, f, g, q) = bench(0.3);
        let s = SeriesIntegrand::new(&p, &f, &g, &q);
        let r = s.radius_ratio();
        let t = s.terms(12, Path::DescentSum).unwrap();
        for w in t.windows(2).skip(1) {
            assert!(w[1].value.norm() <= r * w[0].value.norm(), "{r} {w:?}");
        }
    }

    #[test]
    fn radius_guard() {
        let (p, f, g, q) = bench(4.0);
        let r = verify_resummation(&p, &f, &g, &q, 8, 1e-8).unwrap();
        assert!(r.radius_ratio >= 1.0);
        assert_eq!(r.verdict, Verdict::NotExpectedToConverge);
    }

    #[test]
    fn order_guards() {
        let (p, f, g, q) = bench(0.1);
        let s = SeriesIntegrand::new(&p, &f, &g, &q);
        assert!(matches!(
            s.term(17, Path::DescentSum),
            Err(Error::OrderCapExceeded { order: 17, cap: 16 })
        ));
        assert!(s.term(0, Path::DescentSum).is_err());
        assert!(s
            .clone()
            .with_cap(20)
            .term(20, Path::BetaDerivative)
            .is_ok());
    }
}
