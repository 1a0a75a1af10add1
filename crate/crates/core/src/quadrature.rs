//! Gauss–Legendre rules, composite and adaptive integration, and pairwise
//! summation.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes from Newton iteration on `P_n`, started at the Tricomi
    /// approximation. Nodes are returned in increasing order.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<T>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
    {
        let terms: Vec<T> = self.mapped(a, b).map(|(x, w)| f(x) * w).collect();
        pairwise_sum(&terms)
    }

    /// Nodes and weights of the composite rule with `panels` equal panels on
    /// `[a, b]`.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.len());
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            out.extend(self.mapped(lo, hi));
        }
        out
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Sum by recursive halving; result depends only on the slice order.
pub fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + Add<Output = T> + Default,
{
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(T::default(), |acc, &v| acc + v);
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Adaptive bisection with a 10-point Gauss–Legendre rule, accepting a panel
/// once its two halves agree with the whole to `tol` (scaled by the panel's
/// share of the interval).
pub fn integrate_adaptive(a: f64, b: f64, tol: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
    let rule = GaussLegendre::new(10);
    let whole = rule.integrate(a, b, &mut *f);
    adaptive_step(&rule, a, b, whole, tol, 0, f)
}

fn adaptive_step(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    f: &mut impl FnMut(f64) -> f64,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, &mut *f);
    let right = rule.integrate(mid, b, &mut *f);
    let refined = left + right;
    if (refined - whole).abs() <= tol || depth >= 40 {
        return refined;
    }
    adaptive_step(rule, a, mid, left, 0.5 * tol, depth + 1, f)
        + adaptive_step(rule, mid, b, right, 0.5 * tol, depth + 1, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two_and_nodes_sorted() {
        for n in [1, 2, 5, 16, 64, 128, 257] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights().iter().sum();
            assert_relative_eq!(s, 2.0, max_relative = 1e-13);
            assert!(gl.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let gl = GaussLegendre::new(6);
        for deg in 0..=11u32 {
            let got = gl.integrate(0.0, 2.0, |x| libm::pow(x, deg as f64));
            let exact = libm::pow(2.0, (deg + 1) as f64) / (deg + 1) as f64;
            assert_relative_eq!(got, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn known_two_point_rule() {
        let gl = GaussLegendre::new(2);
        assert_relative_eq!(gl.nodes()[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gl.weights()[0], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn composite_gaussian() {
        let gl = GaussLegendre::new(16);
        let pts = gl.composite(-10.0, 10.0, 20);
        let s: f64 = pts.iter().map(|&(x, w)| w * libm::exp(-x * x)).sum();
        assert_relative_eq!(s, PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let got = integrate_adaptive(-1.0, 2.0, 1e-13, &mut |x: f64| x.abs());
        assert_relative_eq!(got, 2.5, max_relative = 1e-12);
    }

    #[test]
    fn pairwise_matches_naive_on_exact_values() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499500.0);
    }
}
