//! Thermal coefficients `b±(β, ε) = ∓1 / (e^{∓βε} − 1)`, their β-derivatives
//! and dispersion relations.

use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::eulerian_row_recursive;
use crate::{Error, Result};

/// Default cap on the order of β-derivatives and series terms.
pub const DEFAULT_ORDER_CAP: usize = 16;

/// Physical inputs: inverse temperature `β`, squared mass `m²`, perturbation
/// scale `m₀²` and coupling `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    beta: f64,
    m_sq: f64,
    m0_sq: f64,
    lambda: f64,
}

impl ThermalParams {
    pub fn new(beta: f64, m_sq: f64, m0_sq: f64, lambda: f64) -> Result<Self> {
        let finite = [beta, m_sq, m0_sq, lambda].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter {
                name: "params",
                reason: "all parameters must be finite",
            });
        }
        if beta <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: "inverse temperature must be positive",
            });
        }
        if m_sq <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "m_sq",
                reason: "squared mass must be positive",
            });
        }
        if m0_sq < 0.0 {
            return Err(Error::InvalidParameter {
                name: "m0_sq",
                reason: "perturbation mass scale must be non-negative",
            });
        }
        if m_sq + lambda * m0_sq <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "m² + λ m₀² must be positive (no tachyonic mass)",
            });
        }
        Ok(Self {
            beta,
            m_sq,
            m0_sq,
            lambda,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m_sq(&self) -> f64 {
        self.m_sq
    }

    pub fn m0_sq(&self) -> f64 {
        self.m0_sq
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `λ m₀²`, the squared-mass shift.
    pub fn mass_shift(&self) -> f64 {
        self.lambda * self.m0_sq
    }

    /// Parameters with `m² → m² + λm₀²` and `λ = 0`.
    pub fn shifted_free(&self) -> Self {
        Self {
            m_sq: self.m_sq + self.mass_shift(),
            lambda: 0.0,
            ..*self
        }
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(beta, self.m_sq, self.m0_sq, self.lambda)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.beta, self.m_sq, self.m0_sq, lambda)
    }
}

/// Free frequency `ε(k)` and shifted frequency `ε_λ(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPair {
    pub eps: f64,
    pub eps_lambda: f64,
}

impl DispersionPair {
    /// `ε_λ² − ε² = λm₀²`, evaluated without cancellation.
    pub fn gap_sq(&self) -> f64 {
        (self.eps_lambda - self.eps) * (self.eps_lambda + self.eps)
    }
}

/// Frequencies at radial momentum `|k|`.
pub fn dispersion(k_mag: f64, params: &ThermalParams) -> DispersionPair {
    let k_sq = k_mag * k_mag;
    DispersionPair {
        eps: libm::sqrt(k_sq + params.m_sq),
        eps_lambda: libm::sqrt(k_sq + params.m_sq + params.mass_shift()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `b±(β, ε)`. `b₋` is the Bose–Einstein factor and `b₊ = 1 + b₋`; both are
/// evaluated through `expm1`, so `b₋ → 0` and `b₊ → 1` without overflow as
/// `βε → ∞`.
pub fn bose_coefficient(sign: Sign, beta: f64, eps: f64) -> f64 {
    let x = beta * eps;
    debug_assert!(x > 0.0, "βε must be positive");
    match sign {
        Sign::Plus => -1.0 / libm::expm1(-x),
        Sign::Minus => 1.0 / libm::expm1(x),
    }
}

/// `∂β^n b±(β, ε)` with the default order cap.
pub fn bose_derivative(n: usize, sign: Sign, beta: f64, eps: f64) -> Result<f64> {
    bose_derivative_capped(n, sign, beta, eps, DEFAULT_ORDER_CAP)
}

/// `∂β^n b± = (−ε)^n Σ_{k=1..n} c_{n,k} b₊^{n+1−k} b₋^k` for `n ≥ 1`, where
/// `c_{n,k}` are Eulerian numbers; `n = 0` returns `b±`.
pub fn bose_derivative_capped(
    n: usize,
    sign: Sign,
    beta: f64,
    eps: f64,
    cap: usize,
) -> Result<f64> {
    if n > cap {
        return Err(Error::OrderCapExceeded { order: n, cap });
    }
    if n == 0 {
        return Ok(bose_coefficient(sign, beta, eps));
    }
    let row = eulerian_row_recursive(n)?;
    let bp = bose_coefficient(Sign::Plus, beta, eps);
    // b₋/b₊ = e^{−βε}
    let ratio = libm::exp(-beta * eps);
    let mut sum = 0.0;
    let mut ratio_pow = 1.0;
    for &c in row.coefficients() {
        ratio_pow *= ratio;
        sum += c as f64 * ratio_pow;
    }
    Ok(libm::pow(-eps, n as f64) * libm::pow(bp, (n + 1) as f64) * sum)
}

/// `∂β^n b±` by repeatedly differentiating a polynomial in `(b₊, b₋)` with
/// `∂β b₊ = ∂β b₋ = −ε b₊ b₋`. Independent of the Eulerian closed form.
pub fn bose_derivative_iterated(n: usize, sign: Sign, beta: f64, eps: f64) -> f64 {
    // coeffs[a] multiplies b₊^a b₋^(deg − a); degree grows by one per step.
    let mut coeffs: Vec<f64> = match sign {
        Sign::Plus => vec![0.0, 1.0],
        Sign::Minus => vec![1.0, 0.0],
    };
    for _ in 0..n {
        let deg = coeffs.len() - 1;
        let mut next = vec![0.0; deg + 2];
        for (a, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let b = deg - a;
            // ∂(b₊^a b₋^b) = −ε (a b₊^a b₋^{b+1} + b b₊^{a+1} b₋^b)
            next[a] += a as f64 * c;
            next[a + 1] += b as f64 * c;
        }
        coeffs = next;
    }
    let bp = bose_coefficient(Sign::Plus, beta, eps);
    let bm = bose_coefficient(Sign::Minus, beta, eps);
    let deg = coeffs.len() - 1;
    let poly: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(a, &c)| c * libm::pow(bp, a as f64) * libm::pow(bm, (deg - a) as f64))
        .sum();
    libm::pow(-eps, n as f64) * poly
}

/// Inverse temperature `β' = β + βλm₀² / ((ε_λ + ε) ε)`, for which
/// `β' ε = β ε_λ` and hence `b±(β', ε) = b±(β, ε_λ)`.
pub fn shifted_beta(params: &ThermalParams, disp: &DispersionPair) -> f64 {
    params.beta + params.beta * params.mass_shift() / ((disp.eps_lambda + disp.eps) * disp.eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(beta: f64, m_sq: f64, m0_sq: f64, lambda: f64) -> ThermalParams {
        ThermalParams::new(beta, m_sq, m0_sq, lambda).unwrap()
    }

    #[test]
    fn dispersion_examples() {
        let d = dispersion(0.0, &params(1.0, 1.0, 1.0, 0.0));
        assert_eq!((d.eps, d.eps_lambda), (1.0, 1.0));
        let d = dispersion(0.0, &params(1.0, 1.0, 1.0, 0.5));
        assert_eq!(d.eps, 1.0);
        assert_relative_eq!(d.eps_lambda, 1.5f64.sqrt(), max_relative = 1e-15);
        let d = dispersion(3.0, &params(1.0, 16.0, 1.0, 0.0));
        assert_eq!((d.eps, d.eps_lambda), (5.0, 5.0));
        let d = dispersion(0.4, &params(1.0, 1.0, 2.0, -0.3));
        assert!(d.eps_lambda < d.eps && d.eps_lambda > 0.0);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ThermalParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(ThermalParams::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(ThermalParams::new(1.0, 1.0, 1.0, -1.0).is_err());
        assert!(ThermalParams::new(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(ThermalParams::new(f64::NAN, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn bose_values() {
        let bp = bose_coefficient(Sign::Plus, 1.0, 1.0);
        assert_relative_eq!(bp, 1.0 / (1.0 - (-1.0f64).exp()), max_relative = 1e-15);
        assert_relative_eq!(bp, 1.581976706869326, max_relative = 1e-14);
        let bm = bose_coefficient(Sign::Minus, 1.0, 1.0);
        assert_relative_eq!(bp - bm, 1.0, max_relative = 1e-15);
        assert_relative_eq!(bm, (-1.0f64).exp() * bp, max_relative = 1e-15);
    }

    #[test]
    fn zero_temperature_limit() {
        assert_eq!(bose_coefficient(Sign::Plus, 1e3, 10.0), 1.0);
        assert_eq!(bose_coefficient(Sign::Minus, 1e3, 10.0), 0.0);
        for n in 1..=8 {
            let d = bose_derivative(n, Sign::Minus, 1e3, 10.0).unwrap();
            assert!(d.is_finite() && d.abs() < 1e-300);
        }
    }

    #[test]
    fn low_orders() {
        let (beta, eps) = (0.8, 1.3);
        let bp = bose_coefficient(Sign::Plus, beta, eps);
        let bm = bose_coefficient(Sign::Minus, beta, eps);
        for s in Sign::BOTH {
            assert_relative_eq!(
                bose_derivative(1, s, beta, eps).unwrap(),
                -eps * bp * bm,
                max_relative = 1e-14
            );
            assert_relative_eq!(
                bose_derivative(2, s, beta, eps).unwrap(),
                eps * eps * (bp * bp * bm + bp * bm * bm),
                max_relative = 1e-14
            );
            assert_eq!(
                bose_derivative(0, s, beta, eps).unwrap(),
                bose_coefficient(s, beta, eps)
            );
        }
    }

    #[test]
    fn closed_form_matches_iterated_rule() {
        for &(beta, eps) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.7), (0.3, 0.2)] {
            for n in 0..=DEFAULT_ORDER_CAP {
                for s in Sign::BOTH {
                    let a = bose_derivative(n, s, beta, eps).unwrap();
                    let b = bose_derivative_iterated(n, s, beta, eps);
                    assert_relative_eq!(a, b, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn order_cap() {
        assert_eq!(
            bose_derivative(17, Sign::Plus, 1.0, 1.0),
            Err(Error::OrderCapExceeded { order: 17, cap: 16 })
        );
        assert!(bose_derivative_capped(20, Sign::Plus, 1.0, 1.0, 24).is_ok());
    }

    #[test]
    fn shifted_beta_identity() {
        let p = params(1.0, 1.0, 1.0, 0.0);
        assert_eq!(shifted_beta(&p, &dispersion(1.0, &p)), 1.0);
        let p = params(1.3, 0.7, 2.0, 0.4);
        for i in 0..20 {
            let d = dispersion(0.25 * i as f64, &p);
            let bs = shifted_beta(&p, &d);
            assert_relative_eq!(bs * d.eps, p.beta() * d.eps_lambda, max_relative = 1e-14);
        }
    }
}
