//! Adaptive Dormand–Prince 5(4) integration of complex first-order systems.

use num_complex::Complex64;

use crate::{Error, Result};

/// A first-order system `ẏ = F(t, y)` on `ℂ^N`.
pub trait ComplexSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[Complex64; N]) -> [Complex64; N];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rtol: f64, atol: f64) -> Result<Self> {
        if !(rtol > 0.0 && atol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                reason: "rtol and atol must be positive",
            });
        }
        Ok(Self { rtol, atol })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub tol: Tolerance,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(tol: Tolerance) -> Self {
        Self {
            tol,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine<const N: usize>(
    y: &[Complex64; N],
    h: f64,
    terms: &[(f64, &[Complex64; N])],
) -> [Complex64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, k) in terms {
            acc += k[i] * c;
        }
        *o += acc * h;
    }
    out
}

impl Dopri5 {
    /// Integrates from `*t` to exactly `t_end`, updating `t`, `y` and the
    /// step-size suggestion `h` in place. `on_step` sees every accepted
    /// step. Backward integration is not supported.
    pub fn advance<const N: usize, S: ComplexSystem<N>>(
        &self,
        sys: &S,
        t: &mut f64,
        y: &mut [Complex64; N],
        t_end: f64,
        h: &mut f64,
        mut on_step: impl FnMut(f64, &[Complex64; N]),
    ) -> Result<StepStats> {
        let mut stats = StepStats::default();
        if t_end <= *t {
            return Ok(stats);
        }
        if !h.is_finite() || *h <= 0.0 {
            *h = 1e-3;
        }
        let mut k1 = sys.rhs(*t, y);
        while *t < t_end {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::TooManySteps {
                    max_steps: self.max_steps,
                    t_end,
                });
            }
            let remaining = t_end - *t;
            let last = *h >= remaining;
            let step = if last { remaining } else { *h };
            let h_floor = 1e-14 * t.abs().max(1.0);
            if step < h_floor && !last {
                return Err(Error::StepUnderflow { t: *t, h: step });
            }

            let k2 = sys.rhs(*t + C2 * step, &combine(y, step, &[(A21, &k1)]));
            let k3 = sys.rhs(*t + C3 * step, &combine(y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = sys.rhs(
                *t + C4 * step,
                &combine(y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = sys.rhs(
                *t + C5 * step,
                &combine(y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = sys.rhs(
                *t + step,
                &combine(
                    y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = combine(
                y,
                step,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let t_new = if last { t_end } else { *t + step };
            let k7 = sys.rhs(t_new, &y_new);

            let mut err_sq = 0.0;
            for i in 0..N {
                let e =
                    (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                        * step;
                let sc = self.tol.atol + self.tol.rtol * y[i].norm().max(y_new[i].norm());
                let (re, im) = (e.re / sc, e.im / sc);
                err_sq += re * re + im * im;
            }
            let err = libm::sqrt(err_sq / (2 * N) as f64);

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                stats.accepted += 1;
                *t = t_new;
                *y = y_new;
                k1 = k7;
                on_step(*t, y);
                // keep the suggestion from a truncated final step
                if !last || step * factor > *h {
                    *h = step * factor;
                }
            } else {
                stats.rejected += 1;
                *h = step * factor.min(1.0);
                if *h < h_floor {
                    return Err(Error::StepUnderflow { t: *t, h: *h });
                }
            }
        }
        Ok(stats)
    }
}
