use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("cap exceeded: order {order} is above {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("malformed permutation: {0}")]
    MalformedPermutation(&'static str),
    #[error("moment table incomplete: subset mask {mask:#b} missing")]
    IncompleteMoments { mask: u32 },
    #[error("integrator step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("integrator exceeded {max_steps} steps before reaching t = {t_end}")]
    TooManySteps { max_steps: usize, t_end: f64 },
    #[error("time {t} lies outside the solved interval [{start}, {end}]")]
    OutsideTrajectory { t: f64, start: f64, end: f64 },
    #[error("quadrature did not converge: refinement changed the result by {delta:e} (tolerance {tol:e})")]
    QuadratureNotConverged { delta: f64, tol: f64 },
    #[error("Bogoliubov normalisation |A+|^2 - |A-|^2 - 1 = {residual:e} at k = {k}")]
    BogoliubovNormalization { k: f64, residual: f64 },
    #[error("no spectral data tabulated at k = {k}")]
    MissingTabulation { k: f64 },
}

impl Error {
    /// True for failures of the numerical machinery itself (integrator or
    /// quadrature) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepUnderflow { .. }
                | Error::TooManySteps { .. }
                | Error::QuadratureNotConverged { .. }
        )
    }
}
