use num_rational::BigRational;

use crate::bounds::{
    bound_central, bound_maxwell_even, bound_maxwell_general, bound_newton_variant, bound_sinr, Bound,
    NewtonBoundVariant,
};
use crate::error::Result;
use crate::model::{CentralConfig, MaxwellConfig, NewtonConfig, SinrConfig};
use crate::polysys::{build_central, build_maxwell_even, build_maxwell_slack, build_newton_slack, build_sinr, PolySystem};
use crate::scalar::Scalar;

/// One of the four problem families with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemConfig<T> {
    Maxwell(MaxwellConfig<T>),
    Sinr(SinrConfig<T>),
    Newton(NewtonConfig<T>),
    Central(CentralConfig<T>),
}

impl<T: Scalar> ProblemConfig<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Maxwell(_) => "maxwell",
            Self::Sinr(_) => "sinr",
            Self::Newton(_) => "newton",
            Self::Central(_) => "central",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Maxwell(c) => c.dim(),
            Self::Sinr(c) => c.dim(),
            Self::Newton(c) => c.dim(),
            Self::Central(c) => c.dim(),
        }
    }

    /// Number of sites, or bodies for central configurations.
    pub fn n(&self) -> usize {
        match self {
            Self::Maxwell(c) => c.n(),
            Self::Sinr(c) => c.n(),
            Self::Newton(c) => c.n(),
            Self::Central(c) => c.n(),
        }
    }

    /// Length scale used to make tolerances scale-free.
    pub fn scale(&self) -> f64 {
        match self {
            Self::Maxwell(c) => c.scale(),
            Self::Sinr(c) => c.scale(),
            Self::Newton(c) => c.scale(),
            Self::Central(c) => c.scale(),
        }
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ProblemConfig<U> {
        match self {
            Self::Maxwell(c) => ProblemConfig::Maxwell(c.map_scalar(f)),
            Self::Sinr(c) => ProblemConfig::Sinr(c.map_scalar(f)),
            Self::Newton(c) => ProblemConfig::Newton(c.map_scalar(f)),
            Self::Central(c) => ProblemConfig::Central(c.map_scalar(f)),
        }
    }

    pub fn to_f64(&self) -> ProblemConfig<f64> {
        self.map_scalar(Scalar::approx_f64)
    }

    /// The smallest applicable bound on isolated critical points (isolated
    /// central configurations for the n-body family).
    pub fn bound(&self, newton_variant: NewtonBoundVariant) -> Result<Bound> {
        let n = self.n() as u64;
        let d = self.dim() as u64;
        match self {
            Self::Maxwell(c) => {
                let m = c.exponent() as u64;
                let general = bound_maxwell_general(n, m, d)?;
                if m.is_multiple_of(2) {
                    let even = bound_maxwell_even(n, m, d)?;
                    Ok(if even.value <= general.value { even } else { general })
                } else {
                    Ok(general)
                }
            }
            Self::Sinr(c) => bound_sinr(n, c.alpha() as u64, d),
            Self::Newton(_) => bound_newton_variant(n, d, newton_variant),
            Self::Central(_) => bound_central(n, d),
        }
    }

    /// The slack (or, for SINR, quotient-rule) system whose admissible zeros
    /// are the critical points.
    pub fn slack_system(&self) -> Result<PolySystem<T>> {
        match self {
            Self::Maxwell(c) => build_maxwell_slack(c),
            Self::Sinr(c) => build_sinr(c),
            Self::Newton(c) => build_newton_slack(c),
            Self::Central(c) => build_central(c),
        }
    }

    /// The system emitted by default: the position-only system when one
    /// exists, otherwise the slack form.
    pub fn default_system(&self) -> Result<PolySystem<T>> {
        match self {
            Self::Maxwell(c) if c.exponent() % 2 == 0 => build_maxwell_even(c),
            _ => self.slack_system(),
        }
    }
}

/// Configuration parsed from a document, with exact rational entries.
pub type ExactProblem = ProblemConfig<BigRational>;
