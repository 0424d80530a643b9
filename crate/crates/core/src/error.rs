use thiserror::Error;

use crate::apparatus::RegimeViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("configuration violates regime constraints: {}", format_violations(.0))]
    Regime(Vec<RegimeViolation>),

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("{quantity} = {value} outside allowed range [{lo}, {hi}]")]
    Domain {
        quantity: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    #[error("fringe window [{lo}, {hi}] spans fewer than 3 fringe periods of {period}")]
    WindowTooNarrow { lo: f64, hi: f64, period: f64 },

    #[error("negative probability {value:e} at x = {x}")]
    NegativeProbability { x: f64, value: f64 },

    #[error("|overlap| = {0} exceeds 1")]
    OverlapOutOfRange(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("photon condition has zero amplitude on both slits")]
    DegenerateCondition,

    #[error("patterns are sampled on different grids")]
    GridMismatch,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("empty or reversed interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("rule order {0} is below the minimum of 2")]
    RuleOrderTooLow(usize),

    #[error("integrand returned a non-finite value at {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("{samples} recoil samples cannot resolve the e^(i kappa d) oscillation; need at least {required}")]
    InsufficientSamples { samples: usize, required: usize },
}

fn format_violations(v: &[RegimeViolation]) -> String {
    v.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
