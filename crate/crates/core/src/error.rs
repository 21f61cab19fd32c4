use thiserror::Error;

/// Errors raised by quantization, distance and reference computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid discrete measure: {0}")]
    InvalidMeasure(String),

    #[error("cell [{lo}, {hi}] carries no probability mass")]
    ZeroMassCell { lo: f64, hi: f64 },

    #[error("geometric-mean split needs a cell inside [0, inf), got lower endpoint {lo}")]
    NegativeSupport { lo: f64 },

    #[error("distribution mean is not finite")]
    NonFiniteMean,

    #[error("depth {0} exceeds the supported maximum of {max}", max = crate::quantizer::MAX_DEPTH)]
    DepthTooLarge(u32),

    #[error("split rule `{0}` has no closed-form cell error or bound constant")]
    UnsupportedRule(&'static str),

    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("integral of the square-root density diverges")]
    DivergentHalfDensity,

    #[error("integral of sqrt(F(1-F)) diverges")]
    DivergentIntegral,

    #[error("support is unbounded below; bound unavailable")]
    UnboundedBelow,

    #[error("intermediate measure would hold {atoms} atoms (limit {limit})")]
    MemoryGuard { atoms: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, QuantError>;
