use thiserror::Error;

use crate::expr::EvalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gauge is not positive at s = {at}: δ(s) = {value}")]
    GaugeNotPositive { at: f64, value: f64 },

    #[error("gauge too demanding: ]{u}, {v}] still not fine after {depth} bisections")]
    GaugeTooDemanding { u: f64, v: f64, depth: usize },

    #[error("evaluation failed on cell (s = {tag}, ]{u}, {v}]): {source}")]
    CellEval {
        tag: f64,
        u: f64,
        v: f64,
        #[source]
        source: EvalError,
    },

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("extrema oracle inconsistent on ]{u}, {v}]: f({at}) = {value} outside [{inf}, {sup}]")]
    OracleInconsistent {
        u: f64,
        v: f64,
        at: f64,
        value: f64,
        inf: f64,
        sup: f64,
    },

    #[error("distribution function decreases: g({u1}) = {g1} > g({u2}) = {g2}")]
    NotMonotone { u1: f64, g1: f64, u2: f64, g2: f64 },

    #[error("no extrema oracle available: {0}")]
    NoOracle(String),

    #[error("path level {have} is too coarse, need level {need}; refine the path first")]
    InsufficientLevel { have: u32, need: u32 },

    #[error("estimator failed on path {path_id}: {source}")]
    PathFailed {
        path_id: u64,
        #[source]
        source: Box<Error>,
    },
}
