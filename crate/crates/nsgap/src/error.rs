use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Validation and computation failures. Variants carry the first offending
/// indices so a bad input names its own witness.
#[derive(Error, Debug)]
pub enum Error {
    #[error("matrix must be square and nonempty, got {rows} rows with row {bad_row} of length {bad_len}")]
    NotSquare {
        rows: usize,
        bad_row: usize,
        bad_len: usize,
    },

    #[error("entry ({i},{j}) = {value} is not finite")]
    NonFinite { i: usize, j: usize, value: f64 },

    #[error("entry ({i},{j}) = {value} is negative")]
    NegativeEntry { i: usize, j: usize, value: f64 },

    #[error("asymmetry |a[{i}][{j}] - a[{j}][{i}]| = {delta:e} exceeds 1e-8")]
    Asymmetric { i: usize, j: usize, delta: f64 },

    #[error("row {i} sums to {sum} (must be 1 within 1e-10)")]
    RowSum { i: usize, sum: f64 },

    #[error("a 1x1 chain has no second eigenvalue")]
    SingletonSpectrum,

    #[error("leading eigenvalue {lambda1} differs from 1 beyond tolerance; eigensolver did not converge")]
    SpectrumOutOfRange { lambda1: f64 },

    #[error("diagonal entry d[{i}][{i}] = {value} is nonzero")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("triangle inequality fails at ({i},{j},{k}): d({i},{j}) = {dij} > d({i},{k}) + d({k},{j}) = {via} + slack")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        dij: f64,
        via: f64,
    },

    #[error("graph is disconnected: no path between vertices {u} and {v}")]
    Disconnected { u: usize, v: usize },

    #[error("exponent p = {p} is not allowed here: {reason}")]
    BadExponent { p: f64, reason: &'static str },

    #[error("point {i} has dimension {got}, expected {expected}")]
    RaggedPoints {
        i: usize,
        got: usize,
        expected: usize,
    },

    #[error("{what} size {got} out of supported range {min}..={max}")]
    SizeOutOfRange {
        what: &'static str,
        got: usize,
        min: usize,
        max: usize,
    },

    #[error("enumeration needs {needed} kernel evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("sizes disagree: {left_what} has {left}, {right_what} has {right}")]
    SizeMismatch {
        left_what: &'static str,
        left: usize,
        right_what: &'static str,
        right: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{context}: {source}")]
    Json {
        context: &'static str,
        #[source]
        source: serde_json::Error,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("rationalization needs denominator {needed} beyond the cap {cap}; increase eps")]
    DenominatorCap { needed: f64, cap: u64 },

    #[error("graph generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("invalid parameter {name} = {value}: {reason}")]
    BadParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}
