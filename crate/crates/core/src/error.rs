use thiserror::Error;

/// Errors produced by the geometry, effect, LP and compatibility layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input: at least one point is required")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate polytope: a single point has no facets")]
    DegeneratePolytope,
    #[error("polytope is not a simplex")]
    NotASimplex,
    #[error("point lies outside the polytope")]
    OutsidePolytope,
    #[error("vertex index {0} out of range")]
    InvalidVertex(usize),
    #[error("facet is degenerate: its defining function vanishes on the whole polytope")]
    DegenerateFacet,
    #[error("vertex {0} cannot be exposed by an affine function")]
    CannotExpose(usize),
    #[error("effect takes values in [{min}, {max}] on the state space, outside [0, 1]")]
    EffectOutOfRange { min: f64, max: f64 },
    #[error("vertex values are not those of an affine function (residual {residual:e})")]
    InconsistentVertexValues { residual: f64 },
    #[error("effects of a measurement do not sum to the unit function")]
    NotNormalized,
    #[error("coin bias {0} outside [0, 1]")]
    BiasOutOfRange(f64),
    #[error("parameter {name} = {value} out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("interpolating function is infeasible: {0} is negative on the state space")]
    InfeasibleP(&'static str),
    #[error("measurements are compatible; there is nothing to certify")]
    NotIncompatible,
    #[error("dual solution does not aggregate into a valid certificate: {0}")]
    DegenerateDual(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("state space is a simplex; every pair of measurements is compatible")]
    SimplexInput,
    #[error("no incompatible pair found among {searched} candidates (minimal degree {best})")]
    SearchExhausted { searched: usize, best: f64 },
    #[error("LP solver failure: {0}")]
    SolverFailure(String),
    #[error("LP solution is not optimal")]
    NotOptimal,
    #[error("numerical breakdown in simplex after {iterations} iterations")]
    NumericalBreakdown { iterations: usize },
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
