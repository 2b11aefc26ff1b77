use thiserror::Error;

/// Failures of scalar arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot parse exact literal {0:?}")]
    Parse(String),
    #[error("minimal polynomial splits over the Gaussian rationals")]
    ReducibleMinimalPolynomial,
    #[error("nested quadratic extensions are not supported")]
    NestedExtension,
    #[error("leading coefficient of quadratic is zero")]
    DegenerateQuadratic,
}

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("frame mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: String, found: String },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("linear transform is singular")]
    SingularTransform,
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("point has all coordinates zero")]
    ZeroPoint,
    #[error("point does not lie on the variety")]
    NotOnVariety,
    #[error("point is not on Y")]
    NotOnY,
    #[error("point is not on the quadric w0*w3 - w1*w2")]
    NotOnQuadric,
    #[error("point is not on the Ho-Chen curve")]
    NotOnHCF,
    #[error("point is not on the octic Z")]
    NotOnZ,
    #[error("fibre coordinate is not a square in the working field")]
    IrrationalFibre,
    #[error("projection has all coordinates zero")]
    ZeroImage,
    #[error("scenario is not equal-velocity")]
    ScenarioNotEqualVelocity,
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("TDOA constant b must be nonzero")]
    ZeroTDOA,
    #[error("scenario has non-real parameters")]
    NonRealScenario,
    #[error("point coincides with a sensor")]
    AtSensor,
    #[error("all velocities and d vanish")]
    ZeroScenario,
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("hypotheses violated: {0:?}")]
    HypothesisViolated(Vec<String>),
    #[error("linear-factor conditions violated: {0:?}")]
    NoLFactorsViolated(Vec<String>),
    #[error("not a double point")]
    NotDoublePoint,
    #[error("negative genus {0}; inconsistent singularity data")]
    NegativeGenus(i64),
    #[error("scenario is not in the requested degenerate case")]
    NotDegenerateCase,
    #[error("no branch vanishes at the point")]
    NoBranch,
    #[error("no sign changes found in the window")]
    EmptyWindow,
    #[error("invalid trace configuration: {0}")]
    InvalidConfig(String),
    #[error("validation failed at {count} vertices (max deviation {max_deviation:e})")]
    ValidationFailure { count: usize, max_deviation: f64 },
    #[error("scenario parse error: {0}")]
    ScenarioParse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
