use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),
    #[error("principal value pole {pole} lies on an endpoint of [{a}, {b}]")]
    PoleOnEndpoint { a: f64, b: f64, pole: f64 },
    #[error("ODE step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("potential is not decayed at the grid ends (|u| = {0:e})")]
    NotDecayed(f64),
    #[error("|ă(z)| = {0:e} on the real axis; data is not generic")]
    RealAxisZero(f64),
    #[error("argument principle winding {0} is not close to an integer")]
    NonIntegerWinding(f64),
    #[error("zeros of ă collide near z = {0}")]
    MultipleZero(num_complex::Complex64),
    #[error("Newton refinement failed near z = {0}")]
    NewtonFailed(num_complex::Complex64),
    #[error("Jost columns are not proportional at z = {z} (residual {residual:e})")]
    DependenceResidual { z: num_complex::Complex64, residual: f64 },
    #[error("soliton norming constant must be purely imaginary and nonzero, got {0}")]
    NonImaginaryNorming(num_complex::Complex64),
    #[error("poles collide near z = {0}")]
    PoleCollision(num_complex::Complex64),
    #[error("discrete RHP system is singular (condition number {0:e})")]
    SingularSystem(f64),
    #[error("evaluation point {0} is too close to a pole")]
    PoleProximity(num_complex::Complex64),
    #[error("r-grid does not cover [-{0}, {0}]")]
    InsufficientCoverage(f64),
    #[error("z = {0} is on the branch cut of δ; a side must be chosen")]
    BranchCut(num_complex::Complex64),
    #[error("frame velocity {0} ties with a mode velocity")]
    VelocityTie(f64),
    #[error("r(z0) vanishes")]
    ReflectionZero,
    #[error("Painlevé solution blew up at s = {0}")]
    PainleveBlowUp(f64),
    #[error("s = {0} is outside the solved Painlevé grid")]
    OutsideGrid(f64),
    #[error("α calibration residual {residual:e} exceeds the bound {bound:e}")]
    FitFailure { residual: f64, bound: f64 },
    #[error("({x}, {t}) is not in the expected region: {expected}")]
    RegionMismatch { x: f64, t: f64, expected: &'static str },
    #[error("frame velocity does not match the selected mode")]
    FrameMismatch,
    #[error("initial data does not fit in the periodic box (|u| = {0:e} outside)")]
    SupportOverflow(f64),
    #[error("time step {dt} exceeds the stability bound {bound}")]
    Cfl { dt: f64, bound: f64 },
    #[error("data is not reflectionless (max |r| = {0:e})")]
    NotReflectionless(f64),
    #[error("genericity violated: {0}")]
    NonGeneric(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::NotDecayed(_)
                | Error::NonImaginaryNorming(_)
                | Error::InsufficientCoverage(_)
                | Error::FrameMismatch
                | Error::RegionMismatch { .. }
                | Error::SupportOverflow(_)
                | Error::NotReflectionless(_)
                | Error::NonGeneric(_)
                | Error::Parse(_)
                | Error::Io(_)
                | Error::Json(_)
                | Error::Csv(_)
                | Error::Cfl { .. }
        )
    }
}
