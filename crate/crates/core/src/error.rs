use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("leading coefficient is numerically singular (smallest singular value {smin:.3e} <= {threshold:.3e})")]
    SingularLeading { smin: f64, threshold: f64 },

    #[error("negative argument {0} for weight evaluation")]
    NegativeRadius(f64),

    #[error("polynomial has dimension 1; no second singular value exists")]
    NoSecondSingularValue,

    #[error("eigenvalue {eigenvalue} is not resolved by the grid at eps = {epsilon:e}; refine the grid")]
    GridTooCoarse { eigenvalue: Complex64, epsilon: f64 },

    #[error("eigenvalue {0} lies outside the grid window")]
    EigenvalueOutsideWindow(Complex64),

    #[error("no sign change of F along the ray within distance {0}")]
    NoBoundaryOnRay(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is numerically an eigenvalue of the polynomial")]
    PointOnSpectrum(Complex64),

    #[error("iterate left the search window at {0}")]
    LeftWindow(Complex64),

    #[error("iteration converged to an eigenvalue near {0}")]
    ConvergedToEigenvalue(Complex64),

    #[error("iteration stopped at a point where the gradient is undefined: {0}")]
    GradientUndefined(Complex64),

    #[error("no convergence after {iterations} iterations (last iterate {last})")]
    NoConvergence { iterations: usize, last: Complex64 },

    #[error("perturbation construction failed at {mu}: residual {residual:.3e} above {threshold:.3e}")]
    ConstructionFailure {
        mu: Complex64,
        residual: f64,
        threshold: f64,
    },

    #[error("component count did not drop below {initial} up to eps = {eps_max:e}")]
    NotFoundWithinBudget { initial: usize, eps_max: f64 },
}
