use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, WeldError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeldError {
    #[error("invalid grid size {0}: must be even and at least 16")]
    InvalidGrid(usize),

    #[error("sample count {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("circle map is not orientation preserving at node {node}")]
    NotMonotone { node: usize },

    #[error("circle map has degree {0:.6}, expected 1")]
    NotDegreeOne(f64),

    #[error("polynomial root finding did not converge after {iterations} iterations")]
    RootsNotConverged {
        iterations: usize,
        partial: Vec<Complex64>,
    },

    #[error(
        "pole {pole} is numerically a multiple root (|Q'| = {derivative:.3e}); \
         only simple roots of Q are supported"
    )]
    MultipleRoot { pole: Complex64, derivative: f64 },

    #[error("map normalization violated: {0}")]
    Normalization(String),

    #[error("boundary curve is not simple: {0}")]
    NotSimple(String),

    #[error("derivative vanishes on the boundary at node {node}")]
    VanishingDerivative { node: usize },

    #[error("evaluation point {0} is not strictly inside the unit disk")]
    NotInterior(Complex64),

    #[error(
        "numerical rank gap failed: smallest sigma ratio {smallest:.3e}, \
         second-smallest sigma ratio {second:.3e}"
    )]
    RankGap { smallest: f64, second: f64 },

    #[error("kernel vector changes sign (min/max = {ratio:.3e}); grid under-resolves the map")]
    SignIndefinite { ratio: f64 },

    #[error("kernel function is not normalized (mean of 1/v0 = {mean:.12})")]
    NotNormalized { mean: f64 },

    #[error("function is not analytic in the exterior disk (max coefficient {max_coeff:.3e})")]
    NotExteriorAnalytic { max_coeff: f64 },

    #[error("welding inconsistency: forbidden Laurent coefficients reach {consistency:.3e}")]
    WeldingInconsistent { consistency: f64 },

    #[error("ODE integration failed: {0}")]
    Ode(String),

    #[error("kernel function is not positive on the circle (min = {min:.3e})")]
    NotPositive { min: f64 },

    #[error("root {root} of Q lies too close to the unit circle")]
    RootNearCircle { root: Complex64 },

    #[error("roots {0} and {1} coincide")]
    CoincidentRoots(Complex64, Complex64),

    #[error("trigonometric polynomial must have degree at least 1 (constant kernels are rotations)")]
    DegreeZero,

    #[error("no solution of the w_k system found after {attempts} attempts")]
    NoCandidates { attempts: usize },

    #[error("no univalent candidate reproduces the kernel ({tried} candidates tried)")]
    NoUnivalentCandidate { tried: usize },

    #[error("{} candidates survive filtering (residuals {residuals:?})", residuals.len())]
    MultipleSurvivors { residuals: Vec<f64> },
}
