//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QesError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(&'static str, &'static str),

    #[error("usage: {0}")]
    Usage(String),

    #[error("polynomial is not squarefree; repeated factor: {0}")]
    NotSquarefree(String),

    #[error("root finder did not converge after {iters} iterations (max residual {residual:.3e})")]
    RootsNotConverged { iters: usize, residual: f64 },

    #[error("degenerate leading coefficient (|lc| = {0:.3e})")]
    DegenerateLeading(f64),

    #[error("clustered roots at distance {dist:.3e} (z = {z1} and {z2})")]
    ClusteredRoots {
        z1: num_complex::Complex64,
        z2: num_complex::Complex64,
        dist: f64,
    },

    #[error("least-squares system is ill-conditioned (estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("certificate system is inconsistent for n = {n}: {detail}")]
    CertificateInconsistent { n: usize, detail: String },

    #[error("integrand pole at {pole} lies {dist:.3e} from the contour; retry with vertex offset around {suggest}")]
    PoleNearPath {
        pole: num_complex::Complex64,
        dist: f64,
        suggest: f64,
    },

    #[error("quadrature did not reach the requested tolerance (estimate {estimate:.3e}, requested {requested:.3e})")]
    QuadratureNoConvergence { estimate: f64, requested: f64 },

    #[error("turning point of Q at {point} lies {dist:.3e} from the integration start; increase the radius")]
    TurningPointNearStart {
        point: num_complex::Complex64,
        dist: f64,
    },

    #[error("radius {radius} too small: quartic decay must dominate the lower-order terms (margin {ratio:.2}, need >= 1)")]
    RadiusTooSmall { radius: f64, ratio: f64 },

    #[error("step size collapsed near {at} ({context})")]
    StepCollapse { at: String, context: String },

    #[error("zero-count classification changed between b = {b_prev} and b = {b} without a detected singularity; step too large")]
    ClassificationFlip { b_prev: f64, b: f64 },

    #[error("branch selection ambiguous at b = {b}: candidate a values {candidates:?}")]
    AmbiguousBranch { b: f64, candidates: Vec<f64> },

    #[error("no branch arm with classification m = {m} found at b = {b}; widen the range or raise b")]
    BranchNotFound { m: usize, b: f64 },

    #[error("eigenvalue scan inconclusive on [{lo}, {hi}]: {detail}")]
    ScanInconclusive { lo: f64, hi: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, QesError>;
