use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tolerance:e}")]
    NonConvergence { estimate: f64, tolerance: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("truncation order {order} is too short for reliable verdicts (need at least 8)")]
    TruncationTooShort { order: usize },
    #[error("invalid weight sequence: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("negative time {0} rejected")]
    NegativeTime(f64),
    #[error("Re λ = {re} is not to the right of the abscissa {abscissa}")]
    OutOfHalfPlane { re: f64, abscissa: f64 },
    #[error("invalid kernel parameter: {0}")]
    InvalidParameter(String),
    #[error("kernel has no known exponential bound")]
    UnboundedKernel,
    #[error("zero {0} does not have positive real part")]
    NonPositiveZero(Complex64),
    #[error("kernel table i/o: {0}")]
    Io(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("operation not supported for region kind {0}")]
    UnsupportedKind(String),
    #[error("invalid region parameter: {0}")]
    InvalidParameter(String),
    #[error("grid search exhausted without a verified inclusion")]
    SearchFailure,
    #[error("region boundary is empty within the requested radius")]
    EmptyBoundary,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("λ = {lambda} lies in the spectrum (distance {distance:e})")]
    InSpectrum { lambda: Complex64, distance: f64 },
    #[error("invalid operator: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("growth exponent {exponent:.1} exceeds the overflow guard")]
    Saturation { exponent: f64 },
    #[error("time grid is invalid: {0}")]
    InvalidGrid(String),
    #[error("step too coarse: Richardson estimate {estimate:e} above tolerance {tolerance:e}")]
    StepTooCoarse { estimate: f64, tolerance: f64 },
    #[error("truncated tail {tail:e} is not negligible")]
    TailNotNegligible { tail: f64 },
    #[error("kernel transform vanishes at λ = {0}")]
    TransformZero(Complex64),
    #[error("time {time} outside the trajectory span {span}")]
    SpanExceeded { time: f64, span: f64 },
    #[error("time {time} exceeds the admissible bound {bound}")]
    TimeBoundExceeded { time: f64, bound: f64 },
    #[error("contour meets the spectrum near λ = {0}")]
    ContourThroughSpectrum(Complex64),
    #[error("differentiation unstable: {0}")]
    DifferentiationInstability(String),
    #[error(transparent)]
    Region(#[from] RegionError),
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error("sector ω + Σ meets the spectrum at {0}")]
    SectorMeetsSpectrum(Complex64),
    #[error("δ = {delta} outside the admissible interval for s = {s}")]
    DeltaOutOfRange { delta: f64, s: f64 },
    #[error("ε = {0} outside (0, 1/√2)")]
    EpsilonOutOfRange(f64),
    #[error("hypothesis check failed: {0}")]
    HypothesisFailure(String),
    #[error("weight sequence fails the standing conditions: {0}")]
    SequenceConditions(String),
}
