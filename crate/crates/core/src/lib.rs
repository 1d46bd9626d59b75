//! Loop-group (DPW) construction of minimal Lagrangian surfaces in CP².
//!
//! The pipeline runs from a holomorphic potential to sampled surfaces:
//! integrate `dC = C η`, split `C = F V₊` (Iwasawa), and read the horizontal
//! lift, metric and cubic form off the unitary frame `F`. Geometry residuals,
//! the Painlevé III reduction for radial surfaces and the Clifford closing
//! conditions certify the output.

pub mod cli;
pub mod dpw;
pub mod factorization;
pub mod geometry;
pub mod ode;
pub mod painleve;
pub mod periodicity;
pub mod potentials;
pub mod su3_loop;

use std::fmt::Debug;

/// Real scalar backing the matrix and loop arithmetic: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Debug
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

pub use num_complex::Complex64;

/// Double-precision 3×3 complex matrix used throughout the pipeline.
pub type ComplexMatrix3 = su3_loop::CMat3<f64>;
/// Double-precision truncated Laurent loop.
pub type LoopMatrix = su3_loop::Loop<f64>;
/// Single-precision variants of the arithmetic layer.
pub type ComplexMatrix3F32 = su3_loop::CMat3<f32>;
pub type LoopMatrixF32 = su3_loop::Loop<f32>;

/// Errors raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("loop is numerically singular (condition number {0:.3e})")]
    SingularLoop(f64),
    #[error("loop lies outside the Birkhoff big cell (condition number {0:.3e})")]
    OutsideBigCell(f64),
    #[error("Iwasawa Gram matrix is ill conditioned (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("potential is not a vacuum: |a| = {0}, |b| = {1}")]
    NotVacuum(f64, f64),
    #[error("b-slot z^-3 b(z^m) has a pole at the origin")]
    PoleAtOrigin,
    #[error("potential has a pole on the integration path near z = {0}")]
    PoleOnPath(Complex64),
    #[error("Laurent truncation overflow: boundary coefficient ratio {0:.3e}")]
    TruncationOverflow(f64),
    #[error("grid too coarse: {0} nodes in a direction, need at least 5")]
    GridTooCoarse(usize),
    #[error("Painlevé right-hand side outside its domain: s = {0}, h = {1}")]
    DomainError(f64, f64),
    #[error("asymptotic seeds disagree by {0:.3e}")]
    SeedTooLarge(f64),
    #[error("potential has no radial Painlevé III reduction: {0}")]
    NotRadialPIII(String),
    #[error("integrator step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
