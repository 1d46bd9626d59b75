//! 3×3 complex matrices, truncated Laurent loops, the order-6 automorphism σ,
//! the real-form involution τ and the eigenspace decomposition `g = ⊕ g_k`.

mod laurent;
mod matrix;

pub use laurent::{circle_points, Loop, DEFAULT_TRUNC, DEFAULT_TWIST_SAMPLES};
pub use matrix::{expm, CMat3};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::Real;
use matrix::c;

/// `ε = e^{iπ/3}`.
pub fn epsilon<T: Real>() -> Complex<T> {
    let a = std::f64::consts::FRAC_PI_3;
    c(a.cos(), a.sin())
}

/// `ε^k` for any integer `k`, reduced mod 6 before evaluation.
pub fn epsilon_pow<T: Real>(k: i64) -> Complex<T> {
    let a = std::f64::consts::FRAC_PI_3 * k.rem_euclid(6) as f64;
    c(a.cos(), a.sin())
}

/// The matrix `P` defining σ; it is its own inverse.
pub fn p_matrix<T: Real>() -> CMat3<T> {
    let z = Complex::zero();
    CMat3::new([[z, epsilon_pow(2), z], [epsilon_pow(4), z, z], [z, z, Complex::one()]])
}

/// Clifford torus generator `A = [[0,0,i],[i,0,0],[0,i,0]]` (an element of g₅).
pub fn clifford_a<T: Real>() -> CMat3<T> {
    let z = Complex::zero();
    let i = Complex::i();
    CMat3::new([[z, z, i], [i, z, z], [z, i, z]])
}

/// Algebra automorphism `σ(ξ) = −P ξᵗ P⁻¹`.
pub fn sigma_alg<T: Real>(x: &CMat3<T>) -> CMat3<T> {
    let p = p_matrix::<T>();
    -(p * x.transpose() * p)
}

/// Group automorphism `σ(g) = P (gᵗ)⁻¹ P⁻¹`; `None` if `g` is singular.
pub fn sigma_grp<T: Real>(g: &CMat3<T>) -> Option<CMat3<T>> {
    let p = p_matrix::<T>();
    Some(p * g.transpose().inverse()? * p)
}

/// Algebra real-form involution `τ(ξ) = −ξ̄ᵗ`; fixed points are su(3).
pub fn tau<T: Real>(x: &CMat3<T>) -> CMat3<T> {
    -x.adjoint()
}

/// Group real-form involution `τ(g) = (ḡᵗ)⁻¹`.
pub fn tau_grp<T: Real>(g: &CMat3<T>) -> Option<CMat3<T>> {
    g.adjoint().inverse()
}

/// Projection onto the `ε^k` eigenspace of σ: `(1/6) Σ_j ε^{-jk} σ^j(X)`.
///
/// On sl(3) this reproduces the explicit eigenspace table; the identity
/// component of a non-traceless input lands in the `k = 3` slot.
pub fn eigenspace_project<T: Real>(x: &CMat3<T>, k: i64) -> CMat3<T> {
    let mut acc = CMat3::zero();
    let mut sj = *x;
    for j in 0..6i64 {
        acc += sj.scale(epsilon_pow(-j * k));
        sj = sigma_alg(&sj);
    }
    acc.scale_re(T::from_f64(1.0 / 6.0).unwrap())
}

/// Membership in the sl(3) eigenspace `g_k` within `tol`.
pub fn in_eigenspace<T: Real>(x: &CMat3<T>, k: i64, tol: T) -> bool {
    let defect = sigma_alg(x) - x.scale(epsilon_pow(k));
    defect.max_abs() <= tol && x.trace().norm() <= tol
}

/// Offsets `s = (2, 1, 0)`: entry `(r, c)` may be nonzero at Fourier degree `d`
/// of a twisted loop only when `d ≡ s_r − s_c (mod 3)`. This is the linear
/// part of the twisting, coming from the inner automorphism `σ²`.
pub(crate) const SLOT_OFFSET: [i64; 3] = [2, 1, 0];

/// Whether entry `(r, col)` is allowed at degree `d` of a twisted loop.
pub fn slot_allowed(d: i64, r: usize, col: usize) -> bool {
    (SLOT_OFFSET[r] - SLOT_OFFSET[col] - d).rem_euclid(3) == 0
}

/// The unique column allowed in row `r` at degree `d`.
pub fn allowed_column(d: i64, r: usize) -> usize {
    (0..3).find(|&col| slot_allowed(d, r, col)).expect("every row has one slot")
}
