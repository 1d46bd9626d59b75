//! Monodromy and closing conditions of the Clifford family, and frames of
//! translationally equivariant surfaces.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::factorization::iwasawa;
use crate::su3_loop::{clifford_a, expm, tau, Loop};
use crate::{ComplexMatrix3, LoopMatrix, Result};

/// Frobenius distance below which `M(δ, λ₀)` counts as scalar.
pub const CLOSING_TOL: f64 = 1e-9;

/// Monodromy `exp(δλ₀⁻¹A + δ̄λ₀τA)` of the Clifford frame under `z ↦ z + δ`.
pub fn monodromy(delta: Complex64, lambda0: Complex64) -> ComplexMatrix3 {
    let a = clifford_a::<f64>();
    expm(&(a.scale(delta / lambda0) + tau(&a).scale(delta.conj() * lambda0)))
}

/// Translation closing the Clifford frame for the integer triple `(l₁, l₂, l₃)`.
pub fn closing_delta(l1: i64, l2: i64, l3: i64, lambda0: Complex64) -> Complex64 {
    let re = (2 * l1 - l2 - l3) as f64 / 3.0;
    let im = (l3 - l2) as f64 / 3f64.sqrt();
    // λ₀ last, so rotating the lattice is exact in floating point
    Complex64::new(re * PI, im * PI) * lambda0
}

/// Outcome of matching `M(δ, λ₀)` against `c·I` for the cube roots of unity `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosingCheck {
    pub closed: bool,
    #[serde(serialize_with = "ser_complex")]
    pub c: Complex64,
    /// Index `k` of the matched root `c = e^{2πik/3}`.
    pub residue: u8,
    /// `‖M − cI‖_F` for the matched root.
    pub residual: f64,
}

/// Match `M(δ, λ₀)` to the nearest scalar cube root of unity.
pub fn check_closing(delta: Complex64, lambda0: Complex64) -> ClosingCheck {
    let m = monodromy(delta, lambda0);
    let (residue, residual) = (0..3u8)
        .map(|k| (k, (m - ComplexMatrix3::identity().scale(cube_root(k))).frobenius()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("three candidates");
    ClosingCheck { closed: residual < CLOSING_TOL, c: cube_root(residue), residue, residual }
}

fn cube_root(k: u8) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0)
}

/// Solved closing problem for one lattice point at one `λ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosingProblem {
    #[serde(serialize_with = "ser_complex")]
    pub delta: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub lambda0: Complex64,
    pub l1: i64,
    pub l2: i64,
    pub l3: i64,
    pub k_residue: u8,
    #[serde(serialize_with = "ser_complex")]
    pub c: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub omega1: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub omega2: Complex64,
    pub closed: bool,
    pub residual: f64,
}

impl ClosingProblem {
    pub fn solve(l1: i64, l2: i64, l3: i64, lambda0: Complex64) -> Self {
        let delta = closing_delta(l1, l2, l3, lambda0);
        let check = check_closing(delta, lambda0);
        Self {
            delta,
            lambda0,
            l1,
            l2,
            l3,
            k_residue: check.residue,
            c: check.c,
            omega1: closing_delta(1, 0, 0, lambda0),
            omega2: closing_delta(0, 0, 1, lambda0),
            closed: check.closed,
            residual: check.residual,
        }
    }
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

fn exp_window(d: &LoopMatrix, z: Complex64, trunc: usize) -> LoopMatrix {
    let t = trunc as i64;
    Loop::exp_of(&d.scale(z), -t, t, 8 * trunc.max(4))
}

/// Unitary Iwasawa factor of `exp(zD(λ))`.
pub fn frame_of_exponential(d: &LoopMatrix, z: Complex64, trunc: usize) -> Result<LoopMatrix> {
    Ok(iwasawa(&exp_window(d, z, trunc), trunc)?.unitary)
}

/// Extended frame at the real parameter `x` of the constant potential `D(λ) dz`.
pub fn translational_frame(d: &LoopMatrix, x: f64, trunc: usize) -> Result<LoopMatrix> {
    frame_of_exponential(d, Complex64::new(x, 0.0), trunc)
}

/// Sup over S¹ of `‖F(t + z) − χ(t)F(z)‖` with `χ(t) = translational_frame(D, t)`.
///
/// The identity holds when `D` takes values in the unitary loop algebra, so
/// that `χ` is a one-parameter group of unitary loops.
pub fn cocycle_residual(d: &LoopMatrix, t: f64, z: Complex64, trunc: usize) -> Result<f64> {
    let direct = frame_of_exponential(d, z + t, trunc)?;
    let chi = translational_frame(d, t, trunc)?;
    let via = chi.product(&frame_of_exponential(d, z, trunc)?, trunc);
    Ok(direct.sup_distance(&via, 4 * trunc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monodromy_examples() {
        assert!((monodromy(cz(0.0, 0.0), cz(1.0, 0.0)) - ComplexMatrix3::identity()).max_abs() < 1e-15);
        let m = monodromy(cz(2.0 * PI / 3.0, 0.0), cz(1.0, 0.0));
        let c = Complex64::from_polar(1.0, 4.0 * PI / 3.0);
        assert!((m - ComplexMatrix3::identity().scale(c)).max_abs() < 1e-10);
        let m = monodromy(cz(0.37, -1.2), Complex64::from_polar(1.0, 0.4));
        assert!(m.unitarity_defect() < 1e-12);
    }

    #[test]
    fn closing_delta_examples() {
        assert_eq!(closing_delta(1, 0, 0, cz(1.0, 0.0)), cz(2.0 * PI / 3.0, 0.0));
        assert_eq!(closing_delta(0, 0, 0, cz(1.0, 0.0)), cz(0.0, 0.0));
        let d = closing_delta(0, 0, 1, cz(1.0, 0.0));
        assert!((d - cz(-PI / 3.0, PI / 3f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn check_closing_examples() {
        let r = check_closing(closing_delta(1, 0, 0, cz(1.0, 0.0)), cz(1.0, 0.0));
        assert!(r.closed);
        assert_eq!(r.residue, 2);
        assert!((r.c - Complex64::from_polar(1.0, 4.0 * PI / 3.0)).norm() < 1e-15);
        assert!(!check_closing(cz(0.1, 0.0), cz(1.0, 0.0)).closed);
        let i = cz(0.0, 1.0);
        assert!(check_closing(closing_delta(1, -1, 1, i), i).closed);
    }

    #[test]
    fn clifford_translational_frame_is_the_exponential() {
        let a = clifford_a::<f64>();
        let d = Loop::from_terms(&[(-1, a), (1, tau(&a))], true);
        let f = translational_frame(&d, 0.7, 16).unwrap();
        let exact = exp_window(&d, cz(0.7, 0.0), 16);
        assert!(f.sup_distance(&exact, 64) < 1e-12);
        let f0 = translational_frame(&d, 0.0, 16).unwrap();
        assert!(f0.sup_distance(&Loop::identity(), 64) < 1e-14);
    }
}
