//! Potential → holomorphic frame `C` → Iwasawa → extended frame `F` → surface data.

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::factorization::{birkhoff, iwasawa, IwasawaFactors};
use crate::geometry::SampleGrid;
use crate::ode::{integrate, OdeOptions};
use crate::potentials::{wu_slots, PotentialSpec};
use crate::su3_loop::{clifford_a, expm, tau, CMat3, Loop, DEFAULT_TWIST_SAMPLES};
use crate::{ComplexMatrix3, Error, LoopMatrix, Result};

/// Default local ODE tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Boundary-to-peak coefficient ratio that counts as truncation overflow.
pub const OVERFLOW_RATIO: f64 = 1e-6;
/// Samples with `e^{u/2}` below this are branch points.
pub const METRIC_FLOOR: f64 = 1e-10;

/// Per-point surface data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceSample {
    pub z: Complex64,
    /// Horizontal lift `F(z, λ₀) e₃ ∈ S⁵`.
    pub lift: [Complex64; 3],
    /// Metric exponent, `g = 2e^u |dz|²`; NaN at singular samples.
    pub u: f64,
    /// Cubic-form coefficient of the frame equations.
    pub psi: Complex64,
    /// `(0,0)` entry of the `λ⁰` coefficient of `V₊`.
    pub v0: Complex64,
    pub lambda0: Complex64,
    pub singular: bool,
    /// Iwasawa residual.
    pub residual: f64,
    /// Largest frame coefficient at `|degree| = trunc`.
    pub tail_norm: f64,
    /// Max of `‖F*F − I‖` on S¹ samples.
    pub unitarity: f64,
    /// Max of `|det F − 1|` on S¹ samples.
    pub det_defect: f64,
}

impl SurfaceSample {
    /// Sample marking a node where the pipeline failed.
    pub fn failed(z: Complex64, lambda0: Complex64) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        Self {
            z,
            lift: [nan; 3],
            u: f64::NAN,
            psi: nan,
            v0: nan,
            lambda0,
            singular: true,
            residual: f64::NAN,
            tail_norm: f64::NAN,
            unitarity: f64::NAN,
            det_defect: f64::NAN,
        }
    }
}

/// Holomorphic frame, extended frame and plus factor at one node.
#[derive(Clone, Debug)]
pub struct FrameNode {
    pub z: Complex64,
    pub holomorphic: LoopMatrix,
    pub frame: LoopMatrix,
    pub v_plus: LoopMatrix,
    pub residual: f64,
}

/// Frames over a grid; failed nodes are absent and listed in `errors`.
#[derive(Clone, Debug)]
pub struct FrameField {
    pub nodes: Vec<FrameNode>,
    pub potential: PotentialSpec,
    pub trunc: usize,
    pub errors: Vec<(usize, Complex64, Error)>,
}

/// Sampling grid in the `z` plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    /// Radii `r_min + (radius − r_min)(i+1)/n_r`, angles `2πj/n_theta`; radius-major order.
    Polar {
        #[serde(default)]
        r_min: f64,
        radius: f64,
        n_r: usize,
        n_theta: usize,
    },
    /// `nx × ny` nodes on `[−extent, extent]²`, rows of constant `y`.
    Cartesian { extent: f64, nx: usize, ny: usize },
    /// `n` nodes on the ray at `angle`, radii `radius·(i+1)/n`.
    Ray {
        radius: f64,
        n: usize,
        #[serde(default)]
        angle: f64,
    },
}

impl GridSpec {
    pub fn nodes(&self) -> Vec<Complex64> {
        match *self {
            GridSpec::Polar { r_min, radius, n_r, n_theta } => (0..n_r)
                .flat_map(|i| {
                    let r = r_min + (radius - r_min) * (i + 1) as f64 / n_r as f64;
                    (0..n_theta).map(move |j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n_theta as f64))
                })
                .collect(),
            GridSpec::Cartesian { extent, nx, ny } => {
                let coord = |i: usize, n: usize| if n <= 1 { 0.0 } else { -extent + 2.0 * extent * i as f64 / (n - 1) as f64 };
                (0..ny).flat_map(|j| (0..nx).map(move |i| Complex64::new(coord(i, nx), coord(j, ny)))).collect()
            }
            GridSpec::Ray { radius, n, angle } => {
                (0..n).map(|i| Complex64::from_polar(radius * (i + 1) as f64 / n as f64, angle)).collect()
            }
        }
    }
}

fn pack(c: &LoopMatrix, lo: i64, hi: i64, out: &mut [f64]) {
    let mut k = 0;
    for d in lo..=hi {
        let m = c.coeff(d);
        for row in &m.m {
            for x in row {
                out[k] = x.re;
                out[k + 1] = x.im;
                k += 2;
            }
        }
    }
}

fn unpack(y: &[f64], lo: i64, hi: i64, twisted: bool) -> LoopMatrix {
    let coeffs = (lo..=hi)
        .enumerate()
        .map(|(i, _)| CMat3::from_fn(|r, c| Complex64::new(y[18 * i + 2 * (3 * r + c)], y[18 * i + 2 * (3 * r + c) + 1])))
        .collect();
    Loop::from_coeffs(lo, coeffs, twisted)
}

/// Window of `λ`-degrees carried while integrating `dC = C η`.
fn window(spec: &PotentialSpec, trunc: usize) -> (i64, i64) {
    let t = trunc as i64;
    let hi = match &spec.d_matrix {
        Some(d) if d.max_degree() > 0 => t,
        _ => 0,
    };
    (-t, hi)
}

/// Continue `C` from `c_start` at `path[0]` along the polygon `path`.
pub fn integrate_path(spec: &PotentialSpec, c_start: &LoopMatrix, path: &[Complex64], trunc: usize, tol: f64) -> Result<LoopMatrix> {
    let (lo, hi) = window(spec, trunc);
    let nd = (hi - lo + 1) as usize;
    let mut y = vec![0.0; 18 * nd];
    pack(c_start, lo, hi, &mut y);
    let opts = OdeOptions { tol, ..OdeOptions::default() };
    for seg in path.windows(2) {
        let (z0, dz) = (seg[0], seg[1] - seg[0]);
        if dz.is_zero() {
            continue;
        }
        let constant_eta = spec.d_matrix.as_ref().map(|d| d.scale(dz));
        let rhs = |t: f64, state: &[f64], out: &mut [f64]| -> Result<()> {
            let z = z0 + dz * t;
            let eta = match &constant_eta {
                Some(e) => e.clone(),
                None => spec.eta(z).scale(dz),
            };
            if !eta.terms().all(|(_, m)| m.is_finite()) {
                return Err(Error::PoleOnPath(z));
            }
            let c = unpack(state, lo, hi, true);
            let prod = c.product_window(&eta, lo, hi);
            pack(&prod, lo, hi, out);
            Ok(())
        };
        let sol = integrate(rhs, 0.0, &y, 1.0, &opts, false, |_, _| false)?;
        y = sol.last().y.clone();
    }
    let c = unpack(&y, lo, hi, true);
    let peak = c.max_coeff_norm();
    let boundary = c.coeff(lo).max_abs().max(if hi > 0 { c.coeff(hi).max_abs() } else { 0.0 });
    if peak > 0.0 && boundary > OVERFLOW_RATIO * peak {
        return Err(Error::TruncationOverflow(boundary / peak));
    }
    Ok(c)
}

/// `C(z, ·)` by integrating `dC = C η`, `C(base) = I`, along the straight segment.
pub fn integrate_frame(spec: &PotentialSpec, z: Complex64, trunc: usize, tol: f64) -> Result<LoopMatrix> {
    integrate_path(spec, &Loop::identity(), &[spec.base_point, z], trunc, tol)
}

/// Extended frame `F(z, ·)` and plus factor `V₊(z, ·)` with `C = F V₊`.
pub fn extended_frame(spec: &PotentialSpec, z: Complex64, trunc: usize) -> Result<(LoopMatrix, LoopMatrix)> {
    let f = iwasawa(&integrate_frame(spec, z, trunc, DEFAULT_TOL)?, trunc)?;
    Ok((f.unitary, f.v_plus))
}

/// Surface data from an Iwasawa splitting of `C(z, ·)`.
pub fn sample_from_factors(spec: &PotentialSpec, z: Complex64, factors: &IwasawaFactors, lambda0: Complex64, trunc: usize) -> SurfaceSample {
    let f_at = factors.unitary.eval(lambda0);
    let v0 = factors.v_plus.coeff(0).m[0][0];
    let a = match &spec.d_matrix {
        Some(d) => d.coeff(-1).m[0][2] / Complex64::i(),
        None => spec.a_slot(z),
    };
    let scale = a.norm() * v0.re;
    let singular = !(scale >= METRIC_FLOOR);
    let psi = match &spec.d_matrix {
        Some(d) => {
            let top = d.coeff(-1);
            let i = Complex64::i();
            -(top.m[0][2] / i).powu(2) * (top.m[1][0] / i)
        }
        None => spec.psi(z),
    };
    SurfaceSample {
        z,
        lift: f_at.column(2),
        u: if singular { f64::NAN } else { 2.0 * scale.ln() },
        psi,
        v0,
        lambda0,
        singular,
        residual: factors.residual,
        tail_norm: factors.unitary.tail_norm(trunc),
        unitarity: factors.unitary.unitarity_defect(DEFAULT_TWIST_SAMPLES),
        det_defect: factors.unitary.determinant_defect(DEFAULT_TWIST_SAMPLES),
    }
}

/// Surface sample at `(z, λ₀)`.
pub fn surface_sample(spec: &PotentialSpec, z: Complex64, lambda0: Complex64, trunc: usize) -> Result<SurfaceSample> {
    let c = integrate_frame(spec, z, trunc, DEFAULT_TOL)?;
    let f = iwasawa(&c, trunc)?;
    Ok(sample_from_factors(spec, z, &f, lambda0, trunc))
}

/// Output of [`grid_sample`].
#[derive(Clone, Debug)]
pub struct GridSamples {
    /// Node-major, then `λ₀` order; failed nodes carry [`SurfaceSample::failed`].
    pub samples: Vec<SurfaceSample>,
    pub frames: FrameField,
}

/// Samples at every node and every `λ₀`, computed in parallel.
pub fn grid_sample(spec: &PotentialSpec, nodes: &[Complex64], lambdas: &[Complex64], trunc: usize, tol: f64) -> GridSamples {
    let results: Vec<Result<FrameNode>> = nodes
        .par_iter()
        .map(|&z| {
            let c = integrate_frame(spec, z, trunc, tol)?;
            let f = iwasawa(&c, trunc)?;
            Ok(FrameNode { z, holomorphic: c, frame: f.unitary, v_plus: f.v_plus, residual: f.residual })
        })
        .collect();
    let mut samples = Vec::with_capacity(nodes.len() * lambdas.len());
    let mut frames = FrameField { nodes: Vec::new(), potential: spec.clone(), trunc, errors: Vec::new() };
    for (idx, (res, &z)) in results.into_iter().zip(nodes).enumerate() {
        match res {
            Ok(node) => {
                let factors = IwasawaFactors { unitary: node.frame.clone(), v_plus: node.v_plus.clone(), residual: node.residual, condition: 1.0 };
                samples.extend(lambdas.iter().map(|&l| sample_from_factors(spec, z, &factors, l, trunc)));
                frames.nodes.push(node);
            }
            Err(e) => {
                samples.extend(lambdas.iter().map(|&l| SurfaceSample::failed(z, l)));
                frames.errors.push((idx, z, e));
            }
        }
    }
    GridSamples { samples, frames }
}

/// Samples along a ray, continuing `C` node to node.
pub fn ray_samples(spec: &PotentialSpec, angle: f64, radii: &[f64], lambda0: Complex64, trunc: usize, tol: f64) -> Result<Vec<SurfaceSample>> {
    let dir = Complex64::from_polar(1.0, angle);
    let mut c = Loop::identity();
    let mut prev = spec.base_point;
    let mut frames = Vec::with_capacity(radii.len());
    for &r in radii {
        let z = spec.base_point + dir * r;
        c = integrate_path(spec, &c, &[prev, z], trunc, tol)?;
        frames.push((z, c.clone()));
        prev = z;
    }
    frames
        .par_iter()
        .map(|(z, c)| Ok(sample_from_factors(spec, *z, &iwasawa(c, trunc)?, lambda0, trunc)))
        .collect()
}

/// `size × size` patch of samples with spacing `h` centred at `center`.
///
/// `C` is integrated to the centre once and continued along short segments
/// to the other nodes, so ODE errors are shared across the stencil.
pub fn sample_patch(spec: &PotentialSpec, center: Complex64, h: f64, size: usize, lambda0: Complex64, trunc: usize, tol: f64) -> Result<SampleGrid> {
    let c0 = integrate_frame(spec, center, trunc, tol)?;
    let half = (size / 2) as f64;
    let mut samples = Vec::with_capacity(size * size);
    for j in 0..size {
        for i in 0..size {
            let z = center + Complex64::new((i as f64 - half) * h, (j as f64 - half) * h);
            let c = if z == center { c0.clone() } else { integrate_path(spec, &c0, &[center, z], trunc, tol)? };
            samples.push(sample_from_factors(spec, z, &iwasawa(&c, trunc)?, lambda0, trunc));
        }
    }
    Ok(SampleGrid { nx: size, ny: size, h, samples })
}

/// Clifford generator pair `(A, τA)`.
fn clifford_pair() -> (ComplexMatrix3, ComplexMatrix3) {
    let a = clifford_a::<f64>();
    (a, tau(&a))
}

/// Closed-form Clifford frame `exp(zλ⁻¹A + z̄λτA)` as a loop on degrees `[-trunc, trunc]`.
pub fn clifford_frame_loop(z: Complex64, trunc: usize) -> LoopMatrix {
    let (a, ta) = clifford_pair();
    let x = Loop::from_terms(&[(-1, a.scale(z)), (1, ta.scale(z.conj()))], true);
    let t = trunc as i64;
    Loop::exp_of(&x, -t, t, 8 * (trunc + 8).next_power_of_two())
}

/// Closed-form Clifford sample.
pub fn clifford_oracle(z: Complex64, lambda0: Complex64) -> SurfaceSample {
    let (a, ta) = clifford_pair();
    let f = expm(&(a.scale(z / lambda0) + ta.scale(z.conj() * lambda0)));
    SurfaceSample {
        z,
        lift: f.column(2),
        u: 0.0,
        psi: Complex64::new(-1.0, 0.0),
        v0: Complex64::new(1.0, 0.0),
        lambda0,
        singular: false,
        residual: 0.0,
        tail_norm: 0.0,
        unitarity: f.unitarity_defect(),
        det_defect: (f.det() - 1.0).norm(),
    }
}

/// Closed-form totally geodesic sample for `a = i e^{u₀/2}` (pipeline frame at `λ₀ = 1`).
pub fn rp2_oracle(a: Complex64, z: Complex64) -> SurfaceSample {
    let rho = a.norm_sqr() * z.norm_sqr() / 2.0;
    let w = 1.0 + rho;
    SurfaceSample {
        z,
        lift: [a * z / w, a * z.conj() / w, Complex64::new((1.0 - rho) / w, 0.0)],
        u: (a.norm_sqr() / (w * w)).ln(),
        psi: Complex64::zero(),
        v0: Complex64::new(1.0 / w, 0.0),
        lambda0: Complex64::new(1.0, 0.0),
        singular: false,
        residual: 0.0,
        tail_norm: 0.0,
        unitarity: 0.0,
        det_defect: 0.0,
    }
}

/// `|e^{u/2} − |(0,2) entry of the λ⁻¹ coefficient of F⁻¹F_z||` by central differences.
pub fn metric_fd_check(spec: &PotentialSpec, z: Complex64, h: f64, trunc: usize) -> Result<f64> {
    let c0 = integrate_frame(spec, z, trunc, DEFAULT_TOL)?;
    let frame_at = |dz: Complex64| -> Result<LoopMatrix> {
        let c = integrate_path(spec, &c0, &[z, z + dz], trunc, DEFAULT_TOL)?;
        Ok(iwasawa(&c, trunc)?.unitary)
    };
    let f0 = iwasawa(&c0, trunc)?;
    let dx = frame_at(Complex64::new(h, 0.0))?.sub(&frame_at(Complex64::new(-h, 0.0))?).scale(Complex64::new(0.5 / h, 0.0));
    let dy = frame_at(Complex64::new(0.0, h))?.sub(&frame_at(Complex64::new(0.0, -h))?).scale(Complex64::new(0.5 / h, 0.0));
    let dz = dx.sub(&dy.scale(Complex64::i())).scale(Complex64::new(0.5, 0.0));
    let t = trunc as i64;
    let maurer_cartan = f0.unitary.adjoint_on_circle().product(&dz, t as usize);
    let entry = maurer_cartan.coeff(-1).m[0][2].norm();
    let sample = sample_from_factors(spec, z, &f0, Complex64::new(1.0, 0.0), trunc);
    Ok(((sample.u / 2.0).exp() - entry).abs())
}

/// Slots `(a, b)` at `z` regenerated from the computed metric and cubic form.
///
/// The minus factor of the Birkhoff splitting of `F(z, ·)` is the holomorphic
/// frame, whose `λ⁻¹` coefficient integrates `η₋₁`; its `x`-derivative (4th
/// order, spacing `h`) gives `e^{u(z,0) − u(0,0)/2}`. Together with `u(0,0)`
/// and `ψ(z)` from the samples, the slots are rebuilt by [`wu_slots`].
pub fn wu_round_trip(spec: &PotentialSpec, z: Complex64, h: f64, trunc: usize, tol: f64) -> Result<(Complex64, Complex64)> {
    let c0 = integrate_frame(spec, z, trunc, tol)?;
    let top = |dx: f64| -> Result<ComplexMatrix3> {
        let c = if dx == 0.0 { c0.clone() } else { integrate_path(spec, &c0, &[z, z + dx], trunc, tol)? };
        let frame = iwasawa(&c, trunc)?.unitary;
        Ok(birkhoff(&frame, trunc)?.f_minus.coeff(-1))
    };
    let d = (top(-2.0 * h)? - top(2.0 * h)? + (top(h)? - top(-h)?).scale_re(8.0)).scale_re(1.0 / (12.0 * h));
    let a_axis = d.m[0][2] / Complex64::i();
    let origin = surface_sample(spec, spec.base_point, Complex64::new(1.0, 0.0), trunc)?;
    let here = surface_sample(spec, z, Complex64::new(1.0, 0.0), trunc)?;
    // u(0,0) cancels from both slots; at a branch point the metric vanishes and 0 stands in
    let u00 = if origin.singular { 0.0 } else { origin.u };
    let u_axis = a_axis.ln() + u00 / 2.0;
    Ok(wu_slots(u_axis, u00, here.psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{homogeneity_params, Polynomial};

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_shapes() {
        let polar = GridSpec::Polar { r_min: 0.0, radius: 2.0, n_r: 8, n_theta: 8 };
        assert_eq!(polar.nodes().len(), 64);
        assert!(polar.nodes().iter().all(|z| z.norm() > 0.0 && z.norm() <= 2.0 + 1e-15));
        let cart = GridSpec::Cartesian { extent: 1.0, nx: 3, ny: 2 };
        assert_eq!(cart.nodes(), vec![cz(-1.0, -1.0), cz(0.0, -1.0), cz(1.0, -1.0), cz(-1.0, 1.0), cz(0.0, 1.0), cz(1.0, 1.0)]);
        assert!(GridSpec::Polar { r_min: 0.0, radius: 1.0, n_r: 0, n_theta: 4 }.nodes().is_empty());
    }

    #[test]
    fn clifford_holomorphic_frame_is_exponential() {
        let spec = PotentialSpec::clifford();
        let z = cz(0.9, -1.3);
        let c = integrate_frame(&spec, z, 16, DEFAULT_TOL).unwrap();
        let expected = Loop::exp_of(&Loop::monomial(-1, clifford_a().scale(z), true), -16, 0, 64);
        assert!(c.sub(&expected).wiener_norm() < 1e-9);
    }

    #[test]
    fn base_point_gives_identity() {
        let spec = PotentialSpec::radial(1, 0, cz(1.0, 0.0), cz(-1.0, 0.0)).unwrap();
        let c = integrate_frame(&spec, Complex64::zero(), 16, DEFAULT_TOL).unwrap();
        assert_eq!(c.sub(&Loop::identity()).wiener_norm(), 0.0);
        let (f, v) = extended_frame(&spec, Complex64::zero(), 16).unwrap();
        assert!(f.sub(&Loop::identity()).wiener_norm() < 1e-12);
        assert!(v.sub(&Loop::identity()).wiener_norm() < 1e-12);
    }

    #[test]
    fn degree_one_frame_is_exponential() {
        let (a, ta) = clifford_pair();
        let d = Loop::from_terms(&[(-1, a.scale(cz(0.7, 0.0))), (1, ta.scale(cz(0.7, 0.0)))], true);
        let spec = PotentialSpec::constant_degree_one(d.clone()).unwrap();
        let z = cz(0.4, 0.3);
        let c = integrate_frame(&spec, z, 16, DEFAULT_TOL).unwrap();
        let expected = Loop::exp_of(&d.scale(z), -16, 16, 128);
        assert!(c.sub(&expected).wiener_norm() < 1e-9);
    }

    #[test]
    fn clifford_samples() {
        let spec = PotentialSpec::clifford();
        let s = surface_sample(&spec, Complex64::zero(), cz(1.0, 0.0), 16).unwrap();
        assert!((s.lift[2] - 1.0).norm() < 1e-12 && s.lift[0].norm() < 1e-12);
        assert!(s.u.abs() < 1e-12);
        assert_eq!(s.psi, cz(-1.0, 0.0));
        let lam = Complex64::from_polar(1.0, 0.9);
        let z = cz(1.1, -0.6);
        let s = surface_sample(&spec, z, lam, 16).unwrap();
        let o = clifford_oracle(z, lam);
        assert!(s.u.abs() < 1e-8);
        for k in 0..3 {
            assert!((s.lift[k] - o.lift[k]).norm() < 1e-8);
        }
    }

    #[test]
    fn clifford_oracle_examples() {
        let s = clifford_oracle(Complex64::zero(), cz(1.0, 0.0));
        assert!((s.lift[2] - 1.0).norm() < 1e-15);
        let s = clifford_oracle(cz(1.0, 0.0), cz(1.0, 0.0));
        let norm: f64 = s.lift.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
        // equal moduli in the discrete Fourier basis, which diagonalizes the Clifford matrix
        let s = clifford_oracle(cz(0.73, 0.0), cz(1.0, 0.0));
        for j in 0..3 {
            let c: Complex64 = (0..3)
                .map(|k| Complex64::from_polar(1.0 / 3f64.sqrt(), -2.0 * std::f64::consts::PI * (j * k) as f64 / 3.0) * s.lift[k])
                .sum();
            assert!((c.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn rp2_oracle_examples() {
        let a = cz(0.0, 1.0);
        let s = rp2_oracle(a, Complex64::zero());
        assert_eq!(s.lift, [Complex64::zero(), Complex64::zero(), cz(1.0, 0.0)]);
        let s = rp2_oracle(a, cz(2f64.sqrt(), 0.0));
        assert!(s.lift[2].norm() < 1e-15);
        let s = rp2_oracle(cz(0.0, 1.7), cz(0.3, -2.1));
        let norm: f64 = s.lift.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rp2_pipeline_matches_oracle() {
        let spec = PotentialSpec::rp2(0.0);
        let a = cz(0.0, 1.0);
        for z in [cz(0.5, 0.2), cz(-1.2, 0.9), cz(0.3, -1.9)] {
            let s = surface_sample(&spec, z, cz(1.0, 0.0), 16).unwrap();
            let o = rp2_oracle(a, z);
            for k in 0..3 {
                assert!((s.lift[k] - o.lift[k]).norm() < 1e-8, "{z}: {:?} vs {:?}", s.lift, o.lift);
            }
            assert!((s.u - o.u).abs() < 1e-8);
        }
    }

    #[test]
    fn radial_branch_point_is_singular() {
        let spec = PotentialSpec::radial(1, 0, cz(1.0, 0.0), cz(-1.0, 0.0)).unwrap();
        assert!(surface_sample(&spec, Complex64::zero(), cz(1.0, 0.0), 16).unwrap().singular);
        assert!(!surface_sample(&spec, cz(0.5, 0.0), cz(1.0, 0.0), 16).unwrap().singular);
    }

    #[test]
    fn path_independence() {
        let spec = PotentialSpec::normalized(
            Polynomial::new(vec![cz(1.0, 0.0), cz(0.3, -0.2)]),
            Polynomial::new(vec![cz(0.5, 0.1), Complex64::zero(), cz(0.2, 0.0)]),
        );
        let z = cz(0.8, 0.6);
        let tol = 1e-10;
        let direct = integrate_frame(&spec, z, 16, tol).unwrap();
        let bent = integrate_path(&spec, &Loop::identity(), &[Complex64::zero(), cz(0.8, -0.4), cz(1.2, 0.6), z], 16, tol).unwrap();
        assert!(direct.sub(&bent).wiener_norm() < 10.0 * tol);
    }

    #[test]
    fn homogeneity_transport_of_frames() {
        let spec = PotentialSpec::radial(1, 0, cz(1.0, 0.0), cz(-1.0, 0.0)).unwrap();
        let h = homogeneity_params(1, 0, 3.0);
        let z = cz(0.7, 0.4);
        let (f, _) = extended_frame(&spec, z, 16).unwrap();
        for t in [0.3, 1.1, 2.0] {
            let (p, q, tm) = h.at(t);
            let (fp, _) = extended_frame(&spec, p * z, 16).unwrap();
            let lam = Complex64::from_polar(1.0, 0.37);
            let lhs = fp.eval(q * lam);
            let rhs = tm * f.eval(lam) * tm.adjoint();
            assert!((lhs - rhs).op_norm() < 1e-7);
        }
    }

    #[test]
    fn metric_matches_maurer_cartan_form() {
        let spec = PotentialSpec::radial(1, 0, cz(1.0, 0.0), cz(-1.0, 0.0)).unwrap();
        assert!(metric_fd_check(&spec, cz(0.6, 0.3), 1e-4, 16).unwrap() < 1e-6);
    }

    #[test]
    fn wu_round_trip_recovers_slots() {
        let spec = PotentialSpec::radial(1, 0, cz(1.0, 0.0), cz(-1.0, 0.0)).unwrap();
        let z = cz(0.5, 0.3);
        let (a, b) = wu_round_trip(&spec, z, 1e-3, 16, DEFAULT_TOL).unwrap();
        assert!((a - spec.a_slot(z)).norm() < 1e-6);
        assert!((b - spec.b_slot(z)).norm() < 1e-6);
    }

    #[test]
    fn overflow_is_reported() {
        let spec = PotentialSpec::clifford();
        assert!(matches!(integrate_frame(&spec, cz(6.0, 0.0), 8, DEFAULT_TOL), Err(Error::TruncationOverflow(_))));
    }

    #[test]
    fn grid_sampling_collects_errors() {
        let spec = PotentialSpec::clifford();
        let nodes = [cz(0.5, 0.0), cz(6.0, 0.0)];
        let out = grid_sample(&spec, &nodes, &[cz(1.0, 0.0)], 8, DEFAULT_TOL);
        assert_eq!(out.samples.len(), 2);
        assert!(!out.samples[0].singular && out.samples[1].singular);
        assert_eq!(out.frames.errors.len(), 1);
        assert!(grid_sample(&spec, &[], &[cz(1.0, 0.0)], 8, DEFAULT_TOL).samples.is_empty());
    }
}
