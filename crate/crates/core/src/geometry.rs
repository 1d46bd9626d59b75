//! Finite-difference certification of sampled surfaces.
//!
//! First derivatives use the 4th-order five-point stencil, the Laplacian the
//! 2nd-order five-point stencil. Wirtinger derivatives are
//! `∂_z = (∂_x − i∂_y)/2` and `∂_z̄ = (∂_x + i∂_y)/2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dpw::{extended_frame, sample_patch, surface_sample, SurfaceSample};
use crate::potentials::{HomogeneityData, PotentialSpec};
use crate::{ComplexMatrix3, Error, Result};

/// Minimum nodes per direction for the stencils.
pub const MIN_NODES: usize = 5;

/// Regular grid of samples, `x` fastest: node `(i, j)` sits at `z₀ + h(i + i·j)`.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub samples: Vec<SurfaceSample>,
}

impl SampleGrid {
    pub fn at(&self, i: usize, j: usize) -> &SurfaceSample {
        &self.samples[j * self.nx + i]
    }

    fn check(&self) -> Result<()> {
        if self.nx < MIN_NODES || self.ny < MIN_NODES {
            return Err(Error::GridTooCoarse(self.nx.min(self.ny)));
        }
        Ok(())
    }

    /// Interior nodes with two neighbours on each side.
    fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (2..self.ny - 2).flat_map(move |j| (2..self.nx - 2).map(move |i| (i, j)))
    }
}

/// Max residuals over a grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ResidualReport {
    pub horizontality: f64,
    pub conformality: f64,
    pub unitarity: f64,
    pub determinant: f64,
    pub tzitzeica: f64,
    pub codazzi: f64,
    pub symmetry: Option<f64>,
    /// Max of `|f_zz·conj(f_z̄) + iλ₀⁻³ψ|`, the lift-side cubic-form check.
    pub psi_lift: Option<f64>,
    pub stencil_h: f64,
}

impl ResidualReport {
    /// Entrywise max; `stencil_h` is taken from `self`.
    pub fn merge(&self, other: &Self) -> Self {
        let opt = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        };
        Self {
            horizontality: self.horizontality.max(other.horizontality),
            conformality: self.conformality.max(other.conformality),
            unitarity: self.unitarity.max(other.unitarity),
            determinant: self.determinant.max(other.determinant),
            tzitzeica: self.tzitzeica.max(other.tzitzeica),
            codazzi: self.codazzi.max(other.codazzi),
            symmetry: opt(self.symmetry, other.symmetry),
            psi_lift: opt(self.psi_lift, other.psi_lift),
            stencil_h: self.stencil_h,
        }
    }
}

fn d1<T>(f: impl Fn(isize) -> T, h: f64) -> T
where
    T: std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    (f(-2) - f(2) + (f(1) - f(-1)) * 8.0) * (1.0 / (12.0 * h))
}

fn d2<T>(f: impl Fn(isize) -> T, h: f64) -> T
where
    T: std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    ((f(1) + f(-1)) * 16.0 - (f(2) + f(-2)) - f(0) * 30.0) * (1.0 / (12.0 * h * h))
}

type Vec3 = [Complex64; 3];

#[derive(Clone, Copy)]
struct V3(Vec3);

impl std::ops::Add for V3 {
    type Output = V3;
    fn add(self, o: V3) -> V3 {
        V3(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl std::ops::Sub for V3 {
    type Output = V3;
    fn sub(self, o: V3) -> V3 {
        V3(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl std::ops::Mul<f64> for V3 {
    type Output = V3;
    fn mul(self, s: f64) -> V3 {
        V3(self.0.map(|c| c * s))
    }
}

impl V3 {
    fn scale(self, s: Complex64) -> V3 {
        V3(self.0.map(|c| c * s))
    }
}

/// Hermitian product `Σ aₖ conj(bₖ)`.
pub fn herm(a: &Vec3, b: &Vec3) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

#[derive(Clone, Copy)]
struct Partials {
    fz: V3,
    fzb: V3,
}

fn lift_partials(grid: &SampleGrid, i: usize, j: usize) -> Partials {
    let at = |di: isize, dj: isize| V3(grid.at((i as isize + di) as usize, (j as isize + dj) as usize).lift);
    let fx = d1(|k| at(k, 0), grid.h);
    let fy = d1(|k| at(0, k), grid.h);
    let mi = Complex64::new(0.0, -1.0);
    Partials { fz: (fx + fy.scale(mi)) * 0.5, fzb: (fx - fy.scale(mi)) * 0.5 }
}

/// Horizontality, conformality, unitarity and determinant residuals.
pub fn structure_residuals(grid: &SampleGrid) -> Result<ResidualReport> {
    grid.check()?;
    let mut report = ResidualReport { stencil_h: grid.h, ..ResidualReport::default() };
    for (i, j) in grid.interior() {
        let s = grid.at(i, j);
        if s.singular {
            continue;
        }
        let p = lift_partials(grid, i, j);
        let f = &s.lift;
        report.horizontality = report.horizontality.max(herm(&p.fz.0, f).norm() + herm(&p.fzb.0, f).norm());
        let conf = (herm(&p.fz.0, &p.fz.0) - s.u.exp()).norm().max(herm(&p.fz.0, &p.fzb.0).norm());
        report.conformality = report.conformality.max(conf);
    }
    for s in grid.samples.iter().filter(|s| !s.singular) {
        report.unitarity = report.unitarity.max(s.unitarity);
        report.determinant = report.determinant.max(s.det_defect);
    }
    Ok(report)
}

/// Max `|f_zz·conj(f_z̄) + iλ₀⁻³ψ|`: the lift's cubic form is `−iλ₀⁻³` times the frame's ψ.
pub fn psi_lift_residual(grid: &SampleGrid) -> Result<f64> {
    grid.check()?;
    let mut worst = 0.0f64;
    for (i, j) in grid.interior() {
        let s = grid.at(i, j);
        if s.singular {
            continue;
        }
        let at = |di: isize, dj: isize| V3(grid.at((i as isize + di) as usize, (j as isize + dj) as usize).lift);
        let fxx = d2(|k| at(k, 0), grid.h);
        let fyy = d2(|k| at(0, k), grid.h);
        let fxy = d1(|k| d1(|l| at(k, l), grid.h), grid.h);
        let fzz = (fxx - fyy - fxy.scale(Complex64::new(0.0, 2.0))) * 0.25;
        let p = lift_partials(grid, i, j);
        let lift_psi = herm(&fzz.0, &p.fzb.0);
        let expected = Complex64::new(0.0, -1.0) * s.lambda0.powi(-3) * s.psi;
        worst = worst.max((lift_psi - expected).norm());
    }
    Ok(worst)
}

/// Max `|u_zz̄ + e^u − e^{−2u}|ψ|²|` with `u_zz̄ = Δu/4` (five-point Laplacian).
pub fn tzitzeica_residual(u: &[f64], psi: &[Complex64], nx: usize, ny: usize, h: f64) -> Result<f64> {
    if nx < MIN_NODES || ny < MIN_NODES {
        return Err(Error::GridTooCoarse(nx.min(ny)));
    }
    let idx = |i: usize, j: usize| j * nx + i;
    let mut worst = 0.0f64;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let c = u[idx(i, j)];
            let nb = [u[idx(i + 1, j)], u[idx(i - 1, j)], u[idx(i, j + 1)], u[idx(i, j - 1)]];
            if !c.is_finite() || nb.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let lap = (nb.iter().sum::<f64>() - 4.0 * c) / (h * h);
            let r = lap / 4.0 + c.exp() - (-2.0 * c).exp() * psi[idx(i, j)].norm_sqr();
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// Max `|ψ_z̄|` by the 4th-order stencil.
pub fn codazzi_residual(psi: &[Complex64], nx: usize, ny: usize, h: f64) -> Result<f64> {
    if nx < MIN_NODES || ny < MIN_NODES {
        return Err(Error::GridTooCoarse(nx.min(ny)));
    }
    let idx = |i: usize, j: usize| j * nx + i;
    let mut worst = 0.0f64;
    for j in 2..ny - 2 {
        for i in 2..nx - 2 {
            let px = d1(|k| psi[idx((i as isize + k) as usize, j)], h);
            let py = d1(|k| psi[idx(i, (j as isize + k) as usize)], h);
            let pzb = (px + Complex64::i() * py) * 0.5;
            if pzb.is_finite() {
                worst = worst.max(pzb.norm());
            }
        }
    }
    Ok(worst)
}

/// All residuals of one grid.
pub fn grid_residuals(grid: &SampleGrid) -> Result<ResidualReport> {
    let mut report = structure_residuals(grid)?;
    let u: Vec<f64> = grid.samples.iter().map(|s| s.u).collect();
    let psi: Vec<Complex64> = grid.samples.iter().map(|s| s.psi).collect();
    report.tzitzeica = tzitzeica_residual(&u, &psi, grid.nx, grid.ny, grid.h)?;
    report.codazzi = codazzi_residual(&psi, grid.nx, grid.ny, grid.h)?;
    Ok(report)
}

/// Residuals of the pipeline on 5×5 patches of spacing `h` around each centre.
///
/// `psi_h` is the spacing of the separate lift-side cubic-form check
/// (second derivatives need a coarser step than the first-order checks).
pub fn pipeline_residuals(spec: &PotentialSpec, centers: &[Complex64], h: f64, psi_h: Option<f64>, lambda0: Complex64, trunc: usize, tol: f64) -> Result<ResidualReport> {
    let reports: Vec<Result<ResidualReport>> = centers
        .par_iter()
        .map(|&c| {
            let mut report = grid_residuals(&sample_patch(spec, c, h, MIN_NODES, lambda0, trunc, tol)?)?;
            if let Some(ph) = psi_h {
                report.psi_lift = Some(psi_lift_residual(&sample_patch(spec, c, ph, MIN_NODES, lambda0, trunc, tol)?)?);
            }
            Ok(report)
        })
        .collect();
    let mut total = ResidualReport { stencil_h: h, ..ResidualReport::default() };
    for r in reports {
        total = total.merge(&r?);
    }
    Ok(total)
}

/// Fubini–Study distance between the lines through `a` and `b`.
pub fn fubini_study(a: &Vec3, b: &Vec3) -> f64 {
    let na = herm(a, a).re.sqrt();
    let nb = herm(b, b).re.sqrt();
    let ua: Vec3 = a.map(|c| c / na);
    let ub: Vec3 = b.map(|c| c / nb);
    let ip = herm(&ub, &ua);
    let perp: f64 = (0..3).map(|k| (ub[k] - ua[k] * ip).norm_sqr()).sum::<f64>().sqrt();
    perp.atan2(ip.norm())
}

/// Max over `nodes` of the Fubini–Study distance between `f(γz, λ₀)` and `T f(z, λ₀)`.
pub fn symmetry_residual(
    spec: &PotentialSpec,
    gamma: impl Fn(Complex64) -> Complex64 + Sync,
    t: &ComplexMatrix3,
    nodes: &[Complex64],
    lambda0: Complex64,
    trunc: usize,
) -> Result<f64> {
    let dists: Vec<Result<f64>> = nodes
        .par_iter()
        .map(|&z| {
            let f = surface_sample(spec, z, lambda0, trunc)?;
            let g = surface_sample(spec, gamma(z), lambda0, trunc)?;
            Ok(fubini_study(&g.lift, &t.mul_vec(&f.lift)))
        })
        .collect();
    dists.into_iter().try_fold(0.0f64, |acc, d| Ok(acc.max(d?)))
}

/// Parameters `t` of the default homogeneity transport check.
pub const HOMOGENEITY_TS: [f64; 3] = [0.3, 1.1, 2.0];

/// Max over nodes and `ts` of `‖F(p_t z, q_t λ₀) − T(t) F(z, λ₀) T(t)⁻¹‖`.
pub fn homogeneity_residual(spec: &PotentialSpec, data: &HomogeneityData, ts: &[f64], nodes: &[Complex64], lambda0: Complex64, trunc: usize) -> Result<f64> {
    let per_node: Vec<Result<f64>> = nodes
        .par_iter()
        .map(|&z| {
            let (f, _) = extended_frame(spec, z, trunc)?;
            let mut worst = 0.0f64;
            for &t in ts {
                let (p, q, tm) = data.at(t);
                let (fp, _) = extended_frame(spec, p * z, trunc)?;
                worst = worst.max((fp.eval(q * lambda0) - tm * f.eval(lambda0) * tm.adjoint()).op_norm());
            }
            Ok(worst)
        })
        .collect();
    per_node.into_iter().try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpw::{clifford_oracle, rp2_oracle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn oracle_grid(center: Complex64, h: f64, n: usize, f: impl Fn(Complex64) -> SurfaceSample) -> SampleGrid {
        let half = (n / 2) as f64;
        let samples = (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .map(|(i, j)| f(center + cz((i as f64 - half) * h, (j as f64 - half) * h)))
            .collect();
        SampleGrid { nx: n, ny: n, h, samples }
    }

    #[test]
    fn clifford_oracle_is_certified() {
        let grid = oracle_grid(cz(0.4, -0.3), 1e-3, 7, |z| clifford_oracle(z, cz(1.0, 0.0)));
        let r = grid_residuals(&grid).unwrap();
        assert!(r.horizontality < 1e-9);
        assert!(r.conformality < 1e-9);
        assert_eq!(r.tzitzeica, 0.0);
        assert_eq!(r.codazzi, 0.0);
        let coarse = oracle_grid(cz(0.4, -0.3), 1e-2, 5, |z| clifford_oracle(z, cz(1.0, 0.0)));
        assert!(psi_lift_residual(&coarse).unwrap() < 1e-7);
    }

    #[test]
    fn rp2_oracle_is_certified() {
        let a = cz(0.0, 1.0);
        let grid = oracle_grid(cz(0.7, 0.5), 1e-3, 5, |z| rp2_oracle(a, z));
        let r = grid_residuals(&grid).unwrap();
        assert!(r.conformality < 1e-6);
        assert!(r.horizontality < 1e-9);
        assert!(r.tzitzeica < 1e-5);
    }

    #[test]
    fn tzitzeica_examples() {
        let n = 5;
        let zeros = vec![0.0; n * n];
        let minus_one = vec![cz(-1.0, 0.0); n * n];
        assert_eq!(tzitzeica_residual(&zeros, &minus_one, n, n, 1e-3).unwrap(), 0.0);
        let ones = vec![1.0; n * n];
        let none = vec![cz(0.0, 0.0); n * n];
        assert!((tzitzeica_residual(&ones, &none, n, n, 1e-3).unwrap() - std::f64::consts::E).abs() < 1e-12);
        assert!(matches!(tzitzeica_residual(&zeros[..16], &minus_one[..16], 4, 4, 1e-3), Err(Error::GridTooCoarse(4))));
    }

    #[test]
    fn codazzi_examples() {
        let n = 7;
        let h = 1e-3;
        let z0 = cz(0.3, 0.2);
        let z_at = |k: usize| z0 + cz((k % n) as f64 * h, (k / n) as f64 * h);
        let constant = vec![cz(-1.0, 0.0); n * n];
        assert_eq!(codazzi_residual(&constant, n, n, h).unwrap(), 0.0);
        let holo: Vec<Complex64> = (0..n * n).map(|k| cz(-0.8, 0.3) * z_at(k).powu(3)).collect();
        assert!(codazzi_residual(&holo, n, n, h).unwrap() < 1e-8);
        let anti: Vec<Complex64> = (0..n * n).map(|k| z_at(k).conj()).collect();
        assert!((codazzi_residual(&anti, n, n, h).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn detectors_fire_on_corrupted_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut grid = oracle_grid(cz(0.2, 0.1), 1e-3, 5, |z| clifford_oracle(z, cz(1.0, 0.0)));
        for s in &mut grid.samples {
            for c in &mut s.lift {
                *c += cz(rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3));
            }
            s.u += rng.random_range(-1e-3..1e-3);
            s.psi += cz(rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3));
        }
        let r = grid_residuals(&grid).unwrap();
        assert!(r.horizontality > 1e-4);
        assert!(r.conformality > 1e-4);
        assert!(r.tzitzeica > 1e-4);
        assert!(r.codazzi > 1e-4);
    }

    #[test]
    fn fubini_study_is_phase_invariant() {
        let a = [cz(0.6, 0.0), cz(0.0, 0.8), cz(0.0, 0.0)];
        let b = a.map(|c| c * Complex64::from_polar(1.0, 1.3));
        assert!(fubini_study(&a, &b) < 1e-15);
        let e = [cz(1.0, 0.0), cz(0.0, 0.0), cz(0.0, 0.0)];
        let f = [cz(0.0, 0.0), cz(1.0, 0.0), cz(0.0, 0.0)];
        assert!((fubini_study(&e, &f) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn trivial_symmetry_of_clifford() {
        let spec = PotentialSpec::clifford();
        let nodes = [cz(0.3, 0.1), cz(-0.5, 0.7)];
        let r = symmetry_residual(&spec, |z| z, &ComplexMatrix3::identity(), &nodes, cz(1.0, 0.0), 16).unwrap();
        assert!(r < 1e-12);
    }
}
