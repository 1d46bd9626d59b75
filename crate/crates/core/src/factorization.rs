//! Birkhoff and Iwasawa splittings of twisted loops.
//!
//! Birkhoff `g = g₋ g₊` is a linear mode-matching solve for the negative
//! part of `g₋⁻¹`. Iwasawa `g = F V₊` orthonormalizes the shifted column
//! space `λ g H₊` in Fourier space and projects the columns of `g` off it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use crate::su3_loop::{allowed_column, slot_allowed, CMat3, Loop, DEFAULT_TWIST_SAMPLES, SLOT_OFFSET};
use crate::{ComplexMatrix3, Error, LoopMatrix, Result};

/// Condition number above which a splitting is refused.
pub const MAX_CONDITION: f64 = 1e12;

/// `g = f_minus · f_plus` with `f_minus(∞) = I`.
#[derive(Clone, Debug)]
pub struct BirkhoffFactors {
    pub f_minus: LoopMatrix,
    pub f_plus: LoopMatrix,
    /// Max over S¹ samples of `‖g − f_minus f_plus‖`.
    pub residual: f64,
    /// Condition number of the mode-matching system.
    pub condition: f64,
}

/// `g = unitary · v_plus` with `v_plus(0)` upper triangular, positive diagonal.
#[derive(Clone, Debug)]
pub struct IwasawaFactors {
    pub unitary: LoopMatrix,
    pub v_plus: LoopMatrix,
    /// Max of reconstruction error, unitarity defect and twist residual on S¹ samples.
    pub residual: f64,
    /// Squared ratio of extreme Gram–Schmidt pivots.
    pub condition: f64,
}

/// Birkhoff splitting with `trunc` negative modes in `f_minus⁻¹`.
pub fn birkhoff(g: &LoopMatrix, trunc: usize) -> Result<BirkhoffFactors> {
    let n = trunc.max(1) as i64;
    let twisted = g.twisted;
    // unknowns per row: (k, column) for the coefficient of λ^{-k} in f_minus⁻¹
    let unknowns: Vec<(i64, usize)> = (1..=n)
        .flat_map(|k| (0..3).map(move |col| (k, col)))
        .collect();
    let mut b_coeffs = vec![CMat3::zero(); n as usize];
    let mut worst_cond = 1.0f64;
    for r in 0..3 {
        let cols: Vec<(i64, usize)> = unknowns
            .iter()
            .copied()
            .filter(|&(k, col)| !twisted || col == allowed_column(-k, r))
            .collect();
        let eqs: Vec<(i64, usize)> = (1..=n)
            .flat_map(|k| (0..3).map(move |col| (-k, col)))
            .filter(|&(d, col)| !twisted || slot_allowed(d, r, col))
            .collect();
        let mut a = DMatrix::<Complex64>::zeros(eqs.len(), cols.len());
        let mut rhs = DVector::<Complex64>::zeros(eqs.len());
        for (i, &(d, col)) in eqs.iter().enumerate() {
            rhs[i] = -g.coeff(d).m[r][col];
            for (j, &(k, c)) in cols.iter().enumerate() {
                a[(i, j)] = g.coeff(d + k).m[c][col];
            }
        }
        let svd = a.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        worst_cond = worst_cond.max(cond);
        if !(cond <= MAX_CONDITION) {
            return Err(Error::OutsideBigCell(cond));
        }
        let x = a.clone().full_piv_lu().solve(&rhs).ok_or(Error::OutsideBigCell(cond))?;
        for (j, &(k, c)) in cols.iter().enumerate() {
            b_coeffs[(k - 1) as usize].m[r][c] = x[j];
        }
    }
    let mut terms: Vec<(i64, ComplexMatrix3)> = vec![(0, CMat3::identity())];
    terms.extend(b_coeffs.into_iter().enumerate().map(|(i, m)| (-(i as i64) - 1, m)));
    let minv = Loop::from_terms(&terms, twisted);
    let plus_hi = (trunc as i64).max(g.max_degree()).max(0);
    let f_plus = minv.product_window(g, 0, plus_hi);
    let mut f_minus = minv.inverse(trunc)?;
    *f_minus.coeff_mut(0) = CMat3::identity();
    let residual = reconstruction_error(g, &f_minus, &f_plus);
    Ok(BirkhoffFactors { f_minus, f_plus, residual, condition: worst_cond })
}

fn reconstruction_error(g: &LoopMatrix, left: &LoopMatrix, right: &LoopMatrix) -> f64 {
    crate::su3_loop::circle_points::<f64>(DEFAULT_TWIST_SAMPLES)
        .into_iter()
        .fold(0.0, |acc, lam| acc.max((g.eval(lam) - left.eval(lam) * right.eval(lam)).op_norm()))
}

/// Dense vector over positions `(row, degree)` of a ℂ³-valued Fourier series.
struct FourierSpace {
    lo: i64,
    len: usize,
}

impl FourierSpace {
    fn idx(&self, r: usize, d: i64) -> usize {
        r * self.len + (d - self.lo) as usize
    }

    /// `λ^shift g e_m` as a dense vector.
    fn column(&self, g: &LoopMatrix, shift: i64, m: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::zero(); 3 * self.len];
        for (d, coeff) in g.terms() {
            for r in 0..3 {
                v[self.idx(r, d + shift)] = coeff.m[r][m];
            }
        }
        v
    }
}

fn dot(support: &[usize], a: &[Complex64], b: &[Complex64]) -> Complex64 {
    support.iter().fold(Complex64::zero(), |acc, &i| acc + a[i].conj() * b[i])
}

fn norm(support: &[usize], a: &[Complex64]) -> f64 {
    support.iter().map(|&i| a[i].norm_sqr()).sum::<f64>().sqrt()
}

/// Remove the components of `v` along the orthonormal `basis`, twice.
fn project_off(support: &[usize], basis: &[Vec<Complex64>], v: &mut [Complex64]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(support, q, v);
            for &i in support {
                v[i] -= c * q[i];
            }
        }
    }
}

/// Iwasawa splitting; the shifted column space uses `2·trunc` shifts.
pub fn iwasawa(g: &LoopMatrix, trunc: usize) -> Result<IwasawaFactors> {
    let twisted = g.twisted;
    let shifts = 2 * trunc.max(1) as i64;
    let lo = g.min_degree();
    let hi = g.max_degree() + shifts;
    let space = FourierSpace { lo, len: (hi - lo + 1) as usize };

    // sector q holds positions (r, d) with s_r − d ≡ q (mod 3); untwisted loops use one sector
    let sector_of = |r: usize, d: i64| if twisted { (SLOT_OFFSET[r] - d).rem_euclid(3) as usize } else { 0 };
    let mut supports: Vec<Vec<usize>> = vec![Vec::new(); if twisted { 3 } else { 1 }];
    for r in 0..3 {
        for d in lo..=hi {
            supports[sector_of(r, d)].push(space.idx(r, d));
        }
    }

    let mut bases: Vec<Vec<Vec<Complex64>>> = vec![Vec::new(); supports.len()];
    let (mut pivot_min, mut pivot_max) = (f64::INFINITY, 0.0f64);
    for j in 1..=shifts {
        for m in 0..3 {
            let q = sector_of(m, j);
            let mut v = space.column(g, j, m);
            let scale = norm(&supports[q], &v);
            project_off(&supports[q], &bases[q], &mut v);
            let pivot = norm(&supports[q], &v);
            pivot_min = pivot_min.min(pivot);
            pivot_max = pivot_max.max(pivot);
            if !(pivot > 1e-15 * scale.max(1e-300)) {
                return Err(Error::IllConditioned(f64::INFINITY));
            }
            for &i in &supports[q] {
                v[i] /= pivot;
            }
            bases[q].push(v);
        }
    }
    let condition = (pivot_max / pivot_min).powi(2);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }

    // columns of g projected onto the complement of λ g H₊, then Gram–Schmidt
    let all: Vec<usize> = (0..3 * space.len).collect();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(3);
    let mut r_mat = CMat3::<f64>::zero();
    for m in 0..3 {
        let q = sector_of(m, 0);
        let mut w = space.column(g, 0, m);
        project_off(&supports[q], &bases[q], &mut w);
        for (i, f) in cols.iter().enumerate() {
            let c = dot(&all, f, &w);
            r_mat.m[i][m] = c;
            for &k in &all {
                w[k] -= c * f[k];
            }
        }
        let nrm = norm(&all, &w);
        if !(nrm > 0.0) {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        r_mat.m[m][m] = Complex64::new(nrm, 0.0);
        for x in w.iter_mut() {
            *x /= nrm;
        }
        cols.push(w);
    }

    let f_hi = (trunc as i64).max(g.max_degree());
    let f_coeffs = (lo..=f_hi)
        .map(|d| CMat3::from_fn(|r, m| if d <= hi { cols[m][space.idx(r, d)] } else { Complex64::zero() }))
        .collect();
    let unitary = Loop::from_coeffs(lo, f_coeffs, twisted);
    let mut v_plus = unitary.adjoint_on_circle().product_window(g, 0, trunc as i64);
    *v_plus.coeff_mut(0) = r_mat;
    v_plus.twisted = twisted;

    let mut residual = reconstruction_error(g, &unitary, &v_plus).max(unitary.unitarity_defect(DEFAULT_TWIST_SAMPLES));
    if twisted {
        residual = residual.max(unitary.twist_residual(DEFAULT_TWIST_SAMPLES)?);
    }
    Ok(IwasawaFactors { unitary, v_plus, residual, condition })
}
