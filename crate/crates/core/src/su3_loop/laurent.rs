use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::{c, expm, CMat3};
use super::{eigenspace_project, epsilon, in_eigenspace, sigma_grp, slot_allowed};
use crate::{Error, Real, Result};

/// Default number of Fourier modes kept on each side.
pub const DEFAULT_TRUNC: usize = 16;
/// Default number of S¹ samples for group-level checks.
pub const DEFAULT_TWIST_SAMPLES: usize = 24;

/// Truncated Laurent series `Σ_d λ^d X_d` with 3×3 complex coefficients.
///
/// Coefficients are stored densely from `min_degree` upward. `twisted`
/// records that the loop is meant to commute with σ under `λ ↦ ελ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop<T> {
    min_degree: i64,
    coeffs: Vec<CMat3<T>>,
    pub twisted: bool,
}

impl<T: Real> Loop<T> {
    /// Loop from consecutive coefficients starting at `min_degree`.
    pub fn from_coeffs(min_degree: i64, coeffs: Vec<CMat3<T>>, twisted: bool) -> Self {
        let mut out = Self { min_degree, coeffs, twisted };
        if out.coeffs.is_empty() {
            out.coeffs.push(CMat3::zero());
            out.min_degree = 0;
        }
        out
    }

    pub fn zero() -> Self {
        Self::from_coeffs(0, vec![CMat3::zero()], true)
    }

    pub fn identity() -> Self {
        Self::from_coeffs(0, vec![CMat3::identity()], true)
    }

    /// Constant loop. Twisting of a constant must be asserted by the caller.
    pub fn constant(m: CMat3<T>, twisted: bool) -> Self {
        Self::from_coeffs(0, vec![m], twisted)
    }

    /// `λ^d X`.
    pub fn monomial(d: i64, m: CMat3<T>, twisted: bool) -> Self {
        Self::from_coeffs(d, vec![m], twisted)
    }

    /// Loop from an explicit list of `(degree, coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, CMat3<T>)], twisted: bool) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![CMat3::zero(); (hi - lo + 1) as usize];
        for (d, m) in terms {
            coeffs[(d - lo) as usize] += *m;
        }
        Self::from_coeffs(lo, coeffs, twisted)
    }

    /// Fourier coefficients of `f` on degrees `[lo, hi]` from `samples` equispaced
    /// points of S¹. Aliasing error is the size of the neglected tail.
    pub fn from_fn(f: impl Fn(Complex<T>) -> CMat3<T>, lo: i64, hi: i64, samples: usize, twisted: bool) -> Self {
        let two_pi = T::from_f64(std::f64::consts::TAU).unwrap();
        let nf = T::from_usize(samples).unwrap();
        let values: Vec<(Complex<T>, CMat3<T>)> = (0..samples)
            .map(|j| {
                let lam = Complex::from_polar(T::one(), two_pi * T::from_usize(j).unwrap() / nf);
                (lam, f(lam))
            })
            .collect();
        let coeffs = (lo..=hi)
            .map(|d| {
                let mut acc = CMat3::zero();
                for (lam, v) in &values {
                    acc += v.scale(lam.powi(-(d as i32)));
                }
                acc.scale_re(nf.recip())
            })
            .collect();
        Self::from_coeffs(lo, coeffs, twisted)
    }

    /// `exp(X(λ))` of an algebra loop, sampled on S¹ and projected to `[lo, hi]`.
    pub fn exp_of(x: &Self, lo: i64, hi: i64, samples: usize) -> Self {
        Self::from_fn(|lam| expm(&x.eval(lam)), lo, hi, samples, x.twisted)
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.coeffs.len() as i64 - 1
    }

    /// Coefficient at degree `d` (zero outside the stored range).
    pub fn coeff(&self, d: i64) -> CMat3<T> {
        if d < self.min_degree || d > self.max_degree() {
            CMat3::zero()
        } else {
            self.coeffs[(d - self.min_degree) as usize]
        }
    }

    pub fn coeff_mut(&mut self, d: i64) -> &mut CMat3<T> {
        self.extend_to(d);
        let idx = (d - self.min_degree) as usize;
        &mut self.coeffs[idx]
    }

    fn extend_to(&mut self, d: i64) {
        if d < self.min_degree {
            let extra = (self.min_degree - d) as usize;
            let mut v = vec![CMat3::zero(); extra];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.min_degree = d;
        } else if d > self.max_degree() {
            let extra = (d - self.max_degree()) as usize;
            self.coeffs.extend(std::iter::repeat_n(CMat3::zero(), extra));
        }
    }

    /// `(degree, coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CMat3<T>)> {
        self.coeffs.iter().enumerate().map(move |(k, m)| (self.min_degree + k as i64, m))
    }

    /// Restriction to degrees `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        let coeffs = (lo..=hi).map(|d| self.coeff(d)).collect();
        Self::from_coeffs(lo, coeffs, self.twisted)
    }

    /// Drop leading and trailing coefficients that are exactly zero.
    pub fn trimmed(&self) -> Self {
        let nz: Vec<i64> = self.terms().filter(|(_, m)| m.max_abs() > T::zero()).map(|(d, _)| d).collect();
        match (nz.first(), nz.last()) {
            (Some(&lo), Some(&hi)) => self.window(lo, hi),
            _ => Self::from_coeffs(0, vec![CMat3::zero()], self.twisted),
        }
    }

    /// Evaluate at `λ` by Horner's scheme.
    pub fn eval(&self, lam: Complex<T>) -> CMat3<T> {
        let mut acc = CMat3::zero();
        for m in self.coeffs.iter().rev() {
            acc = acc.scale(lam) + *m;
        }
        acc.scale(lam.powi(self.min_degree as i32))
    }

    /// Wiener norm: sum over degrees of the entrywise max modulus.
    pub fn wiener_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, m| acc + m.max_abs())
    }

    /// Largest coefficient norm at `|d| = trunc`.
    pub fn tail_norm(&self, trunc: usize) -> T {
        let t = trunc as i64;
        self.coeff(t).max_abs().max(self.coeff(-t).max_abs())
    }

    pub fn max_coeff_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, m| acc.max(m.max_abs()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.min_degree.min(other.min_degree);
        let hi = self.max_degree().max(other.max_degree());
        let coeffs = (lo..=hi).map(|d| self.coeff(d) + other.coeff(d)).collect();
        Self::from_coeffs(lo, coeffs, self.twisted && other.twisted)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let lo = self.min_degree.min(other.min_degree);
        let hi = self.max_degree().max(other.max_degree());
        let coeffs = (lo..=hi).map(|d| self.coeff(d) - other.coeff(d)).collect();
        Self::from_coeffs(lo, coeffs, self.twisted && other.twisted)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_coeffs(self.min_degree, self.coeffs.iter().map(|m| m.scale(s)).collect(), self.twisted)
    }

    /// Conjugate each coefficient by a constant matrix: `T X_d T⁻¹`.
    pub fn conjugate_by(&self, t: &CMat3<T>, t_inv: &CMat3<T>) -> Self {
        Self::from_coeffs(self.min_degree, self.coeffs.iter().map(|m| *t * *m * *t_inv).collect(), self.twisted)
    }

    /// Rotate the loop parameter: the loop `λ ↦ g(qλ)` for `|q| = 1`.
    pub fn rotate(&self, q: Complex<T>) -> Self {
        Self::from_coeffs(
            self.min_degree,
            self.terms().map(|(d, m)| m.scale(q.powi(d as i32))).collect(),
            self.twisted,
        )
    }

    /// Pointwise adjoint on S¹: `λ ↦ g(λ)*`, i.e. coefficient `X_d*` at degree `−d`.
    pub fn adjoint_on_circle(&self) -> Self {
        let lo = -self.max_degree();
        let coeffs = (lo..=-self.min_degree).map(|d| self.coeff(-d).adjoint()).collect();
        Self::from_coeffs(lo, coeffs, self.twisted)
    }

    /// Cauchy product keeping degrees `|d| ≤ trunc`.
    pub fn product(&self, other: &Self, trunc: usize) -> Self {
        let t = trunc as i64;
        let lo = (self.min_degree + other.min_degree).max(-t);
        let hi = (self.max_degree() + other.max_degree()).min(t);
        self.product_window(other, lo, hi)
    }

    /// Cauchy product restricted to degrees `[lo, hi]`.
    pub fn product_window(&self, other: &Self, lo: i64, hi: i64) -> Self {
        let twisted = self.twisted && other.twisted;
        if lo > hi {
            return Self::from_coeffs(0, vec![CMat3::zero()], twisted);
        }
        let coeffs = (lo..=hi)
            .map(|d| {
                let mut acc = CMat3::zero();
                let jlo = self.min_degree.max(d - other.max_degree());
                let jhi = self.max_degree().min(d - other.min_degree);
                for j in jlo..=jhi {
                    acc += self.coeff(j) * other.coeff(d - j);
                }
                acc
            })
            .collect();
        Self::from_coeffs(lo, coeffs, twisted)
    }

    /// Inverse with degrees `|d| ≤ trunc`.
    ///
    /// Plus loops (and minus loops) are inverted as power series from their
    /// leading coefficient; general Laurent loops are inverted pointwise on S¹.
    pub fn inverse(&self, trunc: usize) -> Result<Self> {
        let t = trunc as i64;
        if self.min_degree >= 0 {
            self.series_inverse(t, 1)
        } else if self.max_degree() <= 0 {
            self.series_inverse(t, -1)
        } else {
            let samples = 8 * (trunc + self.coeffs.len()).next_power_of_two();
            let mut worst = T::one();
            let two_pi = T::from_f64(std::f64::consts::TAU).unwrap();
            for j in 0..samples {
                let lam = Complex::from_polar(T::one(), two_pi * T::from_usize(j).unwrap() / T::from_usize(samples).unwrap());
                match self.eval(lam).inverse_with_cond() {
                    Some((_, cond)) => worst = worst.max(cond),
                    None => return Err(Error::SingularLoop(f64::INFINITY)),
                }
            }
            if worst.to_f64().unwrap() > 1e12 {
                return Err(Error::SingularLoop(worst.to_f64().unwrap()));
            }
            Ok(Self::from_fn(|lam| self.eval(lam).inverse().unwrap(), -t, t, samples, self.twisted))
        }
    }

    /// Power-series inverse in `λ^dir` anchored at degree 0.
    fn series_inverse(&self, t: i64, dir: i64) -> Result<Self> {
        let lead = self.coeff(0);
        let (lead_inv, cond) = lead.inverse_with_cond().ok_or(Error::SingularLoop(f64::INFINITY))?;
        if cond.to_f64().unwrap() > 1e12 {
            return Err(Error::SingularLoop(cond.to_f64().unwrap()));
        }
        let span = self.coeffs.len() as i64;
        let mut out = vec![CMat3::zero(); (t + 1) as usize];
        out[0] = lead_inv;
        for k in 1..=t {
            let mut acc = CMat3::zero();
            for j in 1..=k.min(span) {
                acc += self.coeff(dir * j) * out[(k - j) as usize];
            }
            out[k as usize] = -(lead_inv * acc);
        }
        if dir > 0 {
            Ok(Self::from_coeffs(0, out, self.twisted))
        } else {
            out.reverse();
            Ok(Self::from_coeffs(-t, out, self.twisted))
        }
    }

    /// Max over `samples` points of S¹ of `‖g(ελ) − σ(g(λ))‖` (group twisting).
    ///
    /// Sample angles are offset by half a step so they avoid the ε-multiples.
    pub fn twist_residual(&self, samples: usize) -> Result<T> {
        let eps = epsilon::<T>();
        let mut worst = T::zero();
        for lam in circle_points::<T>(samples) {
            let g = self.eval(lam);
            let s = sigma_grp(&g).ok_or(Error::SingularLoop(f64::INFINITY))?;
            worst = worst.max((self.eval(eps * lam) - s).op_norm());
        }
        Ok(worst)
    }

    /// Algebra twisting: each coefficient at degree `d` lies in `g_{d mod 6}`.
    pub fn is_algebra_twisted(&self, tol: T) -> bool {
        self.terms().all(|(d, m)| in_eigenspace(m, d, tol))
    }

    /// Project every coefficient onto its eigenspace, making an algebra loop twisted.
    pub fn project_twisted(&self) -> Self {
        Self::from_coeffs(
            self.min_degree,
            self.terms().map(|(d, m)| eigenspace_project(m, d)).collect(),
            true,
        )
    }

    /// Zero the entries forbidden by the mod-3 slot pattern of twisted group loops.
    pub fn enforce_slot_pattern(&self) -> Self {
        Self::from_coeffs(
            self.min_degree,
            self.terms()
                .map(|(d, m)| CMat3::from_fn(|r, col| if slot_allowed(d, r, col) { m.m[r][col] } else { Complex::zero() }))
                .collect(),
            self.twisted,
        )
    }

    /// Max over `samples` points of S¹ of `‖g(λ) − h(λ)‖`.
    pub fn sup_distance(&self, other: &Self, samples: usize) -> T {
        circle_points::<T>(samples)
            .into_iter()
            .fold(T::zero(), |acc, lam| acc.max((self.eval(lam) - other.eval(lam)).op_norm()))
    }

    /// Max over `samples` points of S¹ of `‖g(λ)* g(λ) − I‖`.
    pub fn unitarity_defect(&self, samples: usize) -> T {
        circle_points::<T>(samples)
            .into_iter()
            .fold(T::zero(), |acc, lam| acc.max(self.eval(lam).unitarity_defect()))
    }

    /// Max over `samples` points of S¹ of `|det g(λ) − 1|`.
    pub fn determinant_defect(&self, samples: usize) -> T {
        circle_points::<T>(samples)
            .into_iter()
            .fold(T::zero(), |acc, lam| acc.max((self.eval(lam).det() - Complex::one()).norm()))
    }

    pub fn cast<U: Real>(&self) -> Loop<U> {
        Loop::from_coeffs(self.min_degree, self.coeffs.iter().map(|m| m.cast()).collect(), self.twisted)
    }
}

/// `n` points of S¹ at angles `2π(j + 1/2)/n`.
pub fn circle_points<T: Real>(n: usize) -> Vec<Complex<T>> {
    (0..n)
        .map(|j| {
            let a = std::f64::consts::TAU * (j as f64 + 0.5) / n as f64;
            c(a.cos(), a.sin())
        })
        .collect()
}
