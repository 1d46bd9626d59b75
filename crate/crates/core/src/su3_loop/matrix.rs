use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::Real;

/// 3×3 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat3<T> {
    pub m: [[Complex<T>; 3]; 3],
}

#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_f64(re).unwrap(), T::from_f64(im).unwrap())
}

impl<T: Real> CMat3<T> {
    pub fn new(m: [[Complex<T>; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self { m: [[Complex::zero(); 3]; 3] }
    }

    pub fn identity() -> Self {
        Self::diag([Complex::one(); 3])
    }

    pub fn diag(d: [Complex<T>; 3]) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            out.m[i][i] = d[i];
        }
        out
    }

    /// Matrix unit with a single 1 at `(i, j)`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut out = Self::zero();
        out.m[i][j] = Complex::one();
        out
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = f(i, j);
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self::from_fn(|i, j| f(self.m[i][j]))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|x| x * s)
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i])
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn det(&self) -> Complex<T> {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    fn adjugate(&self) -> Self {
        let m = &self.m;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        Self::new([
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ])
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == T::zero() || !(d.re.is_finite() && d.im.is_finite()) {
            return None;
        }
        let inv_d = d.inv();
        Some(self.adjugate().scale(inv_d))
    }

    /// Inverse together with the spectral condition number of `self`.
    pub fn inverse_with_cond(&self) -> Option<(Self, T)> {
        let inv = self.inverse()?;
        let cond = self.op_norm() * inv.op_norm();
        if !cond.is_finite() {
            return None;
        }
        Some((inv, cond))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        let mut best = T::zero();
        for row in &self.m {
            for x in row {
                best = best.max(x.norm());
            }
        }
        best
    }

    pub fn frobenius(&self) -> T {
        let mut s = T::zero();
        for row in &self.m {
            for x in row {
                s += x.norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        let mut best = T::zero();
        for j in 0..3 {
            let s = self.m[0][j].norm() + self.m[1][j].norm() + self.m[2][j].norm();
            best = best.max(s);
        }
        best
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> T {
        let g = self.adjoint() * *self;
        hermitian_max_eigenvalue(&g).max(T::zero()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|row| row.iter().all(|x| x.re.is_finite() && x.im.is_finite()))
    }

    pub fn column(&self, j: usize) -> [Complex<T>; 3] {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    pub fn mul_vec(&self, v: &[Complex<T>; 3]) -> [Complex<T>; 3] {
        let mut out = [Complex::zero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2];
        }
        out
    }

    /// `‖X*X − I‖` in the spectral norm.
    pub fn unitarity_defect(&self) -> T {
        (self.adjoint() * *self - Self::identity()).op_norm()
    }

    /// `X ∈ SU(3)` within `tol` (unitarity and unit determinant).
    pub fn is_special_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol && (self.det() - Complex::one()).norm() <= tol
    }

    /// `X ∈ SL(3)` within `tol`.
    pub fn is_special_linear(&self, tol: T) -> bool {
        (self.det() - Complex::one()).norm() <= tol
    }

    /// `X ∈ su(3)`: anti-Hermitian and traceless within `tol`.
    pub fn is_su3_algebra(&self, tol: T) -> bool {
        (*self + self.adjoint()).max_abs() <= tol && self.trace().norm() <= tol
    }

    pub fn cast<U: Real>(&self) -> CMat3<U> {
        CMat3::from_fn(|i, j| {
            let x = self.m[i][j];
            Complex::new(U::from(x.re).unwrap(), U::from(x.im).unwrap())
        })
    }
}

/// Largest eigenvalue of a Hermitian 3×3 matrix (closed-form trigonometric root).
fn hermitian_max_eigenvalue<T: Real>(a: &CMat3<T>) -> T {
    let two = T::from_f64(2.0).unwrap();
    let three = T::from_f64(3.0).unwrap();
    let six = T::from_f64(6.0).unwrap();
    let d = [a.m[0][0].re, a.m[1][1].re, a.m[2][2].re];
    let p1 = a.m[0][1].norm_sqr() + a.m[0][2].norm_sqr() + a.m[1][2].norm_sqr();
    let dmax = d[0].max(d[1]).max(d[2]);
    if p1 <= T::epsilon() * T::epsilon() * (dmax * dmax + T::min_positive_value()) {
        return dmax;
    }
    let q = (d[0] + d[1] + d[2]) / three;
    let p2 = (d[0] - q).powi(2) + (d[1] - q).powi(2) + (d[2] - q).powi(2) + two * p1;
    let p = (p2 / six).sqrt();
    let shift = CMat3::diag([Complex::from(q); 3]);
    let b = (*a - shift).scale_re(p.recip());
    let r = (b.det().re / two).max(-T::one()).min(T::one());
    let phi = r.acos() / three;
    q + two * p * phi.cos()
}

impl<T: Real> Default for CMat3<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T> Index<(usize, usize)> for CMat3<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.m[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMat3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.m[i][j]
    }
}

impl<T: Real> Add for CMat3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] + rhs.m[i][j])
    }
}

impl<T: Real> AddAssign for CMat3<T> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..3 {
            for j in 0..3 {
                self.m[i][j] += rhs.m[i][j];
            }
        }
    }
}

impl<T: Real> Sub for CMat3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] - rhs.m[i][j])
    }
}

impl<T: Real> SubAssign for CMat3<T> {
    fn sub_assign(&mut self, rhs: Self) {
        for i in 0..3 {
            for j in 0..3 {
                self.m[i][j] -= rhs.m[i][j];
            }
        }
    }
}

impl<T: Real> Neg for CMat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: Real> Mul for CMat3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[Complex::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Self { m: out }
    }
}

impl<T: Real> Mul<Complex<T>> for CMat3<T> {
    type Output = Self;
    fn mul(self, s: Complex<T>) -> Self {
        self.scale(s)
    }
}

/// Matrix exponential by scaling and squaring with the degree-13 Padé approximant.
pub fn expm<T: Real>(a: &CMat3<T>) -> CMat3<T> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA13: f64 = 5.371920351148152;
    let norm = a.norm1().to_f64().unwrap();
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale_re(T::from_f64(0.5f64.powi(s)).unwrap());
    let b = |k: usize| Complex::from(T::from_f64(B[k]).unwrap());
    let id = CMat3::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let u_inner = a6 * (a6 * b(13) + a4 * b(11) + a2 * b(9)) + a6 * b(7) + a4 * b(5) + a2 * b(3) + id * b(1);
    let u = a * u_inner;
    let v = a6 * (a6 * b(12) + a4 * b(10) + a2 * b(8)) + a6 * b(6) + a4 * b(4) + a2 * b(2) + id * b(0);
    let mut r = (v - u).inverse().expect("Padé denominator is invertible after scaling") * (v + u);
    for _ in 0..s {
        r = r * r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn ci(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_and_det() {
        let a = CMat3::new([
            [ci(2.0, 1.0), ci(0.5, 0.0), ci(0.0, -1.0)],
            [ci(0.0, 0.3), ci(1.0, 0.0), ci(0.2, 0.2)],
            [ci(1.0, 0.0), ci(0.0, 0.0), ci(3.0, -0.5)],
        ]);
        let inv = a.inverse().unwrap();
        assert!((a * inv - CMat3::identity()).max_abs() < 1e-14);
        assert!((a.det() * inv.det() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn op_norm_of_diagonal_and_unitary() {
        let d = CMat3::diag([ci(3.0, 0.0), ci(0.0, -5.0), ci(1.0, 1.0)]);
        assert!((d.op_norm() - 5.0).abs() < 1e-13);
        let p = CMat3::<f64>::new([
            [ci(0.0, 0.0), ci(0.0, 1.0), ci(0.0, 0.0)],
            [ci(0.0, 0.0), ci(0.0, 0.0), ci(1.0, 0.0)],
            [ci(-1.0, 0.0), ci(0.0, 0.0), ci(0.0, 0.0)],
        ]);
        assert!((p.op_norm() - 1.0).abs() < 1e-14);
        // rank-one outer product u v*: norm is |u||v|
        let u = [ci(1.0, 2.0), ci(0.0, -1.0), ci(3.0, 0.0)];
        let v = [ci(0.5, 0.0), ci(1.0, 1.0), ci(0.0, 2.0)];
        let r = CMat3::from_fn(|i, j| u[i] * v[j].conj());
        let nu: f64 = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let nv: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        assert!((r.op_norm() - nu * nv).abs() < 1e-12);
    }

    #[test]
    fn expm_diagonal_and_nilpotent() {
        let d = CMat3::diag([ci(1.0, 2.0), ci(-3.0, 0.0), ci(0.0, 40.0)]);
        let e = expm(&d);
        for i in 0..3 {
            assert!((e.m[i][i] - d.m[i][i].exp()).norm() < 1e-13 * d.m[i][i].exp().norm().max(1.0));
        }
        // strictly upper triangular: exp(N) = I + N + N²/2
        let n = CMat3::new([
            [ci(0.0, 0.0), ci(2.0, 1.0), ci(0.5, 0.0)],
            [ci(0.0, 0.0), ci(0.0, 0.0), ci(-1.0, 3.0)],
            [ci(0.0, 0.0), ci(0.0, 0.0), ci(0.0, 0.0)],
        ]);
        let exact = CMat3::identity() + n + (n * n).scale_re(0.5);
        assert!((expm(&n) - exact).max_abs() < 1e-14);
    }

    #[test]
    fn expm_large_norm_rotation() {
        // exp(t J) with J a real rotation generator, t = 45
        let t = 45.0;
        let j = CMat3::new([
            [ci(0.0, 0.0), ci(-t, 0.0), ci(0.0, 0.0)],
            [ci(t, 0.0), ci(0.0, 0.0), ci(0.0, 0.0)],
            [ci(0.0, 0.0), ci(0.0, 0.0), ci(0.0, 0.0)],
        ]);
        let e = expm(&j);
        assert!((e.m[0][0].re - t.cos()).abs() < 1e-13);
        assert!((e.m[1][0].re - t.sin()).abs() < 1e-13);
        assert!(e.unitarity_defect() < 1e-13);
    }
}
