//! Potentials `η = λ⁻¹η₋₁(z) dz (+ η₀ + λη₁ for degree-one potentials)`.
//!
//! The `λ⁻¹` coefficient always has the g₅ shape `[[0,0,i a],[i b,0,0],[0,i a,0]]`;
//! `a` and `b` are called the a-slot and b-slot. The cubic form of the
//! resulting surface is `ψ = −a² b`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dpw::GridSpec;
use crate::su3_loop::{circle_points, in_eigenspace, CMat3, Loop};
use crate::{ComplexMatrix3, Error, LoopMatrix, Result};

/// Potential families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Normalized,
    ConstantDegreeOne,
    RadialMonomial,
    Rotational,
    Vacuum,
}

/// Polynomial in one complex variable, ascending coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `(k, c)` when the polynomial is exactly `c z^k` with `c ≠ 0`.
    pub fn as_monomial(&self) -> Option<(usize, Complex64)> {
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let first = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        Some((first.0, *first.1))
    }

    /// `p(z^m)`.
    pub fn compose_power(&self, m: usize) -> Self {
        let mut coeffs = vec![Complex64::zero(); m * self.coeffs.len().saturating_sub(1) + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[m * j] = c;
        }
        Self::new(coeffs)
    }

    fn from_pairs(pairs: &[[f64; 2]]) -> Self {
        Self::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }

    fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

/// Gauge and coordinate change applied while normalizing a spec.
///
/// The stored potential lives in the coordinate `w = coordinate_scale · z`
/// and was conjugated by `diag(e^{iδ}, e^{−iδ}, 1)` with `δ = gauge_phase`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub coordinate_scale: Complex64,
    pub gauge_phase: f64,
}

/// Declarative potential description.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    /// a-slot as a function of `z` (unused for degree-one potentials).
    pub a: Polynomial,
    /// b-slot as a function of `z`.
    pub b: Polynomial,
    /// Monomial exponents and cubic-form coefficient of radial potentials.
    pub k: u32,
    pub n: u32,
    pub psi0: Complex64,
    /// Rotation order of rotational potentials.
    pub m: Option<u32>,
    /// `D(λ)` of degree-one potentials, degrees in `{−1, 0, 1}`.
    pub d_matrix: Option<LoopMatrix>,
    pub base_point: Complex64,
    pub normalization: Option<Normalization>,
}

/// Entry pattern of the `λ⁻¹` coefficient.
pub fn minus_one_coefficient(a: Complex64, b: Complex64) -> ComplexMatrix3 {
    let z = Complex64::zero();
    let i = Complex64::i();
    CMat3::new([[z, z, i * a], [i * b, z, z], [z, i * a, z]])
}

impl PotentialSpec {
    fn with_slots(kind: PotentialKind, a: Polynomial, b: Polynomial) -> Self {
        Self {
            kind,
            a,
            b,
            k: 0,
            n: 0,
            psi0: Complex64::zero(),
            m: None,
            d_matrix: None,
            base_point: Complex64::zero(),
            normalization: None,
        }
    }

    /// Normalized potential with the given slot polynomials.
    pub fn normalized(a: Polynomial, b: Polynomial) -> Self {
        Self::with_slots(PotentialKind::Normalized, a, b)
    }

    /// The Clifford torus potential `λ⁻¹A dz`.
    pub fn clifford() -> Self {
        let one = Polynomial::constant(Complex64::new(1.0, 0.0));
        Self::normalized(one.clone(), one)
    }

    /// Totally geodesic `ℝP²` potential with `a = e^{u₀/2}`, `b = 0`.
    pub fn rp2(u0: f64) -> Self {
        Self::normalized(Polynomial::constant(Complex64::new((u0 / 2.0).exp(), 0.0)), Polynomial::default())
    }

    /// Radial potential `a_k z^k`, `b_n z^n` with `b_n = −a_k⁻²ψ₀`, normalized to `a_k > 0`, `ψ₀ < 0`.
    ///
    /// With `ψ₀ = 0` only the a-slot phase is normalized.
    pub fn radial(k: u32, n: u32, a_k: Complex64, psi0: Complex64) -> Result<Self> {
        if a_k.is_zero() {
            return Err(Error::Schema { path: "$.a".into(), message: "a_k must be nonzero".into() });
        }
        let weight = (2 * k + n + 3) as f64;
        let gamma = if psi0.is_zero() { 0.0 } else { (PI - psi0.arg()) / weight };
        let c = Complex64::from_polar(1.0, gamma);
        let rotated_a = a_k * c.powu(k + 1);
        let gauge_phase = -rotated_a.arg();
        let s = Complex64::from_polar(1.0, gauge_phase);
        let a_norm = Complex64::new((rotated_a * s).norm(), 0.0);
        let psi_norm = if psi0.is_zero() { Complex64::zero() } else { Complex64::new(-psi0.norm(), 0.0) };
        let b_norm = -psi_norm / (a_norm * a_norm);
        let mut spec = Self::with_slots(
            PotentialKind::RadialMonomial,
            Polynomial::monomial(a_norm, k as usize),
            Polynomial::monomial(b_norm, n as usize),
        );
        spec.k = k;
        spec.n = n;
        spec.psi0 = psi_norm;
        if gamma != 0.0 || gauge_phase != 0.0 {
            spec.normalization = Some(Normalization { coordinate_scale: c.conj(), gauge_phase });
        }
        Ok(spec)
    }

    /// Constant degree-one potential `D(λ) dz`.
    pub fn constant_degree_one(d: LoopMatrix) -> Result<Self> {
        if d.min_degree() < -1 || d.max_degree() > 1 {
            return Err(Error::Schema { path: "$.d".into(), message: "degrees must lie in {-1, 0, 1}".into() });
        }
        for deg in -1..=1 {
            if !in_eigenspace(&d.coeff(deg), deg, 1e-12) {
                return Err(Error::Schema { path: format!("$.d.{deg}"), message: "coefficient is not in the twisted eigenspace".into() });
            }
        }
        let top = d.coeff(-1);
        let i = Complex64::i();
        let mut spec = Self::with_slots(
            PotentialKind::ConstantDegreeOne,
            Polynomial::constant(top.m[0][2] / i),
            Polynomial::constant(top.m[1][0] / i),
        );
        let mut d = d;
        d.twisted = true;
        spec.d_matrix = Some(d);
        Ok(spec)
    }

    /// a-slot value at `z`.
    pub fn a_slot(&self, z: Complex64) -> Complex64 {
        self.a.eval(z)
    }

    /// b-slot value at `z`.
    pub fn b_slot(&self, z: Complex64) -> Complex64 {
        self.b.eval(z)
    }

    /// Cubic-form coefficient `ψ(z) = −a(z)² b(z)`.
    pub fn psi(&self, z: Complex64) -> Complex64 {
        let a = self.a_slot(z);
        -(a * a * self.b_slot(z))
    }

    /// `η(z, ·)` as a loop (the coefficient of `dz`).
    pub fn eta(&self, z: Complex64) -> LoopMatrix {
        match &self.d_matrix {
            Some(d) => d.clone(),
            None => Loop::monomial(-1, minus_one_coefficient(self.a_slot(z), self.b_slot(z)), true),
        }
    }

    /// `η` evaluated at `(z, λ)`.
    pub fn eta_at(&self, z: Complex64, lambda: Complex64) -> ComplexMatrix3 {
        match &self.d_matrix {
            Some(d) => d.eval(lambda),
            None => minus_one_coefficient(self.a_slot(z), self.b_slot(z)).scale(lambda.inv()),
        }
    }

    /// Radial data `(k, n, a_k, ψ₀)` when both slots are monomials (or b ≡ 0).
    pub fn radial_params(&self) -> Option<(u32, u32, Complex64, Complex64)> {
        if self.d_matrix.is_some() {
            return None;
        }
        let (k, a_k) = self.a.as_monomial()?;
        match self.b.as_monomial() {
            Some((n, b_n)) => Some((k as u32, n as u32, a_k, -(a_k * a_k * b_n))),
            None if self.b.is_zero() => Some((k as u32, self.n, a_k, Complex64::zero())),
            None => None,
        }
    }

    pub fn to_document(&self) -> SpecDocument {
        let d = self.d_matrix.as_ref().map(|d| {
            (-1..=1)
                .map(|deg| {
                    let c = d.coeff(deg);
                    (deg.to_string(), std::array::from_fn(|r| std::array::from_fn(|col| [c.m[r][col].re, c.m[r][col].im])))
                })
                .collect()
        });
        SpecDocument {
            kind: self.kind,
            a: self.a.to_pairs(),
            b: self.b.to_pairs(),
            k: Some(self.k),
            n: Some(self.n),
            psi0: Some([self.psi0.re, self.psi0.im]),
            m: self.m,
            d,
            base_point: Some([self.base_point.re, self.base_point.im]),
            trunc: None,
            grid: None,
            name: None,
            description: None,
        }
    }
}

/// Serialized form of a spec plus run hints.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub kind: PotentialKind,
    /// a-slot coefficients (ascending powers); for rotational specs a function of `w = z^m`.
    #[serde(default)]
    pub a: Vec<[f64; 2]>,
    #[serde(default)]
    pub b: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi0: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Degree → 3×3 matrix of `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<BTreeMap<String, [[[f64; 2]; 3]; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

fn pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| schema(&format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    /// Validate and build the potential; normalizations are recorded on the spec.
    pub fn to_spec(&self) -> Result<PotentialSpec> {
        for (field, coeffs) in [("a", &self.a), ("b", &self.b)] {
            if coeffs.iter().flatten().any(|x| !x.is_finite()) {
                return Err(schema(&format!("$.{field}"), "coefficients must be finite"));
            }
        }
        let a = Polynomial::from_pairs(&self.a);
        let b = Polynomial::from_pairs(&self.b);
        let mut spec = match self.kind {
            PotentialKind::Normalized => {
                if a.is_zero() {
                    return Err(schema("$.a", "a-slot must be a nonzero polynomial"));
                }
                PotentialSpec::normalized(a, b)
            }
            PotentialKind::RadialMonomial => {
                let k = self.k.ok_or_else(|| schema("$.k", "required for radial_monomial"))?;
                let n = self.n.ok_or_else(|| schema("$.n", "required for radial_monomial"))?;
                let psi0 = pair(self.psi0.ok_or_else(|| schema("$.psi0", "required for radial_monomial"))?);
                if self.a.len() != 1 {
                    return Err(schema("$.a", "radial_monomial takes the single coefficient a_k"));
                }
                if !self.b.is_empty() {
                    return Err(schema("$.b", "radial_monomial derives b from psi0"));
                }
                PotentialSpec::radial(k, n, a.coeffs[0], psi0)?
            }
            PotentialKind::Rotational => {
                let m = self.m.ok_or_else(|| schema("$.m", "required for rotational"))?;
                rotational_potential(m, &a, &b)?.0
            }
            PotentialKind::Vacuum => {
                if self.a.len() != 1 || self.b.len() != 1 {
                    return Err(schema("$.a", "vacuum takes constant a and b"));
                }
                let i = Complex64::i();
                vacuum_normalize(i * a.coeffs[0], i * b.coeffs[0])?.2
            }
            PotentialKind::ConstantDegreeOne => {
                let d = self.d.as_ref().ok_or_else(|| schema("$.d", "required for constant_degree_one"))?;
                let mut terms = Vec::new();
                for (key, m) in d {
                    let deg: i64 = key.parse().map_err(|_| schema(&format!("$.d.{key}"), "degree keys must be integers"))?;
                    terms.push((deg, CMat3::from_fn(|r, c| pair(m[r][c]))));
                }
                PotentialSpec::constant_degree_one(Loop::from_terms(&terms, true))?
            }
        };
        if let Some(bp) = self.base_point {
            spec.base_point = pair(bp);
        }
        Ok(spec)
    }
}

/// Slot values of the normalized potential from the axis metric and cubic form.
///
/// `u_axis` is the holomorphic extension `u(z, 0)`; the slots are
/// `a = e^{u(z,0) − u(0,0)/2}` and `b = −ψ e^{−2u(z,0) + u(0,0)}`, so `ψ = −a²b`.
pub fn wu_slots(u_axis: Complex64, u00: f64, psi: Complex64) -> (Complex64, Complex64) {
    let a = (u_axis - u00 / 2.0).exp();
    let b = -psi * (-2.0 * u_axis + u00).exp();
    (a, b)
}

/// Normalized potential from `u(z, 0)` and `ψ(z)`.
///
/// Both functions are sampled on the circle `|z| = radius` and the slot
/// polynomials up to `degree` are read off by discrete Cauchy integrals.
pub fn wu_potential(
    u_on_axis: impl Fn(Complex64) -> Complex64,
    u00: f64,
    psi: impl Fn(Complex64) -> Complex64,
    degree: usize,
    radius: f64,
) -> PotentialSpec {
    let samples = 4 * (degree + 1).next_power_of_two().max(16);
    let values: Vec<(Complex64, (Complex64, Complex64))> = (0..samples)
        .map(|j| {
            let w = Complex64::from_polar(1.0, TAU * j as f64 / samples as f64);
            let z = w * radius;
            (w, wu_slots(u_on_axis(z), u00, psi(z)))
        })
        .collect();
    let coeff = |pick: fn(&(Complex64, Complex64)) -> Complex64, j: usize| -> Complex64 {
        let s: Complex64 = values.iter().map(|(w, v)| pick(v) * w.powi(-(j as i32))).sum();
        let c = s / (samples as f64 * radius.powi(j as i32));
        if c.norm() < 1e-14 {
            Complex64::zero()
        } else {
            c
        }
    };
    let a = Polynomial::new((0..=degree).map(|j| coeff(|v| v.0, j)).collect());
    let b = Polynomial::new((0..=degree).map(|j| coeff(|v| v.1, j)).collect());
    let trim = |p: Polynomial| {
        let last = p.coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        Polynomial::new(p.coeffs[..last].to_vec())
    };
    PotentialSpec::normalized(trim(a), trim(b))
}

/// Rotation rates of a homogeneous potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomogeneityData {
    pub p0: f64,
    pub q0: f64,
    pub t0: f64,
    /// `τ` at unit parameter, `e^{i t0}`.
    pub twist_entry: Complex64,
}

impl HomogeneityData {
    /// `(p_t, q_t, T(t))`.
    pub fn at(&self, t: f64) -> (Complex64, Complex64, ComplexMatrix3) {
        let tau = Complex64::from_polar(1.0, self.t0 * t);
        (
            Complex64::from_polar(1.0, self.p0 * t),
            Complex64::from_polar(1.0, self.q0 * t),
            CMat3::diag([tau, tau.conj(), Complex64::new(1.0, 0.0)]),
        )
    }
}

/// `q0 = (2k+n+3)p0/3`, `t0 = (k−n)p0/3`.
pub fn homogeneity_params(k: u32, n: u32, p0: f64) -> HomogeneityData {
    let q0 = (2 * k + n + 3) as f64 * p0 / 3.0;
    let t0 = (k as f64 - n as f64) * p0 / 3.0;
    HomogeneityData { p0, q0, t0, twist_entry: Complex64::from_polar(1.0, t0) }
}

/// Gauge angle, coordinate scale and the Clifford spec for a vacuum `(a, b)`.
///
/// `a` and `b` are the matrix entries `i r e^{iθ}` and `i r e^{iβ}`.
pub fn vacuum_normalize(a: Complex64, b: Complex64) -> Result<(f64, Complex64, PotentialSpec)> {
    let (ra, rb) = (a.norm(), b.norm());
    if ra == 0.0 || (ra - rb).abs() > 1e-12 * ra.max(1.0) {
        return Err(Error::NotVacuum(ra, rb));
    }
    let i = Complex64::i();
    let theta = (a / i).arg();
    let beta = (b / i).arg();
    let delta = (beta - theta) / 3.0;
    let scale = Complex64::from_polar(ra, (2.0 * theta + beta) / 3.0);
    let mut spec = PotentialSpec::clifford();
    spec.kind = PotentialKind::Normalized;
    spec.normalization = Some(Normalization { coordinate_scale: scale, gauge_phase: delta });
    Ok((delta, scale, spec))
}

/// `m`-fold symmetric potential with a-slot `a(z^m)` and b-slot `z⁻³b(z^m)`.
///
/// Returns the spec and `T = diag(e^{2πi/m}, e^{−2πi/m}, 1)`.
pub fn rotational_potential(m: u32, a_fn: &Polynomial, b_fn: &Polynomial) -> Result<(PotentialSpec, ComplexMatrix3)> {
    if m < 3 {
        return Err(schema("$.m", "rotation order must be at least 3"));
    }
    if a_fn.is_zero() {
        return Err(schema("$.a", "a must be nonzero"));
    }
    if b_fn.coeffs.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::PoleAtOrigin);
    }
    let m_us = m as usize;
    let a = a_fn.compose_power(m_us);
    let composed = b_fn.compose_power(m_us);
    let b = if b_fn.is_zero() { Polynomial::default() } else { Polynomial::new(composed.coeffs[3..].to_vec()) };
    let mut spec = PotentialSpec::with_slots(PotentialKind::Rotational, a, b);
    spec.m = Some(m);
    let tau = Complex64::from_polar(1.0, TAU / m as f64);
    Ok((spec, CMat3::diag([tau, tau.conj(), Complex64::new(1.0, 0.0)])))
}

/// Max over sampled `(z, λ)` of `‖p·η(pz, qλ) − T η(z, λ) T⁻¹‖`.
///
/// `z` runs over a spiral in the unit disc, `λ` over S¹ samples.
pub fn check_potential_symmetry(spec: &PotentialSpec, p: Complex64, q: Complex64, t: &ComplexMatrix3, samples: usize) -> f64 {
    let t_inv = t.inverse().expect("symmetry matrix must be invertible");
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut worst = 0.0f64;
    for j in 0..samples {
        let z = Complex64::from_polar(((j as f64 + 0.5) / samples as f64).sqrt(), golden * j as f64);
        for lambda in circle_points::<f64>(samples.clamp(1, 12)) {
            let lhs = spec.eta_at(p * z, q * lambda).scale(p);
            let rhs = *t * spec.eta_at(z, lambda) * t_inv;
            worst = worst.max((lhs - rhs).op_norm());
        }
    }
    worst
}

/// Rotation by `num/den` of a full turn, in lowest terms with `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Turn {
    pub num: i64,
    pub den: i64,
}

impl Turn {
    pub fn new(num: i64, den: i64) -> Self {
        let num = num.rem_euclid(den);
        let g = gcd(num, den);
        Self { num: num / g, den: den / g }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.num as f64 / self.den as f64)
    }

    /// Order of the rotation.
    pub fn order(&self) -> i64 {
        self.den
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Finite-order symmetry at the parameter where `q(t̂) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuterSymmetry {
    pub t_hat: f64,
    /// `p(t̂) = e^{6πi/(2k+n+3)}`.
    pub p: Turn,
    /// `τ(t̂) = e^{2πi(k−n)/(2k+n+3)}`.
    pub tau: Turn,
}

impl OuterSymmetry {
    pub fn t_matrix(&self) -> ComplexMatrix3 {
        let tau = self.tau.value();
        CMat3::diag([tau, tau.conj(), Complex64::new(1.0, 0.0)])
    }
}

/// Outer symmetry of the radial family `(k, n)` for rotation rate `p0`.
pub fn outer_symmetry_order(k: u32, n: u32, p0: f64) -> OuterSymmetry {
    let weight = (2 * k + n + 3) as i64;
    let data = homogeneity_params(k, n, p0);
    OuterSymmetry {
        t_hat: TAU / data.q0,
        p: Turn::new(3, weight),
        tau: Turn::new(k as i64 - n as i64, weight),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3_loop::{clifford_a, tau};
    use proptest::prelude::*;

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn wu_examples() {
        let spec = wu_potential(|_| cz(0.0, 0.0), 0.0, |_| cz(-1.0, 0.0), 4, 1.0);
        assert_eq!(spec.eta(cz(0.3, 0.1)).coeff(-1), clifford_a());
        let u0 = 0.7;
        let spec = wu_potential(|_| cz(u0, 0.0), u0, |_| cz(0.0, 0.0), 4, 1.0);
        let eta = spec.eta(cz(0.2, 0.0)).coeff(-1);
        assert!((eta.m[0][2] - Complex64::i() * (u0 / 2.0).exp()).norm() < 1e-14);
        assert!(spec.b.is_zero());
        // under ψ = −a²b, the cubic form −z with a ≡ 1 needs b = z
        let spec = wu_potential(|_| cz(0.0, 0.0), 0.0, |z| -z, 4, 1.0);
        assert!((spec.a_slot(cz(0.4, 0.3)) - 1.0).norm() < 1e-14);
        assert!((spec.b_slot(cz(0.4, 0.3)) - cz(0.4, 0.3)).norm() < 1e-14);
    }

    #[test]
    fn wu_slots_invert_cubic_form() {
        let (a, b) = wu_slots(cz(0.3, -0.2), 0.1, cz(0.5, 0.4));
        assert!((-(a * a * b) - cz(0.5, 0.4)).norm() < 1e-15);
    }

    #[test]
    fn homogeneity_examples() {
        let h = homogeneity_params(0, 0, 3.0);
        assert_eq!((h.q0, h.t0), (3.0, 0.0));
        let h = homogeneity_params(1, 0, 3.0);
        assert_eq!((h.q0, h.t0), (5.0, 1.0));
        let h = homogeneity_params(0, 1, 3.0);
        assert_eq!((h.q0, h.t0), (4.0, -1.0));
    }

    #[test]
    fn vacuum_examples() {
        let i = Complex64::i();
        let (d, s, spec) = vacuum_normalize(i, i).unwrap();
        assert_eq!(d, 0.0);
        assert!((s - 1.0).norm() < 1e-15);
        assert_eq!(spec.eta(cz(0.0, 0.0)), PotentialSpec::clifford().eta(cz(0.0, 0.0)));
        let (d, s, _) = vacuum_normalize(i * Complex64::from_polar(1.0, PI / 3.0), i).unwrap();
        assert!((d + PI / 9.0).abs() < 1e-15);
        assert!((s - Complex64::from_polar(1.0, 2.0 * PI / 9.0)).norm() < 1e-15);
        let (d, s, _) = vacuum_normalize(2.0 * i, 2.0 * i).unwrap();
        assert_eq!(d, 0.0);
        assert!((s - 2.0).norm() < 1e-15);
        assert!(matches!(vacuum_normalize(i, 2.0 * i), Err(Error::NotVacuum(..))));
    }

    #[test]
    fn vacuum_gauge_maps_to_clifford() {
        let i = Complex64::i();
        let (a, b) = (i * Complex64::from_polar(1.7, 0.4), i * Complex64::from_polar(1.7, -1.1));
        let (delta, scale, _) = vacuum_normalize(a, b).unwrap();
        let g = CMat3::diag([Complex64::from_polar(1.0, delta), Complex64::from_polar(1.0, -delta), cz(1.0, 0.0)]);
        let gauged = g * minus_one_coefficient(a / i, b / i) * g.adjoint();
        assert!((gauged - clifford_a().scale(scale)).max_abs() < 1e-14);
    }

    #[test]
    fn rotational_examples() {
        let one = Polynomial::constant(cz(1.0, 0.0));
        let w = Polynomial::monomial(cz(1.0, 0.0), 1);
        let (spec, _) = rotational_potential(3, &one, &w).unwrap();
        assert_eq!(spec.b, Polynomial::constant(cz(1.0, 0.0)));
        let (spec, t) = rotational_potential(4, &one, &w).unwrap();
        assert_eq!(spec.b.as_monomial(), Some((1, cz(1.0, 0.0))));
        assert!(check_potential_symmetry(&spec, Complex64::i(), cz(1.0, 0.0), &t, 16) < 1e-14);
        let (spec, t) = rotational_potential(3, &one, &Polynomial::default()).unwrap();
        assert!(check_potential_symmetry(&spec, Complex64::from_polar(1.0, TAU / 3.0), cz(1.0, 0.0), &t, 16) < 1e-14);
        assert!(matches!(rotational_potential(4, &one, &one), Err(Error::PoleAtOrigin)));
    }

    #[test]
    fn symmetry_check_examples() {
        let spec = PotentialSpec::clifford();
        let p = Complex64::from_polar(1.0, 0.8);
        assert!(check_potential_symmetry(&spec, p, p, &CMat3::identity(), 16) < 1e-14);
        assert!(check_potential_symmetry(&spec, cz(1.0, 0.0), cz(-1.0, 0.0), &CMat3::identity(), 16) > 1.0);
        let radial = PotentialSpec::radial(1, 0, cz(1.0, 0.0), cz(-1.0, 0.0)).unwrap();
        let h = homogeneity_params(1, 0, 3.0);
        for t in [0.1, 0.7, 2.3] {
            let (p, q, tm) = h.at(t);
            assert!(check_potential_symmetry(&radial, p, q, &tm, 16) < 1e-13);
        }
    }

    #[test]
    fn outer_symmetry_examples() {
        let s = outer_symmetry_order(0, 0, 3.0);
        assert_eq!(s.p, Turn::new(0, 1));
        assert!((s.t_matrix() - CMat3::identity()).max_abs() < 1e-15);
        let s = outer_symmetry_order(1, 0, 3.0);
        assert_eq!(s.p, Turn::new(3, 5));
        assert_eq!(s.tau, Turn::new(1, 5));
        let s = outer_symmetry_order(0, 3, 3.0);
        assert!((s.p.value() + 1.0).norm() < 1e-15);
        assert!((s.tau.value() + 1.0).norm() < 1e-15);
    }

    #[test]
    fn outer_symmetry_is_a_symmetry_of_the_potential() {
        for (k, n) in [(0, 0), (1, 0), (0, 1), (2, 1), (0, 3), (3, 2)] {
            let spec = PotentialSpec::radial(k, n, cz(1.2, 0.3), cz(-0.7, 0.2)).unwrap();
            let s = outer_symmetry_order(k, n, 1.0);
            let r = check_potential_symmetry(&spec, s.p.value(), cz(1.0, 0.0), &s.t_matrix(), 16);
            assert!(r < 1e-13, "(k, n) = ({k}, {n}): {r}");
        }
    }

    #[test]
    fn radial_normalization() {
        let spec = PotentialSpec::radial(1, 2, cz(0.3, -1.1), cz(0.4, 0.9)).unwrap();
        let (k, n, a_k, psi0) = spec.radial_params().unwrap();
        assert_eq!((k, n), (1, 2));
        assert!(a_k.re > 0.0 && a_k.im == 0.0);
        assert!(psi0.re < 0.0 && psi0.im.abs() < 1e-15);
        assert!((psi0.norm() - cz(0.4, 0.9).norm()).abs() < 1e-14);
        assert!((a_k.re - cz(0.3, -1.1).norm()).abs() < 1e-14);
        let z = cz(0.6, 0.2);
        assert!((spec.psi(z) - psi0 * z.powu(2 * k + n)).norm() < 1e-14);
    }

    #[test]
    fn document_round_trip_and_errors() {
        let text = r#"{"kind": "normalized", "a": [[1, 0]], "b": [[1, 0]]}"#;
        let spec = SpecDocument::from_json(text).unwrap().to_spec().unwrap();
        assert_eq!(spec, PotentialSpec::clifford());
        let again = serde_json::to_string(&spec.to_document()).unwrap();
        assert_eq!(SpecDocument::from_json(&again).unwrap().to_spec().unwrap(), spec);
        assert!(matches!(SpecDocument::from_json(r#"{"kind": "normalized", "bogus": 1}"#), Err(Error::Schema { .. })));
        let missing = SpecDocument::from_json(r#"{"kind": "radial_monomial", "a": [[1, 0]]}"#).unwrap();
        assert!(matches!(missing.to_spec(), Err(Error::Schema { path, .. }) if path == "$.k"));
        let a = clifford_a::<f64>();
        let d = Loop::from_terms(&[(-1, a), (1, tau(&a))], true);
        let spec = PotentialSpec::constant_degree_one(d).unwrap();
        let back = SpecDocument::from_json(&serde_json::to_string(&spec.to_document()).unwrap()).unwrap().to_spec().unwrap();
        assert_eq!(back.eta(cz(0.0, 0.0)).sub(&spec.eta(cz(0.0, 0.0))).wiener_norm(), 0.0);
    }

    proptest! {
        #[test]
        fn homogeneity_relations_hold(k in 0u32..8, n in 0u32..8, p0 in 0.1f64..5.0) {
            let h = homogeneity_params(k, n, p0);
            prop_assert!((3.0 * h.q0 - (2 * k + n + 3) as f64 * p0).abs() < 1e-12);
            prop_assert!((3.0 * h.t0 - (k as f64 - n as f64) * p0).abs() < 1e-12);
        }

        #[test]
        fn generated_potentials_are_twisted(re in -2.0f64..2.0, im in -2.0f64..2.0, k in 0u32..4, n in 0u32..4, x in -1.0f64..1.0, y in -1.0f64..1.0) {
            let spec = PotentialSpec::radial(k, n, Complex64::new(1.0 + re.abs(), im), Complex64::new(re, im)).unwrap();
            let eta = spec.eta(Complex64::new(x, y));
            prop_assert!(in_eigenspace(&eta.coeff(-1), -1, 1e-12));
        }
    }
}
