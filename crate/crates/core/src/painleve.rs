//! Painlevé III (type D₇) reduction of entire radially symmetric surfaces.
//!
//! For `a = a_k z^k`, `b = b_n z^n` the metric depends on `r = |z|` only and
//! `h(s) = e^{u(r)} s^j` with `s = r^l` solves
//! `ḧ = ḣ²/h − ḣ/s − κh²/s + κ|ψ₀|²/h`, `κ = 16/(2k+n+3)²`.

use std::io::Write;

use num_complex::Complex64;

use crate::dpw::ray_samples;
use crate::ode::{integrate, OdeOptions};
use crate::potentials::PotentialSpec;
use crate::{Error, Result};

/// Default seeding abscissa.
pub const DEFAULT_S0: f64 = 1e-3;
/// Integration stops when `h` leaves `[BLOWUP_LOW, BLOWUP_HIGH]`.
pub const BLOWUP_LOW: f64 = 1e-8;
pub const BLOWUP_HIGH: f64 = 1e8;
/// Terms kept in the power-series seed.
const SERIES_TERMS: usize = 24;

/// Parameters of the radial reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PainleveParams {
    pub k: u32,
    pub n: u32,
    pub psi0_abs: f64,
    pub ak_abs: f64,
}

impl PainleveParams {
    pub fn new(k: u32, n: u32, psi0_abs: f64, ak_abs: f64) -> Self {
        Self { k, n, psi0_abs, ak_abs }
    }

    /// Parameters of a radial spec; `NotRadialPIII` unless both slots are monomials with `ψ₀ ≠ 0`.
    pub fn from_spec(spec: &PotentialSpec) -> Result<Self> {
        let (k, n, a_k, psi0) = spec
            .radial_params()
            .ok_or_else(|| Error::NotRadialPIII("slots are not monomials".into()))?;
        if psi0.norm() == 0.0 {
            return Err(Error::NotRadialPIII("cubic form vanishes".into()));
        }
        Ok(Self::new(k, n, psi0.norm(), a_k.norm()))
    }

    fn weight(&self) -> f64 {
        (2 * self.k + self.n + 3) as f64
    }

    /// `l = (2k+n+3)/2` with `s = r^l`.
    pub fn l(&self) -> f64 {
        self.weight() / 2.0
    }

    /// `j` with `j·l = (1−2k−n)/2`.
    pub fn j(&self) -> f64 {
        (1.0 - 2.0 * self.k as f64 - self.n as f64) / self.weight()
    }

    /// Leading exponent `c` of `h ~ |a_k|² s^c` at `s → 0`.
    pub fn c(&self) -> f64 {
        (2.0 * self.k as f64 - self.n as f64 + 1.0) / self.weight()
    }

    /// `κ = 16/(2k+n+3)²`.
    pub fn kappa(&self) -> f64 {
        16.0 / (self.weight() * self.weight())
    }
}

/// `ḧ` from the PIII equation.
pub fn piii_rhs(s: f64, h: f64, h_dot: f64, params: &PainleveParams) -> Result<f64> {
    if !(s > 0.0 && h > 0.0) {
        return Err(Error::DomainError(s, h));
    }
    let kappa = params.kappa();
    Ok(h_dot * h_dot / h - h_dot / s - kappa * h * h / s + kappa * params.psi0_abs * params.psi0_abs / h)
}

/// Sum of the magnitudes of the terms of [`piii_rhs`], the scale of its cancellation error.
fn piii_rhs_scale(s: f64, h: f64, h_dot: f64, params: &PainleveParams) -> f64 {
    let kappa = params.kappa();
    (h_dot * h_dot / h).abs() + (h_dot / s).abs() + (kappa * h * h / s).abs() + (kappa * params.psi0_abs * params.psi0_abs / h).abs()
}

/// Leading-order seed `h₀ = |a_k|² s₀^c`, `ḣ₀ = c h₀/s₀`.
pub fn asymptotic_seed(params: &PainleveParams, s0: f64) -> (f64, f64) {
    let c = params.c();
    let h0 = params.ak_abs * params.ak_abs * s0.powf(c);
    (h0, c * h0 / s0)
}

/// Power series of `w = u − 2k log r` about `r = 0`.
///
/// `w'' + w'/r = −4r^{2k}e^w + 4|ψ₀|² r^{2n} e^{−2w}` gives
/// `m² w_m = [−4r^{2k}e^w + 4|ψ₀|²r^{2n}e^{−2w}]_{m−2}` with `w₀ = 2 log|a_k|`, `w₁ = 0`.
pub fn metric_series(params: &PainleveParams, terms: usize) -> Vec<f64> {
    let mut w = vec![0.0; terms];
    let mut e1 = vec![0.0; terms];
    let mut e2 = vec![0.0; terms];
    w[0] = 2.0 * params.ak_abs.ln();
    e1[0] = w[0].exp();
    e2[0] = (-2.0 * w[0]).exp();
    let (k2, n2) = (2 * params.k as usize, 2 * params.n as usize);
    let psi2 = params.psi0_abs * params.psi0_abs;
    for m in 1..terms {
        if m >= 2 {
            let d = m - 2;
            let mut rhs = 0.0;
            if d >= k2 {
                rhs -= 4.0 * e1[d - k2];
            }
            if d >= n2 {
                rhs += 4.0 * psi2 * e2[d - n2];
            }
            w[m] = rhs / (m * m) as f64;
        }
        // exponential recurrences m E_m = Σ j W_j E_{m−j}
        let (mut s1, mut s2) = (0.0, 0.0);
        for jj in 1..=m {
            s1 += jj as f64 * w[jj] * e1[m - jj];
            s2 += -2.0 * jj as f64 * w[jj] * e2[m - jj];
        }
        e1[m] = s1 / m as f64;
        e2[m] = s2 / m as f64;
    }
    w
}

/// Seed from the regular power series of the metric.
pub fn series_seed(params: &PainleveParams, s0: f64) -> (f64, f64) {
    let coeffs = metric_series(params, SERIES_TERMS);
    let l = params.l();
    let r0 = s0.powf(1.0 / l);
    let w = coeffs.iter().rev().fold(0.0, |acc, c| acc * r0 + c);
    let dw = coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (m, c)| acc * r0 + m as f64 * c);
    let h0 = (params.c() * s0.ln() + w).exp();
    let h_dot = h0 * (params.c() / s0 + dw * r0 / (l * s0));
    (h0, h_dot)
}

/// Largest seed point not above `s0` at which the truncated metric series is
/// accurate to `tol`, judged by its last four terms.
pub fn series_seed_point(params: &PainleveParams, s0: f64, tol: f64) -> f64 {
    let coeffs = metric_series(params, SERIES_TERMS);
    let r_max = (SERIES_TERMS - 4..SERIES_TERMS)
        .filter(|&m| coeffs[m] != 0.0)
        .map(|m| (tol / coeffs[m].abs()).powf(1.0 / m as f64))
        .fold(f64::INFINITY, f64::min);
    s0.min(r_max.powf(params.l()))
}

/// Choice of initial data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Seed {
    /// Regular power series of the metric at the origin.
    #[default]
    Series,
    /// Leading asymptotic term only.
    Leading,
}

/// Integration controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub s0: f64,
    pub tol: f64,
    pub seed: Seed,
    /// Compare against a second run seeded at `s0/2`.
    pub check_seeds: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { s0: DEFAULT_S0, tol: 1e-10, seed: Seed::Series, check_seeds: true }
    }
}

/// Integrated PIII profile.
#[derive(Clone, Debug, PartialEq)]
pub struct PainleveSolution {
    pub s_samples: Vec<f64>,
    pub h: Vec<f64>,
    pub h_dot: Vec<f64>,
    pub h_ddot: Vec<f64>,
    /// Max `|ḧ − rhs|` at step midpoints of the quintic Hermite dense output, relative to
    /// the summed magnitudes of the terms of `rhs` (at least 1).
    pub max_residual: f64,
    /// Per-sample dense-output residual on the step ending at that sample.
    pub step_residual: Vec<f64>,
    pub blowup_at: Option<f64>,
}

/// Quintic Hermite interpolant on one step: value, first and second derivative.
fn hermite5(s0: f64, s1: f64, y: [f64; 3], z: [f64; 3], s: f64) -> [f64; 3] {
    let dt = s1 - s0;
    let t = (s - s0) / dt;
    let a0 = y[0];
    let a1 = dt * y[1];
    let a2 = dt * dt * y[2] / 2.0;
    let a = z[0] - (a0 + a1 + a2);
    let b = dt * z[1] - (a1 + 2.0 * a2);
    let c = dt * dt * z[2] - 2.0 * a2;
    let a3 = 10.0 * a - 4.0 * b + c / 2.0;
    let a4 = -15.0 * a + 7.0 * b - c;
    let a5 = 6.0 * a - 3.0 * b + c / 2.0;
    let p = a0 + t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
    let dp = a1 + t * (2.0 * a2 + t * (3.0 * a3 + t * (4.0 * a4 + t * 5.0 * a5)));
    let ddp = 2.0 * a2 + t * (6.0 * a3 + t * (12.0 * a4 + t * 20.0 * a5));
    [p, dp / dt, ddp / (dt * dt)]
}

impl PainleveSolution {
    /// Dense output `(h, ḣ)` at `s` inside the sampled range.
    pub fn eval(&self, s: f64) -> Option<(f64, f64)> {
        let n = self.s_samples.len();
        if n == 0 || s < self.s_samples[0] || s > self.s_samples[n - 1] {
            return None;
        }
        if n == 1 {
            return Some((self.h[0], self.h_dot[0]));
        }
        let i = self.s_samples.partition_point(|&x| x <= s).clamp(1, n - 1);
        let v = hermite5(
            self.s_samples[i - 1],
            self.s_samples[i],
            [self.h[i - 1], self.h_dot[i - 1], self.h_ddot[i - 1]],
            [self.h[i], self.h_dot[i], self.h_ddot[i]],
            s,
        );
        Some((v[0], v[1]))
    }

    pub fn s_max(&self) -> f64 {
        *self.s_samples.last().unwrap_or(&0.0)
    }

    /// Least-squares fit of `log h = slope·log s + intercept` over samples in `[lo, hi]`.
    pub fn fit_asymptotics(&self, lo: f64, hi: f64, points: usize) -> Option<(f64, f64)> {
        let pts: Vec<(f64, f64)> = (0..points)
            .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
            .filter_map(|s| self.eval(s).map(|(h, _)| (s.ln(), h.ln())))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let (mx, my) = (sx / n, sy / n);
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
        let slope = sxy / sxx;
        Some((slope, my - slope * mx))
    }

    /// Emit `s,h,h_dot,residual` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "s,h,h_dot,residual")?;
        for i in 0..self.s_samples.len() {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", self.s_samples[i], self.h[i], self.h_dot[i], self.step_residual[i])?;
        }
        Ok(())
    }
}

fn integrate_once(params: &PainleveParams, s0: f64, s_max: f64, tol: f64, seed: Seed) -> Result<PainleveSolution> {
    let (h0, hd0) = match seed {
        Seed::Series => series_seed(params, s0),
        Seed::Leading => asymptotic_seed(params, s0),
    };
    let opts = OdeOptions { tol, h0: Some(s0 * 1e-2), ..OdeOptions::default() };
    let mut blown = false;
    let sol = integrate(
        |s, y, dy| {
            dy[0] = y[1];
            dy[1] = piii_rhs(s, y[0], y[1], params)?;
            Ok(())
        },
        s0,
        &[h0, hd0],
        s_max,
        &opts,
        true,
        |_, y| {
            blown = !(BLOWUP_LOW..=BLOWUP_HIGH).contains(&y[0]);
            blown
        },
    )?;
    let mut out = PainleveSolution {
        s_samples: Vec::with_capacity(sol.points.len()),
        h: Vec::with_capacity(sol.points.len()),
        h_dot: Vec::with_capacity(sol.points.len()),
        h_ddot: Vec::with_capacity(sol.points.len()),
        max_residual: 0.0,
        step_residual: Vec::with_capacity(sol.points.len()),
        blowup_at: None,
    };
    for p in &sol.points {
        if blown && !(BLOWUP_LOW..=BLOWUP_HIGH).contains(&p.y[0]) {
            out.blowup_at = Some(p.t);
            break;
        }
        out.s_samples.push(p.t);
        out.h.push(p.y[0]);
        out.h_dot.push(p.y[1]);
        out.h_ddot.push(p.dy[1]);
    }
    out.step_residual.push(0.0);
    for i in 1..out.s_samples.len() {
        let (a, b) = (out.s_samples[i - 1], out.s_samples[i]);
        let v = hermite5(a, b, [out.h[i - 1], out.h_dot[i - 1], out.h_ddot[i - 1]], [out.h[i], out.h_dot[i], out.h_ddot[i]], 0.5 * (a + b));
        let r = match piii_rhs(0.5 * (a + b), v[0], v[1], params) {
            Ok(rhs) => (v[2] - rhs).abs() / piii_rhs_scale(0.5 * (a + b), v[0], v[1], params).max(1.0),
            Err(_) => f64::INFINITY,
        };
        out.step_residual.push(r);
        out.max_residual = out.max_residual.max(r);
    }
    Ok(out)
}

/// Integrate PIII from the default series seed at `s₀ = 1e-3` up to `s_max`.
pub fn solve_piii(params: &PainleveParams, s_max: f64, tol: f64) -> Result<PainleveSolution> {
    solve_piii_with(params, s_max, &SolveOptions { tol, ..SolveOptions::default() })
}

/// Integrate PIII with explicit seeding controls.
///
/// With `check_seeds` a second run from `s₀/2` must agree with the first
/// within `100·tol` (relative to `h`) on the common range, or `SeedTooLarge`.
pub fn solve_piii_with(params: &PainleveParams, s_max: f64, opts: &SolveOptions) -> Result<PainleveSolution> {
    // near the series' radius of convergence the seed moves inward
    let s0 = match opts.seed {
        Seed::Series => series_seed_point(params, opts.s0, opts.tol),
        Seed::Leading => opts.s0,
    };
    let main = integrate_once(params, s0, s_max, opts.tol, opts.seed)?;
    if opts.check_seeds && s_max > s0 {
        let other = integrate_once(params, s0 / 2.0, s_max, opts.tol, opts.seed)?;
        let mut gap = 0.0f64;
        for (i, &s) in main.s_samples.iter().enumerate() {
            if let Some((h, _)) = other.eval(s) {
                gap = gap.max((h - main.h[i]).abs() / main.h[i].abs().max(1.0));
            }
        }
        if gap > 100.0 * opts.tol {
            return Err(Error::SeedTooLarge(gap));
        }
    }
    Ok(main)
}

/// Map radial metric samples to `(s, h)` with `s = r^l`, `h = e^u s^j`, sorted by `s`.
pub fn metric_to_h(r: &[f64], u: &[f64], params: &PainleveParams) -> Vec<(f64, f64)> {
    let (l, j) = (params.l(), params.j());
    let mut out: Vec<(f64, f64)> = r
        .iter()
        .zip(u)
        .filter(|(r, _)| **r > 0.0)
        .map(|(&r, &u)| {
            let s = r.powf(l);
            (s, u.exp() * s.powf(j))
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Max over samples of the polar Tzitzeica residual `u'' + u'/r + 4e^u − 4|ψ|²e^{−2u}`
/// of the metric reconstructed from `h`.
pub fn polar_tzitzeica_residual(sol: &PainleveSolution, params: &PainleveParams) -> f64 {
    let (l, j) = (params.l(), params.j());
    let psi2 = params.psi0_abs * params.psi0_abs;
    let deg = 2.0 * (2 * params.k + params.n) as f64;
    let mut worst = 0.0f64;
    for i in 0..sol.s_samples.len() {
        let (s, h, hd, hdd) = (sol.s_samples[i], sol.h[i], sol.h_dot[i], sol.h_ddot[i]);
        let r = s.powf(1.0 / l);
        let u = h.ln() - j * s.ln();
        let us = hd / h - j / s;
        let uss = hdd / h - (hd / h).powi(2) + j / (s * s);
        let ds = l * s / r;
        let ur = us * ds;
        let urr = uss * ds * ds + us * l * (l - 1.0) * s / (r * r);
        let res = urr + ur / r + 4.0 * u.exp() - 4.0 * psi2 * r.powf(deg) * (-2.0 * u).exp();
        worst = worst.max(res.abs() / (1.0 + u.exp()));
    }
    worst
}

/// Result of comparing the DPW metric with the integrated PIII profile.
#[derive(Clone, Debug, PartialEq)]
pub struct Crosscheck {
    pub s: Vec<f64>,
    pub h_dpw: Vec<f64>,
    pub h_piii: Vec<f64>,
    pub max_gap: f64,
}

/// Run DPW along the positive real ray, map the metric to `h(s)` and compare
/// against PIII on `points` log-spaced values of `s ∈ [s_lo, s_hi]`.
pub fn crosscheck(spec: &PotentialSpec, s_lo: f64, s_hi: f64, points: usize, trunc: usize, tol: f64) -> Result<Crosscheck> {
    let params = PainleveParams::from_spec(spec)?;
    let l = params.l();
    let s: Vec<f64> = (0..points).map(|i| s_lo * (s_hi / s_lo).powf(i as f64 / (points - 1).max(1) as f64)).collect();
    let radii: Vec<f64> = s.iter().map(|s| s.powf(1.0 / l)).collect();
    let samples = ray_samples(spec, 0.0, &radii, Complex64::new(1.0, 0.0), trunc, tol)?;
    let u: Vec<f64> = samples.iter().map(|x| x.u).collect();
    let mapped = metric_to_h(&radii, &u, &params);
    let sol = solve_piii_with(&params, s_hi, &SolveOptions { s0: s_lo.min(DEFAULT_S0), tol: 1e-11, ..SolveOptions::default() })?;
    let mut out = Crosscheck { s: Vec::new(), h_dpw: Vec::new(), h_piii: Vec::new(), max_gap: 0.0 };
    for (si, hi) in mapped {
        let hp = match sol.eval(si.min(sol.s_max())) {
            Some((h, _)) if si <= sol.s_max() * (1.0 + 1e-12) => h,
            _ => f64::NAN,
        };
        let gap = (hi - hp).abs();
        out.max_gap = if gap.is_finite() { out.max_gap.max(gap) } else { f64::INFINITY };
        out.s.push(si);
        out.h_dpw.push(hi);
        out.h_piii.push(hp);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PainleveParams {
        PainleveParams::new(0, 0, 1.0, 1.0)
    }

    #[test]
    fn rhs_examples() {
        let p = unit();
        assert!((p.kappa() - 16.0 / 9.0).abs() < 1e-15);
        for &s in &[1e-3f64, 0.1, 1.0, 7.5] {
            let h = s.powf(1.0 / 3.0);
            let hd = h / (3.0 * s);
            let hdd = -2.0 * h / (9.0 * s * s);
            let r = piii_rhs(s, h, hd, &p).unwrap();
            assert!((r - hdd).abs() <= 1e-12 * hdd.abs().max(1.0));
        }
        let c = 2.0;
        let q = PainleveParams::new(1, 2, 0.5, 1.0);
        let expect = q.kappa() * (0.25 / c - c * c / 3.0);
        assert!((piii_rhs(3.0, c, 0.0, &q).unwrap() - expect).abs() < 1e-15);
        assert!(matches!(piii_rhs(1.0, 0.0, 0.0, &p), Err(Error::DomainError(..))));
        assert!(matches!(piii_rhs(-1.0, 1.0, 0.0, &p), Err(Error::DomainError(..))));
    }

    #[test]
    fn substitution_exponents() {
        let p = PainleveParams::new(2, 1, 1.0, 1.0);
        assert!((p.j() * p.l() - (1.0 - 4.0 - 1.0) / 2.0).abs() < 1e-15);
        assert!((PainleveParams::new(1, 0, 1.0, 1.0).c() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn seed_examples() {
        let (h0, hd) = asymptotic_seed(&unit(), 1e-3);
        assert!((h0 - 0.1).abs() < 1e-15);
        assert!((hd - h0 / 3e-3).abs() < 1e-12);
        assert_eq!(asymptotic_seed(&PainleveParams::new(0, 0, 1.0, 2.0), 1.0).0, 4.0);
        let (h1, _) = asymptotic_seed(&PainleveParams::new(1, 0, 1.0, 1.0), 1e-3);
        assert!((h1 - 1e-3f64.powf(0.6)).abs() < 1e-15);
        // vacuum: the series seed is exact
        let (hs, hds) = series_seed(&unit(), 1e-3);
        assert!((hs - 0.1).abs() < 1e-15 && (hds - hd).abs() < 1e-10);
    }

    #[test]
    fn series_solves_the_radial_equation() {
        let p = PainleveParams::new(1, 0, 1.7, 0.8);
        let w = metric_series(&p, SERIES_TERMS);
        let r: f64 = 0.05;
        let eval = |r: f64| w.iter().rev().fold(0.0, |acc, c| acc * r + c);
        let h = 1e-4;
        let d1 = (eval(r + h) - eval(r - h)) / (2.0 * h);
        let d2 = (eval(r + h) - 2.0 * eval(r) + eval(r - h)) / (h * h);
        let res = d2 + d1 / r + 4.0 * r * r * eval(r).exp() - 4.0 * 1.7f64.powi(2) * (-2.0 * eval(r)).exp();
        assert!(res.abs() < 1e-5, "{res}");
    }

    #[test]
    fn exact_solution_is_recovered() {
        let sol = solve_piii(&unit(), 10.0, 1e-10).unwrap();
        assert!(sol.blowup_at.is_none());
        for (s, h) in sol.s_samples.iter().zip(&sol.h) {
            assert!((h - s.powf(1.0 / 3.0)).abs() < 1e-6);
        }
        let (slope, intercept) = sol.fit_asymptotics(1e-3, 1e-2, 20).unwrap();
        assert!((slope - 1.0 / 3.0).abs() < 0.02 / 3.0);
        assert!(intercept.abs() < 1e-6);
        assert!(sol.max_residual < 1e-4, "{}", sol.max_residual);
    }

    #[test]
    fn nonlinear_regime_departs_from_the_seed_profile() {
        let p = PainleveParams::new(0, 0, 1.0, 1.3);
        let sol = solve_piii(&p, 3.0, 1e-10).unwrap();
        let (h, _) = sol.eval(2.0).unwrap();
        assert!((h - 1.69 * 2f64.powf(1.0 / 3.0)).abs() > 1e-2);
        let (h, _) = sol.eval(1.2e-3).unwrap();
        assert!((h / (1.69 * 1.2e-3f64.powf(1.0 / 3.0)) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn degenerate_range_is_a_single_sample() {
        let sol = solve_piii(&unit(), DEFAULT_S0, 1e-10).unwrap();
        assert_eq!(sol.s_samples.len(), 1);
    }

    #[test]
    fn leading_seed_fails_the_dual_seed_check_off_vacuum() {
        let p = PainleveParams::new(0, 0, 2.0, 1.0);
        let opts = SolveOptions { seed: Seed::Leading, ..SolveOptions::default() };
        assert!(matches!(solve_piii_with(&p, 1.0, &opts), Err(Error::SeedTooLarge(_))));
        assert!(solve_piii(&p, 1.0, 1e-10).is_ok());
    }

    #[test]
    fn metric_to_h_examples() {
        let p = unit();
        let r = [0.1, 0.5, 2.0];
        let mapped = metric_to_h(&r, &[0.0; 3], &p);
        for (s, h) in &mapped {
            assert!((h - s.powf(1.0 / 3.0)).abs() < 1e-14);
        }
        let mapped = metric_to_h(&r, &[4f64.ln(); 3], &p);
        for (s, h) in &mapped {
            assert!((h - 4.0 * s.powf(1.0 / 3.0)).abs() < 1e-13);
        }
        assert!(metric_to_h(&[], &[], &p).is_empty());
    }

    #[test]
    fn polar_tzitzeica_holds_on_integrated_profiles() {
        for p in [unit(), PainleveParams::new(0, 0, 2.0, 1.0), PainleveParams::new(1, 0, 1.0, 1.0)] {
            let sol = solve_piii(&p, 2.0, 1e-10).unwrap();
            assert!(polar_tzitzeica_residual(&sol, &p) < 1e-4);
        }
    }

    #[test]
    fn zero_cubic_form_is_rejected() {
        let spec = PotentialSpec::rp2(0.0);
        assert!(matches!(crosscheck(&spec, 1e-3, 1.0, 5, 16, 1e-10), Err(Error::NotRadialPIII(_))));
    }

    #[test]
    fn clifford_crosscheck() {
        let c = crosscheck(&PotentialSpec::clifford(), 1e-3, 5.0, 12, 24, 1e-11).unwrap();
        assert!(c.max_gap < 1e-6, "{}", c.max_gap);
    }

    #[test]
    fn seed_point_moves_inside_the_series_radius() {
        assert_eq!(series_seed_point(&unit(), 1e-3, 1e-10), 1e-3);
        let p = PainleveParams::new(1, 0, 2.663442018101502, 0.5);
        let s0 = series_seed_point(&p, 1e-3, 1e-10);
        assert!(s0 < 1e-3);
        assert!(solve_piii(&p, 0.05, 1e-10).is_ok());
    }

    #[test]
    fn csv_rows() {
        let sol = solve_piii(&unit(), 0.01, 1e-10).unwrap();
        let mut buf = Vec::new();
        sol.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), sol.s_samples.len() + 1);
        assert!(text.starts_with("s,h,h_dot,residual\n"));
    }
}
