//! Adaptive Dormand–Prince 5(4) integrator over real state vectors.

use crate::{Error, Result};

/// Step-size control settings.
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    /// Mixed tolerance: component error is scaled by `tol·(1 + |y_i|)`.
    pub tol: f64,
    /// Initial step; `None` picks `|t1 − t0|/100`.
    pub h0: Option<f64>,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { tol: 1e-10, h0: None, h_max: f64::INFINITY, h_min: 1e-14, max_steps: 1_000_000 }
    }
}

/// Accepted step endpoint with its state derivative.
#[derive(Clone, Debug)]
pub struct OdePoint {
    pub t: f64,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

/// Result of an integration: accepted points (all of them or just the ends).
#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub points: Vec<OdePoint>,
    /// True when the stop predicate ended the run before `t1`.
    pub stopped: bool,
}

impl OdeSolution {
    pub fn last(&self) -> &OdePoint {
        self.points.last().expect("solution holds at least the initial point")
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `y' = f(t, y)` from `t0` to `t1 > t0`.
///
/// `f` writes the derivative into its third argument and may fail (for
/// instance on leaving its domain). `stop` is checked after every accepted
/// step; returning true ends the run early. When `record` is false only the
/// initial and final points are kept.
pub fn integrate<F, S>(mut f: F, t0: f64, y0: &[f64], t1: f64, opts: &OdeOptions, record: bool, mut stop: S) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    S: FnMut(f64, &[f64]) -> bool,
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    f(t0, &y, &mut k1)?;
    let mut points = vec![OdePoint { t: t0, y: y.clone(), dy: k1.clone() }];
    if t1 <= t0 {
        return Ok(OdeSolution { points, stopped: false });
    }
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut t = t0;
    let mut h = opts.h0.unwrap_or((t1 - t0) / 100.0).min(opts.h_max).min(t1 - t0);
    let mut steps = 0usize;

    while t < t1 {
        steps += 1;
        if steps > opts.max_steps || h < opts.h_min * (1.0 + t.abs()) {
            return Err(Error::StepUnderflow(t));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let stage = |tmp: &mut [f64], coeffs: &[(f64, &[f64])]| {
            for i in 0..n {
                let mut acc = y[i];
                for (a, k) in coeffs {
                    acc += h * a * k[i];
                }
                tmp[i] = acc;
            }
        };
        stage(&mut tmp, &[(A21, &k1)]);
        f(t + C2 * h, &tmp, &mut k2)?;
        stage(&mut tmp, &[(A31, &k1), (A32, &k2)]);
        f(t + C3 * h, &tmp, &mut k3)?;
        stage(&mut tmp, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        f(t + C4 * h, &tmp, &mut k4)?;
        stage(&mut tmp, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        f(t + C5 * h, &tmp, &mut k5)?;
        stage(&mut tmp, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        f(t + h, &tmp, &mut k6)?;
        stage(&mut y_new, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        f(t + h, &y_new, &mut k7)?;

        let mut err = 0.0f64;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            h *= 0.25;
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            let halt = stop(t, &y);
            if record || t >= t1 || halt {
                points.push(OdePoint { t, y: y.clone(), dy: k1.clone() });
            }
            if halt {
                return Ok(OdeSolution { points, stopped: true });
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(opts.h_max);
    }
    Ok(OdeSolution { points, stopped: false })
}
