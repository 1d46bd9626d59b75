#![allow(dead_code)]

use lagdpw::su3_loop::{eigenspace_project, CMat3, Loop};
use lagdpw::{Complex64, ComplexMatrix3, LoopMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> ComplexMatrix3 {
    CMat3::from_fn(|_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Twisted algebra loop on degrees `[lo, hi]` scaled to Wiener norm `wiener`.
pub fn random_twisted_algebra_loop(rng: &mut ChaCha8Rng, lo: i64, hi: i64, wiener: f64) -> LoopMatrix {
    let terms: Vec<(i64, ComplexMatrix3)> = (lo..=hi).map(|d| (d, eigenspace_project(&random_matrix(rng), d))).collect();
    let x = Loop::from_terms(&terms, true);
    x.scale(Complex64::from(wiener / x.wiener_norm()))
}

/// `exp(ξ)` for a random twisted `ξ` on degrees `[-2, 2]` with `W(ξ) ≤ 2`.
pub fn random_twisted_group_loop(rng: &mut ChaCha8Rng) -> LoopMatrix {
    let w = rng.random_range(0.2..2.0);
    let x = random_twisted_algebra_loop(rng, -2, 2, w);
    Loop::exp_of(&x, -30, 30, 128)
}
