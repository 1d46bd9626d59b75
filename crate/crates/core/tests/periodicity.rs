mod common;

use std::f64::consts::PI;

use lagdpw::periodicity::{check_closing, closing_delta, cocycle_residual, monodromy};
use lagdpw::su3_loop::{eigenspace_project, tau, Loop};
use lagdpw::{Complex64, LoopMatrix};
use proptest::prelude::*;

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `λ⁻¹X + Y + λτX` with twisted `X` of degree −1 and anti-Hermitian `Y` of degree 0.
fn random_real_form_potential(seed: u64) -> LoopMatrix {
    let mut rng = common::rng(seed);
    let x = eigenspace_project(&common::random_matrix(&mut rng), -1);
    let y = eigenspace_project(&common::random_matrix(&mut rng), 0);
    let y = (y + tau(&y)).scale_re(0.5);
    Loop::from_terms(&[(-1, x), (0, y), (1, tau(&x))], true)
}

#[test]
fn real_form_potential_is_twisted() {
    for seed in 0..4 {
        assert!(random_real_form_potential(seed).is_algebra_twisted(1e-12));
    }
}

#[test]
fn cocycle_holds_for_real_form_potentials() {
    for seed in 0..4 {
        let d = random_real_form_potential(seed);
        let real = cocycle_residual(&d, 0.3, cz(0.5, 0.0), 24).unwrap();
        let complex = cocycle_residual(&d, 0.3, cz(0.5, 0.4), 24).unwrap();
        assert!(real < 1e-7, "seed {seed}: real {real:e}");
        assert!(complex < 1e-7, "seed {seed}: complex {complex:e}");
    }
}

fn lambdas() -> [Complex64; 3] {
    [cz(1.0, 0.0), cz(0.0, 1.0), Complex64::from_polar(1.0, PI / 7.0)]
}

#[test]
fn lattice_closure() {
    for l0 in lambdas() {
        for l1 in -1..=1 {
            for l2 in -1..=1 {
                for l3 in -1..=1 {
                    let r = check_closing(closing_delta(l1, l2, l3, l0), l0);
                    assert!(r.closed, "({l1},{l2},{l3}) at {l0}: {:e}", r.residual);
                    assert!((r.c.powi(3) - 1.0).norm() < 1e-12);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn rotation_covariance(l1 in -5i64..=5, l2 in -5i64..=5, l3 in -5i64..=5, theta in 0.0..2.0 * PI) {
        let l0 = Complex64::from_polar(1.0, theta);
        prop_assert_eq!(closing_delta(l1, l2, l3, l0), closing_delta(l1, l2, l3, cz(1.0, 0.0)) * l0);
    }

    #[test]
    fn monodromy_homomorphism(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64, theta in 0.0..2.0 * PI) {
        let l0 = Complex64::from_polar(1.0, theta);
        let (d1, d2) = (cz(a, b), cz(c, d));
        let gap = (monodromy(d1 + d2, l0) - monodromy(d1, l0) * monodromy(d2, l0)).max_abs();
        prop_assert!(gap < 1e-10, "gap {:e}", gap);
    }
}
