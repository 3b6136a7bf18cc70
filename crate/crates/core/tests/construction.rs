// Reference values keep every digit the high-precision oracle printed.
#![allow(clippy::excessive_precision)]

use infharm::construction::{
    contact_inverse, segment_value, solve_contact, u_at_contact, u_interior, u_prime_top, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use infharm::oracle::brute_force_u;
use infharm::{admit, parse_spline, AdmissibleProblem, BoundarySpline, ProblemParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn worked() -> AdmissibleProblem {
    let s = parse_spline(include_str!("data/abs.spline")).unwrap();
    admit(ProblemParams::new(s, 2.0, 0.1)).unwrap()
}

// Frozen from a 40-digit scan plus golden-section maximization of
// y -> f(y) - L sqrt(d^2 + (x - y)^2), written independently of this crate.
const FROZEN: [(f64, f64, f64, f64); 4] = [
    (0.03, 0.1, 0.050230769318303902546, 0.00076925411217293963988),
    (0.02, 0.05, 0.15010126583100056213, 0.00025316784328442108544),
    (0.5, 0.1, 0.11410937711411450708, 0.012929998299097865493),
    (-0.7, 0.03, 0.068418841090248989117, 0.0052907247495727422253),
];

#[test]
fn matches_frozen_high_precision_values() {
    let p = worked();
    for (x, d, value, offset) in FROZEN {
        let sol = solve_contact(x, d, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((sol.value - value).abs() < 1e-12, "u({x}, {d}) = {}", sol.value);
        assert!((sol.offset - offset).abs() < 1e-12, "Y({x}, {d}) = {}", sol.offset);
        assert!((u_interior(x, d, &p).unwrap() - value).abs() < 1e-12);
    }
}

#[test]
fn contact_inverse_round_trip() {
    let p = worked();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let y = rng.random_range(-2.0..2.0);
        let x = contact_inverse(y, 0.1, &p);
        let sol = solve_contact(x, 0.1, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((sol.y - y).abs() < 1e-10);
    }
    // frozen x(0.5)
    assert!((contact_inverse(0.5, 0.1, &p) - 0.48740118423302575909).abs() < 1e-15);
}

#[test]
fn contact_inverse_is_increasing() {
    let p = worked();
    let xs: Vec<f64> = (0..=400)
        .map(|k| contact_inverse(-2.0 + 0.01 * k as f64, 0.1, &p))
        .collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn linear_top_value_against_brute_force() {
    let s = BoundarySpline::new(0.0, &[(0.0, 1.0)]).unwrap();
    let p = admit(ProblemParams::new(s, 2.0, 0.1)).unwrap();
    let expected = 1.0 - 0.4 / 3f64.sqrt();
    assert!((u_at_contact(1.0, &p) - expected).abs() < 1e-15);
    assert!((expected - 0.7690599).abs() < 1e-7);
    let x = contact_inverse(1.0, 0.1, &p);
    let oracle = brute_force_u(x, 0.1, &p, 1e-6).unwrap();
    assert!((oracle.value - expected).abs() < 1e-12);
}

#[test]
fn closed_form_top_value_matches_solver() {
    let p = worked();
    for y in [-1.5, -0.4, 0.0, 0.3, 0.99, 1.7] {
        let x = contact_inverse(y, 0.1, &p);
        let sol = solve_contact(x, 0.1, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((u_at_contact(y, &p) - sol.value).abs() < 1e-13);
    }
}

#[test]
fn gradient_identity_by_differences_of_the_oracle() {
    let p = worked();
    assert_eq!(u_prime_top(0.5, &p), 0.25);
    let x = contact_inverse(0.5, 0.1, &p);
    let h = 1e-5;
    let fd = (brute_force_u(x + h, 0.1, &p, 1e-6).unwrap().value - brute_force_u(x - h, 0.1, &p, 1e-6).unwrap().value)
        / (2.0 * h);
    assert!((fd - 0.25).abs() < 1e-3, "{fd}");
}

#[test]
fn segment_midpoint_against_oracle() {
    let p = worked();
    let mid = segment_value(0.0, 0.5, &p).unwrap();
    assert!((mid.value - 0.15).abs() < 1e-15);
    let oracle = brute_force_u(mid.x, mid.d, &p, 1e-6).unwrap();
    assert!((oracle.value - 0.15).abs() < 1e-12);
}

#[test]
fn touching_hyperbola_stays_above_the_data() {
    let p = worked();
    let s = p.spline();
    for x in [-1.2, -0.3, 0.0, 0.41, 1.05] {
        let sol = solve_contact(x, 0.1, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let g = |y: f64| sol.value + 2.0 * 0.1f64.hypot(x - y);
        for k in 0..=4000 {
            let y = x - 2.0 + 1e-3 * k as f64;
            assert!(g(y) >= s.value(y) - 1e-14, "x = {x}, y = {y}");
        }
        assert!((g(sol.y) - s.value(sol.y)).abs() < 1e-12);
    }
}

#[test]
fn empirical_offset_lipschitz_within_contraction_bound() {
    let p = worked();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let offset = |x: f64| solve_contact(x, 0.1, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().offset;
    for _ in 0..2000 {
        let a: f64 = rng.random_range(-2.0..2.0);
        let b: f64 = rng.random_range(-2.0..2.0);
        if (a - b).abs() < 1e-6 {
            continue;
        }
        assert!((offset(a) - offset(b)).abs() <= p.lip_offset_bound * (a - b).abs());
    }
}

proptest! {
    #[test]
    fn solutions_are_localized_and_tight(x in -3.0f64..3.0, frac in 0.01f64..=1.0) {
        let p = worked();
        let h = frac * p.delta();
        let sol = solve_contact(x, h, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(sol.residual <= DEFAULT_TOL);
        prop_assert!(sol.offset.abs() <= p.window_radius * h);
    }

    #[test]
    fn contact_map_is_monotone(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        prop_assume!(a < b);
        let p = worked();
        let ya = solve_contact(a, 0.1, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().y;
        let yb = solve_contact(b, 0.1, &p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().y;
        prop_assert!(ya < yb);
    }

    #[test]
    fn segments_carry_u(y in -2.0f64..2.0, t in 0.05f64..=1.0) {
        let p = worked();
        let sp = segment_value(y, t, &p).unwrap();
        prop_assert!((u_interior(sp.x, sp.d, &p).unwrap() - sp.value).abs() < 1e-12);
    }
}
