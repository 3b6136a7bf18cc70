use infharm::analysis::{
    extrapolated_second, fd_derivative_top, kink_transfer_report, kink_transfer_report_with, monotone_map_check,
    predicted_curvature, residual_infinity_laplacian, second_derivatives_top, transfer_map, MonotoneWitness, Order,
    Side, SlopeSource, DEFAULT_H_SCHEDULE,
};
use infharm::construction::{contact_inverse, ClosedForm};
use infharm::oracle::BruteForce;
use infharm::{admit, parse_spline, AdmissibleProblem, BoundarySpline, ProblemParams};
use proptest::prelude::*;

fn worked() -> AdmissibleProblem {
    let s = parse_spline(include_str!("data/abs.spline")).unwrap();
    admit(ProblemParams::new(s, 2.0, 0.1)).unwrap()
}

#[test]
fn predicted_jump_for_the_worked_kink() {
    let p = worked();
    let (minus, plus) = second_derivatives_top(0.0, &p);
    assert!((minus - (-0.5 / 1.025)).abs() < 1e-15);
    assert!((plus - 0.5 / 0.975).abs() < 1e-15);
    let pc = predicted_curvature(0.0, &p);
    assert!((pc.denom_minus - 1.025).abs() < 1e-15);
    assert!((pc.denom_plus - 0.975).abs() < 1e-15);
}

#[test]
fn extrapolated_quotients_recover_the_jump() {
    let p = worked();
    let eval = ClosedForm::new(&p);
    let x0 = contact_inverse(0.0, 0.1, &p);
    for source in [SlopeSource::Quotients, SlopeSource::Identity] {
        let left = extrapolated_second(&eval, x0, Side::Left, source, &DEFAULT_H_SCHEDULE).unwrap();
        let right = extrapolated_second(&eval, x0, Side::Right, source, &DEFAULT_H_SCHEDULE).unwrap();
        assert!((left / (-0.5 / 1.025) - 1.0).abs() < 0.01, "{source:?} {left}");
        assert!((right / (0.5 / 0.975) - 1.0).abs() < 0.01, "{source:?} {right}");
    }
}

#[test]
fn oracle_report_matches_prediction() {
    let p = worked();
    let oracle = BruteForce { problem: &p, h_y: 1e-6 };
    let reports = kink_transfer_report_with(&oracle, &DEFAULT_H_SCHEDULE).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r.y0, 0.0);
    assert!((r.x0 - contact_inverse(0.0, 0.1, &p)).abs() < 1e-15);
    assert!((r.upp_minus_fd / r.upp_minus_pred - 1.0).abs() < 0.01);
    assert!((r.upp_plus_fd / r.upp_plus_pred - 1.0).abs() < 0.01);
    // halfway up the segment the same transfer applies with height delta / 2
    let mid = transfer_map(0.5, 0.05, 0.5) - transfer_map(-0.5, 0.05, 0.5);
    assert!((r.mid_segment_jump / mid - 1.0).abs() < 0.01, "{}", r.mid_segment_jump);
}

#[test]
fn two_kinks_give_two_sorted_reports() {
    let s = BoundarySpline::new(0.0, &[(-1.0, 0.0), (0.0, 0.4), (1.0, 0.0), (2.0, 0.4)]).unwrap();
    let p = admit(ProblemParams::new(s, 2.0, 0.1)).unwrap();
    let reports = kink_transfer_report(&p, &DEFAULT_H_SCHEDULE).unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!((reports[0].y0, reports[1].y0), (0.0, 1.0));
    assert!(reports[0].x0 < reports[1].x0);
    for r in &reports {
        assert!((r.upp_minus_fd / r.upp_minus_pred - 1.0).abs() < 0.01);
        assert!((r.upp_plus_fd / r.upp_plus_pred - 1.0).abs() < 0.01);
    }
}

#[test]
fn no_kinks_no_reports() {
    let s = BoundarySpline::new(0.0, &[(0.0, 1.0)]).unwrap();
    let p = admit(ProblemParams::new(s, 2.0, 0.1)).unwrap();
    assert!(kink_transfer_report(&p, &DEFAULT_H_SCHEDULE).unwrap().is_empty());
    // f = y: u(x, delta) = x - delta sqrt(L^2 - 1)
    let slope = fd_derivative_top(0.3, &p, 1e-3, Side::Central, Order::First).unwrap();
    assert!((slope - 1.0).abs() < 1e-9);
    let curv = fd_derivative_top(0.3, &p, 1e-3, Side::Central, Order::Second).unwrap();
    assert!(curv.abs() < 1e-6);
}

#[test]
fn transfer_map_is_increasing_when_admitted() {
    let p = worked();
    assert_eq!(monotone_map_check(&p, 1001).unwrap(), MonotoneWitness::Increasing);
    assert_eq!(transfer_map(0.0, 0.1, 0.5), 0.0);
    // past the pole the map turns over
    assert!(transfer_map(30.0, 0.1, 0.5) < transfer_map(10.0, 0.1, 0.5));
}

#[test]
fn residual_vanishes_for_affine_and_constant_data() {
    for (f0, slope) in [(0.3, 0.0), (0.0, 1.0)] {
        let s = BoundarySpline::new(f0, &[(0.0, slope)]).unwrap();
        let p = admit(ProblemParams::new(s, 2.0, 0.1)).unwrap();
        let r = residual_infinity_laplacian(0.2, 0.05, &p, 1e-3).unwrap();
        assert!(r.abs() < 1e-6, "{r}");
    }
}

#[test]
fn residual_shrinks_quadratically_under_refinement() {
    let p = worked();
    let r: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&h| residual_infinity_laplacian(0.4, 0.05, &p, h).unwrap().abs())
        .collect();
    for w in r.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.0..5.0).contains(&ratio), "ratios {r:?}");
    }
    assert!(residual_infinity_laplacian(0.4, 0.05, &p, 0.03).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn top_slope_equals_boundary_slope(y in -1.9f64..1.9) {
        let p = worked();
        let x = contact_inverse(y, 0.1, &p);
        let fd = fd_derivative_top(x, &p, 1e-5, Side::Central, Order::First).unwrap();
        prop_assert!((fd - p.spline().derivative(y)).abs() < 1e-3);
    }
}
