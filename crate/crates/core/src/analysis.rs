//! How jumps of `f''` become jumps of `u''` on the top edge.
//!
//! Along the top edge `u'(x(y)) = f'(y)` and `dx/dy = 1 - delta Phi'(f'(y)) f''(y)`,
//! so at a knot the one-sided second derivatives of `u` at `x(y0)` are
//!
//! ```text
//! u''_-/+ = f''_-/+ / (1 - delta Phi'(f'(y0)) f''_-/+).
//! ```
//!
//! The map `t -> t / (1 - delta c t)` is strictly increasing on `[-L'_f, L'_f]`
//! for admitted problems, so distinct one-sided values of `f''` stay distinct.
//! This module computes those predictions and measures them with difference
//! quotients on any [`FieldEvaluator`].

use crate::construction::{contact_inverse, phi_prime, ClosedForm, FieldEvaluator};
use crate::error::{Error, Result};
use crate::params::AdmissibleProblem;

/// Default step schedule for one-sided quotients at a kink.
pub const DEFAULT_H_SCHEDULE: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// `t / (1 - delta c t)`.
pub fn transfer_map(t: f64, delta: f64, c: f64) -> f64 {
    t / (1.0 - delta * c * t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedCurvature {
    pub fpp_minus: f64,
    pub fpp_plus: f64,
    pub denom_minus: f64,
    pub denom_plus: f64,
    pub upp_minus: f64,
    pub upp_plus: f64,
}

/// One-sided second derivatives of `u` along the top edge at `x(y0)`.
pub fn predicted_curvature(y0: f64, problem: &AdmissibleProblem) -> PredictedCurvature {
    let spline = problem.spline();
    let c = phi_prime(spline.derivative(y0), problem.cone_slope()).expect("admitted problem keeps |f'| < L");
    let delta = problem.delta();
    let fpp_minus = spline.second_left(y0);
    let fpp_plus = spline.second_right(y0);
    let denom_minus = 1.0 - delta * c * fpp_minus;
    let denom_plus = 1.0 - delta * c * fpp_plus;
    PredictedCurvature {
        fpp_minus,
        fpp_plus,
        denom_minus,
        denom_plus,
        upp_minus: fpp_minus / denom_minus,
        upp_plus: fpp_plus / denom_plus,
    }
}

/// `(u''_-, u''_+)` at `x(y0)` on the top edge.
pub fn second_derivatives_top(y0: f64, problem: &AdmissibleProblem) -> (f64, f64) {
    let p = predicted_curvature(y0, problem);
    (p.upp_minus, p.upp_plus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Central,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// Where second-order quotients get their slopes of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeSource {
    /// Differences of first-order quotients, i.e. plain second differences of `u`.
    Quotients,
    /// `u'(x) = f'(contact(x))`.
    Identity,
}

/// Difference quotient of `u` along the top edge using the closed form.
///
/// One-sided quotients are `O(h)` accurate, central ones `O(h^2)` away from kinks.
pub fn fd_derivative_top(x: f64, problem: &AdmissibleProblem, h: f64, side: Side, order: Order) -> Result<f64> {
    fd_derivative_top_with(&ClosedForm::new(problem), x, h, side, order, SlopeSource::Quotients)
}

pub fn fd_derivative_top_with(
    eval: &dyn FieldEvaluator,
    x: f64,
    h: f64,
    side: Side,
    order: Order,
    source: SlopeSource,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step h = {h} must be positive")));
    }
    let delta = eval.problem().delta();
    let u = |x: f64| eval.value(x, delta);
    match (order, source) {
        (Order::First, _) => Ok(match side {
            Side::Central => (u(x + h)? - u(x - h)?) / (2.0 * h),
            Side::Left => (u(x)? - u(x - h)?) / h,
            Side::Right => (u(x + h)? - u(x)?) / h,
        }),
        (Order::Second, SlopeSource::Quotients) => Ok(match side {
            Side::Central => (u(x + h)? - 2.0 * u(x)? + u(x - h)?) / (h * h),
            Side::Left => (u(x)? - 2.0 * u(x - h)? + u(x - 2.0 * h)?) / (h * h),
            Side::Right => (u(x + 2.0 * h)? - 2.0 * u(x + h)? + u(x)?) / (h * h),
        }),
        (Order::Second, SlopeSource::Identity) => {
            let spline = eval.problem().spline();
            let slope = |x: f64| -> Result<f64> { Ok(spline.derivative(eval.sample(x, delta)?.contact)) };
            Ok(match side {
                Side::Central => (slope(x + h)? - slope(x - h)?) / (2.0 * h),
                Side::Left => (slope(x)? - slope(x - h)?) / h,
                Side::Right => (slope(x + h)? - slope(x)?) / h,
            })
        }
    }
}

/// Extrapolates quotients taken at steps `h, h/2, h/4, ...` whose error
/// expands in integer powers of `h`.
pub fn richardson_halving(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut table = values.to_vec();
    let n = table.len();
    for k in 1..n {
        let factor = (1u64 << k) as f64 - 1.0;
        for i in (k..n).rev() {
            table[i] += (table[i] - table[i - 1]) / factor;
        }
    }
    table[n - 1]
}

fn check_schedule(h_schedule: &[f64]) -> Result<()> {
    if h_schedule.is_empty() || h_schedule.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::Config("step schedule must be non-empty and positive".into()));
    }
    for w in h_schedule.windows(2) {
        if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "step schedule must halve: {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Richardson-extrapolated one-sided second derivative at `x` on the top edge.
pub fn extrapolated_second(
    eval: &dyn FieldEvaluator,
    x: f64,
    side: Side,
    source: SlopeSource,
    h_schedule: &[f64],
) -> Result<f64> {
    check_schedule(h_schedule)?;
    let quotients = h_schedule
        .iter()
        .map(|&h| fd_derivative_top_with(eval, x, h, side, Order::Second, source))
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson_halving(&quotients))
}

/// Per-knot comparison of predicted and measured one-sided curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkReport {
    pub y0: f64,
    pub x0: f64,
    pub fpp_minus: f64,
    pub fpp_plus: f64,
    pub upp_minus_pred: f64,
    pub upp_plus_pred: f64,
    /// Extrapolated second differences of `u` (no use of the slope identity).
    pub upp_minus_fd: f64,
    pub upp_plus_fd: f64,
    pub denom_minus: f64,
    pub denom_plus: f64,
    /// Extrapolated quotients of `f'(contact(x))`.
    pub upp_minus_identity: f64,
    pub upp_plus_identity: f64,
    /// Right minus left second difference of `u` across the contact segment
    /// at its midpoint, extrapolated. Stays away from zero at a kink.
    pub mid_segment_jump: f64,
}

/// One report per kink of the boundary spline, measured on the closed form.
pub fn kink_transfer_report(problem: &AdmissibleProblem, h_schedule: &[f64]) -> Result<Vec<KinkReport>> {
    kink_transfer_report_with(&ClosedForm::new(problem), h_schedule)
}

pub fn kink_transfer_report_with(eval: &dyn FieldEvaluator, h_schedule: &[f64]) -> Result<Vec<KinkReport>> {
    check_schedule(h_schedule)?;
    let problem = eval.problem();
    let delta = problem.delta();
    problem
        .spline()
        .kinks()
        .into_iter()
        .map(|kink| {
            let y0 = kink.y0;
            let x0 = contact_inverse(y0, delta, problem);
            let pred = predicted_curvature(y0, problem);
            let measure = |side, source| extrapolated_second(eval, x0, side, source, h_schedule);

            let mid_x = 0.5 * (y0 + x0);
            let mid_d = 0.5 * delta;
            let u = |x: f64| eval.value(x, mid_d);
            let jumps = h_schedule
                .iter()
                .map(|&h| {
                    let right = (u(mid_x + 2.0 * h)? - 2.0 * u(mid_x + h)? + u(mid_x)?) / (h * h);
                    let left = (u(mid_x)? - 2.0 * u(mid_x - h)? + u(mid_x - 2.0 * h)?) / (h * h);
                    Ok(right - left)
                })
                .collect::<Result<Vec<_>>>()?;

            Ok(KinkReport {
                y0,
                x0,
                fpp_minus: pred.fpp_minus,
                fpp_plus: pred.fpp_plus,
                upp_minus_pred: pred.upp_minus,
                upp_plus_pred: pred.upp_plus,
                upp_minus_fd: measure(Side::Left, SlopeSource::Quotients)?,
                upp_plus_fd: measure(Side::Right, SlopeSource::Quotients)?,
                denom_minus: pred.denom_minus,
                denom_plus: pred.denom_plus,
                upp_minus_identity: measure(Side::Left, SlopeSource::Identity)?,
                upp_plus_identity: measure(Side::Right, SlopeSource::Identity)?,
                mid_segment_jump: richardson_halving(&jumps),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneWitness {
    /// Strictly increasing at every sample for every kink.
    Increasing,
    Counterexample {
        y0: f64,
        t1: f64,
        t2: f64,
    },
}

/// Samples `t -> t / (1 - delta Phi'(f'(y0)) t)` on `[-L'_f, L'_f]` for each
/// kink and checks strict increase between consecutive samples.
pub fn monotone_map_check(problem: &AdmissibleProblem, samples: usize) -> Result<MonotoneWitness> {
    if samples < 2 {
        return Err(Error::Config("need at least two samples".into()));
    }
    let bound = problem.curvature_bound;
    let delta = problem.delta();
    for kink in problem.spline().kinks() {
        let c = phi_prime(problem.spline().derivative(kink.y0), problem.cone_slope())?;
        if let Some((t1, t2)) = first_non_increase(|t| transfer_map(t, delta, c), -bound, bound, samples) {
            return Ok(MonotoneWitness::Counterexample { y0: kink.y0, t1, t2 });
        }
    }
    Ok(MonotoneWitness::Increasing)
}

fn first_non_increase(map: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> Option<(f64, f64)> {
    let t = |k: usize| lo + (hi - lo) * k as f64 / (samples - 1) as f64;
    (1..samples).map(|k| (t(k - 1), t(k))).find(|&(a, b)| {
        let (ma, mb) = (map(a), map(b));
        // a zero-width interval (L'_f = 0) has nothing to compare
        a < b && !(ma < mb)
    })
}

/// Central-difference `u_x^2 u_xx + 2 u_x u_d u_xd + u_d^2 u_dd` at `(x, d)`.
pub fn residual_infinity_laplacian(x: f64, d: f64, problem: &AdmissibleProblem, h: f64) -> Result<f64> {
    residual_infinity_laplacian_with(&ClosedForm::new(problem), x, d, h)
}

pub fn residual_infinity_laplacian_with(eval: &dyn FieldEvaluator, x: f64, d: f64, h: f64) -> Result<f64> {
    let delta = eval.problem().delta();
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step h = {h} must be positive")));
    }
    if !(d > 2.0 * h && delta - d > 2.0 * h) {
        return Err(Error::Domain(format!(
            "point height {d} is within 2h = {} of the strip edges",
            2.0 * h
        )));
    }
    let u = |dx: f64, dd: f64| eval.value(x + dx * h, d + dd * h);
    let c = u(0.0, 0.0)?;
    let (e, w) = (u(1.0, 0.0)?, u(-1.0, 0.0)?);
    let (n, s) = (u(0.0, 1.0)?, u(0.0, -1.0)?);
    let (ne, nw) = (u(1.0, 1.0)?, u(-1.0, 1.0)?);
    let (se, sw) = (u(1.0, -1.0)?, u(-1.0, -1.0)?);

    let ux = (e - w) / (2.0 * h);
    let ud = (n - s) / (2.0 * h);
    let uxx = (e - 2.0 * c + w) / (h * h);
    let udd = (n - 2.0 * c + s) / (h * h);
    let uxd = (ne - nw - se + sw) / (4.0 * h * h);
    Ok(ux * ux * uxx + 2.0 * ux * ud * uxd + ud * ud * udd)
}

/// Distance from `(x, d)` to the nearest contact segment that starts at a
/// break of `f''` (tail junctions included), or `+inf` if there are none.
pub fn distance_to_break_segments(x: f64, d: f64, problem: &AdmissibleProblem) -> f64 {
    let delta = problem.delta();
    problem
        .spline()
        .slope_breaks()
        .into_iter()
        .map(|y0| {
            let top = contact_inverse(y0, delta, problem);
            point_segment_distance((x, d), (y0, 0.0), (top, delta))
        })
        .fold(f64::INFINITY, f64::min)
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let (wx, wy) = (p.0 - a.0, p.1 - a.1);
    let len2 = vx * vx + vy * vy;
    let t = if len2 > 0.0 {
        ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (wx - t * vx).hypot(wy - t * vy)
}
