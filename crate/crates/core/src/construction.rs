//! Closed-form evaluation of the envelope `u` on the strip.
//!
//! At a point `(x, h)` the supremum of `f(y) - L |(x, h) - (y, 0)|` is attained
//! at `y = x + Y`, where the offset `Y` solves
//!
//! ```text
//! Y = h * Phi(f'(x + Y)),    Phi(t) = t / sqrt(L^2 - t^2).
//! ```
//!
//! For an admitted problem the right-hand side is a contraction with factor
//! `h * phi_prime_max * L'_f <= q < 1`, so plain fixed-point iteration from
//! `Y = 0` converges. Heights below `delta` use the same equation with `h` in
//! place of `delta`; every cap only gets looser as the height shrinks.

use crate::error::{Error, Result};
use crate::params::AdmissibleProblem;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// `Phi(t) = t / sqrt(L^2 - t^2)` for `|t| < L`.
#[inline]
pub fn phi(t: f64, cone_slope: f64) -> Result<f64> {
    let gap = cone_slope * cone_slope - t * t;
    if !(gap > 0.0) {
        return Err(Error::Domain(format!("Phi({t}) undefined for cone slope {cone_slope}")));
    }
    Ok(t / gap.sqrt())
}

/// `Phi'(t) = L^2 / (L^2 - t^2)^{3/2}` for `|t| < L`.
#[inline]
pub fn phi_prime(t: f64, cone_slope: f64) -> Result<f64> {
    let gap = cone_slope * cone_slope - t * t;
    if !(gap > 0.0) {
        return Err(Error::Domain(format!(
            "Phi'({t}) undefined for cone slope {cone_slope}"
        )));
    }
    Ok(cone_slope * cone_slope / (gap * gap.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Result of the contact-offset solve at one point of the strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSolution {
    pub x: f64,
    pub height: f64,
    /// `y - x`
    pub offset: f64,
    /// Contact abscissa on the bottom edge.
    pub y: f64,
    /// `u(x, height)`
    pub value: f64,
    pub iterations: usize,
    /// `|Y - h Phi(f'(x + Y))|`
    pub residual: f64,
}

fn check_height(height: f64, problem: &AdmissibleProblem) -> Result<()> {
    if !(height > 0.0 && height <= problem.delta()) {
        return Err(Error::Domain(format!(
            "height {height} outside (0, {}]",
            problem.delta()
        )));
    }
    Ok(())
}

/// Banach iteration for the contact offset at `(x, height)`.
///
/// Stops once `|Y_{k+1} - Y_k| <= tol (1 - q) / q`, which bounds both the
/// distance to the fixed point and the returned residual by `tol`.
pub fn solve_contact(
    x: f64,
    height: f64,
    problem: &AdmissibleProblem,
    tol: f64,
    max_iter: usize,
) -> Result<ContactSolution> {
    check_height(height, problem)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("abscissa {x} is not finite")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!("tolerance {tol} must be positive")));
    }
    let spline = problem.spline();
    let cone_slope = problem.cone_slope();
    let q = problem.contraction_at(height);
    let threshold = if q > 0.0 { tol * (1.0 - q) / q } else { f64::INFINITY };

    let mut offset = 0.0;
    for iterations in 1..=max_iter {
        let next = height * phi(spline.derivative(x + offset), cone_slope)?;
        let step = (next - offset).abs();
        offset = next;
        if step <= threshold {
            let y = x + offset;
            let residual = (offset - height * phi(spline.derivative(y), cone_slope)?).abs();
            let value = spline.value(y) - cone_slope * height.hypot(offset);
            return Ok(ContactSolution {
                x,
                height,
                offset,
                y,
                value,
                iterations,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        x,
        height,
        iterations: max_iter,
    })
}

/// Inverse contact map `x(y) = y - h Phi(f'(y))`.
pub fn contact_inverse(y: f64, height: f64, problem: &AdmissibleProblem) -> f64 {
    let s = problem.spline().derivative(y);
    // |f'| <= L_f < L for admitted problems
    y - height * phi(s, problem.cone_slope()).expect("admitted problem keeps |f'| < L")
}

/// `u(x(y), h) = f(y) - h L^2 / sqrt(L^2 - f'(y)^2)`.
pub fn u_at_contact_height(y: f64, height: f64, problem: &AdmissibleProblem) -> f64 {
    let spline = problem.spline();
    let l = problem.cone_slope();
    let s = spline.derivative(y);
    spline.value(y) - height * l * l / (l * l - s * s).sqrt()
}

/// Value of `u` on the top edge at the point whose contact is `y`.
pub fn u_at_contact(y: f64, problem: &AdmissibleProblem) -> f64 {
    u_at_contact_height(y, problem.delta(), problem)
}

/// `u(x, d)` for `0 < d <= delta`.
pub fn u_interior(x: f64, d: f64, problem: &AdmissibleProblem) -> Result<f64> {
    Ok(solve_contact(x, d, problem, DEFAULT_TOL, DEFAULT_MAX_ITER)?.value)
}

/// `u` continued to the bottom edge by `f`.
pub fn u_with_boundary(x: f64, d: f64, problem: &AdmissibleProblem) -> Result<f64> {
    if d == 0.0 {
        return problem.spline().eval(x, crate::boundary::Quantity::Value);
    }
    u_interior(x, d, problem)
}

/// Tangential derivative of `u` along the top edge at `x(y)`, which equals `f'(y)`.
pub fn u_prime_top(y: f64, problem: &AdmissibleProblem) -> f64 {
    problem.spline().derivative(y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPoint {
    pub x: f64,
    pub d: f64,
    pub value: f64,
}

/// Point at fraction `t` along the contact segment from `(y, 0)` to
/// `(x(y), delta)`, with the value of `u` there. `u` decreases at rate `L`
/// along the segment.
pub fn segment_value(y: f64, t: f64, problem: &AdmissibleProblem) -> Result<SegmentPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("segment parameter {t} outside [0, 1]")));
    }
    let delta = problem.delta();
    let top = contact_inverse(y, delta, problem);
    let length = delta.hypot(top - y);
    Ok(SegmentPoint {
        x: y + t * (top - y),
        d: t * delta,
        value: problem.spline().value(y) - problem.cone_slope() * t * length,
    })
}

/// Value of `u` together with the bottom-edge point where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub value: f64,
    pub contact: f64,
}

/// Anything that can evaluate `u` on the strip.
pub trait FieldEvaluator: Sync {
    fn problem(&self) -> &AdmissibleProblem;

    fn sample(&self, x: f64, d: f64) -> Result<FieldSample>;

    fn value(&self, x: f64, d: f64) -> Result<f64> {
        Ok(self.sample(x, d)?.value)
    }
}

/// Evaluator backed by the fixed-point contact solve.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm<'a> {
    pub problem: &'a AdmissibleProblem,
    pub settings: SolverSettings,
}

impl<'a> ClosedForm<'a> {
    pub fn new(problem: &'a AdmissibleProblem) -> Self {
        Self {
            problem,
            settings: SolverSettings::default(),
        }
    }

    pub fn with_settings(problem: &'a AdmissibleProblem, settings: SolverSettings) -> Self {
        Self { problem, settings }
    }
}

impl FieldEvaluator for ClosedForm<'_> {
    fn problem(&self) -> &AdmissibleProblem {
        self.problem
    }

    fn sample(&self, x: f64, d: f64) -> Result<FieldSample> {
        let sol = solve_contact(x, d, self.problem, self.settings.tol, self.settings.max_iter)?;
        Ok(FieldSample {
            value: sol.value,
            contact: sol.y,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{parse_spline, BoundarySpline};
    use crate::params::{admit, ProblemParams};

    fn problem(spline: BoundarySpline, l: f64, delta: f64) -> AdmissibleProblem {
        admit(ProblemParams::new(spline, l, delta)).unwrap()
    }

    fn worked() -> AdmissibleProblem {
        let s = parse_spline("f0 0\nknot -1 0.5\nknot 0 0\nknot 1 0.5").unwrap();
        problem(s, 2.0, 0.1)
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(phi_prime(0.0, 2.0).unwrap(), 0.5);
        assert!((phi(2f64.sqrt(), 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(phi(2.0, 2.0), Err(Error::Domain(_))));
        assert!(matches!(phi_prime(-3.0, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn constant_data_contacts_overhead() {
        let p = problem(BoundarySpline::new(1.5, &[(0.0, 0.0)]).unwrap(), 2.0, 0.1);
        let sol = solve_contact(0.7, 0.1, &p, 1e-12, 200).unwrap();
        assert_eq!(sol.offset, 0.0);
        assert!((sol.value - (1.5 - 0.2)).abs() < 1e-15);
        assert_eq!(sol.iterations, 1);
    }

    #[test]
    fn linear_data_closed_form() {
        let p = problem(BoundarySpline::new(0.0, &[(0.0, 1.0)]).unwrap(), 2.0, 0.1);
        let sol = solve_contact(0.3, 0.1, &p, 1e-12, 200).unwrap();
        assert!((sol.offset - 0.1 / 3f64.sqrt()).abs() < 1e-15);
        assert!((sol.value - (0.3 - 0.1 * 3f64.sqrt())).abs() < 1e-15);
        assert!((contact_inverse(1.0, 0.1, &p) - (1.0 - 0.1 / 3f64.sqrt())).abs() < 1e-15);
        assert!((u_at_contact(1.0, &p) - (1.0 - 0.4 / 3f64.sqrt())).abs() < 1e-15);
        assert_eq!(u_prime_top(-4.0, &p), 1.0);
    }

    #[test]
    fn height_domain() {
        let p = worked();
        assert!(matches!(u_interior(0.0, 0.0, &p), Err(Error::Domain(_))));
        assert!(matches!(u_interior(0.0, 0.11, &p), Err(Error::Domain(_))));
        assert_eq!(u_with_boundary(0.0, 0.0, &p).unwrap(), 0.25);
        assert!(matches!(
            solve_contact(0.0, 0.1, &p, 0.0, 10),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn zero_iteration_budget_fails() {
        let p = worked();
        assert!(matches!(
            solve_contact(0.3, 0.1, &p, 1e-12, 0),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn worked_kink_contact_value() {
        let p = worked();
        assert_eq!(contact_inverse(0.0, 0.1, &p), 0.0);
        assert!((u_at_contact(0.0, &p) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn segment_endpoints_and_midpoint() {
        let p = worked();
        let bottom = segment_value(0.4, 0.0, &p).unwrap();
        assert_eq!((bottom.x, bottom.d), (0.4, 0.0));
        assert_eq!(bottom.value, p.spline().value(0.4));
        let top = segment_value(0.4, 1.0, &p).unwrap();
        assert!((top.value - u_at_contact(0.4, &p)).abs() < 1e-15);
        assert!((top.x - contact_inverse(0.4, 0.1, &p)).abs() < 1e-15);
        let mid = segment_value(0.0, 0.5, &p).unwrap();
        assert_eq!((mid.x, mid.d), (0.0, 0.05));
        assert!((mid.value - 0.15).abs() < 1e-15);
        assert!((u_interior(0.0, 0.05, &p).unwrap() - 0.15).abs() < 1e-15);
        assert!(segment_value(0.0, 1.5, &p).is_err());
    }
}
