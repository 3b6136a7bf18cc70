//! Admissibility constants for the strip construction.
//!
//! For a cone slope `L` strictly above `L_f = sup |f'|` and a strip height
//! `delta`, the contact point of the envelope lies within `D * delta` of the
//! evaluation abscissa, and the contact-offset map is a contraction as long
//! as `delta` stays under two caps that depend only on `L`, `L_f` and
//! `L'_f = Lip(f')`.

use crate::boundary::BoundarySpline;
use crate::error::{Cap, Error, Result};

/// Localization radius `D = 2 L L_f / (L^2 - L_f^2)`.
pub fn window_radius(cone_slope: f64, slope_bound: f64) -> Result<f64> {
    check_slopes(cone_slope, slope_bound)?;
    if slope_bound == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * cone_slope * slope_bound / gap(cone_slope, slope_bound))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCaps {
    /// `L / (L'_f (1 + D^2)^{3/2})`; hyperbolas touch the graph strictly.
    pub touch: f64,
    /// `(L^2 - L_f^2)^{3/2} / (L^2 L'_f)`; the offset map contracts.
    pub banach: f64,
}

impl DeltaCaps {
    pub fn min(&self) -> f64 {
        self.touch.min(self.banach)
    }
}

/// Both smallness caps on the strip height; `+inf` when `f'` is constant.
pub fn delta_caps(cone_slope: f64, slope_bound: f64, curvature_bound: f64) -> Result<DeltaCaps> {
    check_slopes(cone_slope, slope_bound)?;
    if !(curvature_bound >= 0.0) || !curvature_bound.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "Lip(f') = {curvature_bound} must be finite and non-negative"
        )));
    }
    if curvature_bound == 0.0 {
        return Ok(DeltaCaps {
            touch: f64::INFINITY,
            banach: f64::INFINITY,
        });
    }
    let d = window_radius(cone_slope, slope_bound)?;
    let touch = cone_slope / (curvature_bound * pow_three_halves(1.0 + d * d));
    let banach = pow_three_halves(gap(cone_slope, slope_bound)) / (cone_slope * cone_slope * curvature_bound);
    Ok(DeltaCaps { touch, banach })
}

fn gap(cone_slope: f64, slope_bound: f64) -> f64 {
    cone_slope * cone_slope - slope_bound * slope_bound
}

fn pow_three_halves(x: f64) -> f64 {
    x * x.sqrt()
}

fn check_slopes(cone_slope: f64, slope_bound: f64) -> Result<()> {
    if !cone_slope.is_finite() || !slope_bound.is_finite() || slope_bound < 0.0 {
        return Err(Error::InvalidParameters(format!(
            "L = {cone_slope}, L_f = {slope_bound} must be finite with L_f >= 0"
        )));
    }
    if cone_slope <= slope_bound {
        return Err(Error::InvalidParameters(format!(
            "cone slope L = {cone_slope} must exceed L_f = {slope_bound}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemParams {
    pub cone_slope: f64,
    pub delta: f64,
    pub spline: BoundarySpline,
}

impl ProblemParams {
    pub fn new(spline: BoundarySpline, cone_slope: f64, delta: f64) -> Self {
        Self {
            cone_slope,
            delta,
            spline,
        }
    }
}

/// A validated problem together with every derived constant.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleProblem {
    pub params: ProblemParams,
    /// `L_f`
    pub slope_bound: f64,
    /// `L'_f`
    pub curvature_bound: f64,
    /// `D`
    pub window_radius: f64,
    pub caps: DeltaCaps,
    /// `sup_{|t| <= L_f} Phi'(t) = L^2 / (L^2 - L_f^2)^{3/2}`
    pub phi_prime_max: f64,
    /// `delta * phi_prime_max * L'_f`
    pub contraction_q: f64,
    /// `q / (1 - q)`
    pub lip_offset_bound: f64,
}

impl AdmissibleProblem {
    pub fn spline(&self) -> &BoundarySpline {
        &self.params.spline
    }

    pub fn cone_slope(&self) -> f64 {
        self.params.cone_slope
    }

    pub fn delta(&self) -> f64 {
        self.params.delta
    }

    /// Contraction factor of the offset map at a height below `delta`.
    pub fn contraction_at(&self, height: f64) -> f64 {
        height * self.phi_prime_max * self.curvature_bound
    }

    /// The constant printed for the offset Lipschitz bound,
    /// `L^2 L'_f^2 / (L^2 - L_f^2)^{3/2}`, which carries `L'_f` squared.
    pub fn printed_lip_constant(&self) -> f64 {
        self.phi_prime_max * self.curvature_bound * self.curvature_bound
    }

    /// `delta C / (1 - delta C)` with the printed constant, or `+inf` when
    /// `delta C >= 1`.
    pub fn printed_lip_bound(&self) -> f64 {
        let dc = self.delta() * self.printed_lip_constant();
        if dc < 1.0 {
            dc / (1.0 - dc)
        } else {
            f64::INFINITY
        }
    }
}

/// Validates `params` and derives all constants; `delta` must be strictly
/// below both caps.
pub fn admit(params: ProblemParams) -> Result<AdmissibleProblem> {
    let (slope_bound, curvature_bound) = params.spline.lipschitz_constants();
    let cone_slope = params.cone_slope;
    let radius = window_radius(cone_slope, slope_bound)?;
    let caps = delta_caps(cone_slope, slope_bound, curvature_bound)?;
    let delta = params.delta;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "strip height delta = {delta} must be positive and finite"
        )));
    }
    if delta >= caps.touch {
        return Err(Error::Inadmissible {
            cap: Cap::Touch,
            delta,
            cap_value: caps.touch,
        });
    }
    if delta >= caps.banach {
        return Err(Error::Inadmissible {
            cap: Cap::Banach,
            delta,
            cap_value: caps.banach,
        });
    }
    let phi_prime_max = cone_slope * cone_slope / pow_three_halves(gap(cone_slope, slope_bound));
    let q = delta * phi_prime_max * curvature_bound;
    Ok(AdmissibleProblem {
        params,
        slope_bound,
        curvature_bound,
        window_radius: radius,
        caps,
        phi_prime_max,
        contraction_q: q,
        lip_offset_bound: q / (1.0 - q),
    })
}
