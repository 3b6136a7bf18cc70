//! Brute-force ground truth for the closed-form construction.
//!
//! Two independent evaluators live here: direct maximization of the cone
//! envelope over a fine grid of bottom-edge points (with golden-section
//! polishing), and the McShane-Whitney lower/upper envelopes of the boundary
//! data sampled on both edges of the strip. Neither touches the contact-offset
//! equation except to obtain the top-edge boundary values the envelopes need.

use crate::construction::{solve_contact, FieldEvaluator, FieldSample, SolverSettings};
use crate::error::{Error, Result};
use crate::par::{try_map_range, Execution};
use crate::params::AdmissibleProblem;

const GOLDEN_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub nx: usize,
    pub nd: usize,
    /// Step of the brute-force scan, and of the boundary sampling for envelopes.
    pub h_y: f64,
    /// Distance kept from the truncation edge in envelope queries.
    pub margin: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.xmin < self.xmax) || !self.xmin.is_finite() || !self.xmax.is_finite() {
            return Err(Error::Config(format!(
                "window [{}, {}] is empty or not finite",
                self.xmin, self.xmax
            )));
        }
        if self.nx < 2 || self.nd < 2 {
            return Err(Error::Config(format!(
                "need nx, nd >= 2 (got {} x {})",
                self.nx, self.nd
            )));
        }
        if !(self.h_y > 0.0) || !self.h_y.is_finite() {
            return Err(Error::Config(format!("h_y = {} must be positive", self.h_y)));
        }
        if !(self.margin >= 0.0) {
            return Err(Error::Config(format!("margin = {} must be >= 0", self.margin)));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            return self.xmax;
        }
        self.xmin + (self.xmax - self.xmin) * i as f64 / (self.nx - 1) as f64
    }

    /// Height of row `j`: `delta (j + 1) / nd`, so rows cover `(0, delta]`.
    pub fn d(&self, j: usize, delta: f64) -> f64 {
        if j + 1 == self.nd {
            return delta;
        }
        delta * (j + 1) as f64 / self.nd as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    BruteForce,
    MwMin,
    MwMax,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::BruteForce => "brute_force",
            Provenance::MwMin => "mw_min",
            Provenance::MwMax => "mw_max",
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "closed_form" => Provenance::ClosedForm,
            "brute_force" => Provenance::BruteForce,
            "mw_min" => Provenance::MwMin,
            "mw_max" => Provenance::MwMax,
            other => return Err(Error::Config(format!("unknown provenance `{other}`"))),
        })
    }
}

/// Samples of `u` over a rectangular window, rows by height, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub delta: f64,
    pub provenance: Provenance,
    pub values: Vec<f64>,
}

impl FieldGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.nx + i]
    }

    /// `(x, d, u)` in storage order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &u)| {
            let (j, i) = (k / self.spec.nx, k % self.spec.nx);
            (self.spec.x(i), self.spec.d(j, self.delta), u)
        })
    }

    /// Largest absolute pointwise difference to another grid on the same spec.
    pub fn max_abs_diff(&self, other: &FieldGrid) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceResult {
    pub value: f64,
    pub argmax: f64,
    /// `(L_f + L) h_y / 2`, the scan error before refinement.
    pub bound: f64,
}

/// Maximizes `f(y) - L sqrt(d^2 + (x - y)^2)` over `|y - x| <= D d` by a scan of
/// step `h_y` followed by golden-section refinement around the best node.
pub fn brute_force_u(x: f64, d: f64, problem: &AdmissibleProblem, h_y: f64) -> Result<BruteForceResult> {
    brute_force_u_window(x, d, problem, h_y, 1.0)
}

/// [`brute_force_u`] with the scan half-width scaled to `scale * D * d`.
pub fn brute_force_u_window(
    x: f64,
    d: f64,
    problem: &AdmissibleProblem,
    h_y: f64,
    scale: f64,
) -> Result<BruteForceResult> {
    if !(d > 0.0 && d <= problem.delta()) {
        return Err(Error::Domain(format!("height {d} outside (0, {}]", problem.delta())));
    }
    if !(h_y > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bad scan at x = {x} with h_y = {h_y}")));
    }
    let spline = problem.spline();
    let l = problem.cone_slope();
    let objective = |y: f64| spline.value(y) - l * d.hypot(x - y);

    let half = scale * problem.window_radius * d + h_y;
    let lo = x - half;
    let steps = (2.0 * half / h_y).floor() as usize;
    let mut best_y = lo;
    let mut best = objective(lo);
    for k in 1..=steps {
        let y = lo + k as f64 * h_y;
        let v = objective(y);
        if v > best {
            best = v;
            best_y = y;
        }
    }
    let hi = x + half;
    let v = objective(hi);
    if v > best {
        best = v;
        best_y = hi;
    }

    let (value, argmax) = golden_max(&objective, best_y - h_y, best_y + h_y, (best, best_y));
    Ok(BruteForceResult {
        value,
        argmax,
        bound: (problem.slope_bound + l) * h_y / 2.0,
    })
}

/// Golden-section search for a maximum on `[a, b]`; returns the best point
/// evaluated, including `start`.
fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, start: (f64, f64)) -> (f64, f64) {
    let inv = (5f64.sqrt() - 1.0) / 2.0;
    let (mut best, mut best_y) = start;
    let mut c = b - inv * (b - a);
    let mut e = a + inv * (b - a);
    let mut fc = f(c);
    let mut fe = f(e);
    for _ in 0..GOLDEN_STEPS {
        for (v, y) in [(fc, c), (fe, e)] {
            if v > best {
                best = v;
                best_y = y;
            }
        }
        if fc > fe {
            b = e;
            e = c;
            fe = fc;
            c = b - inv * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv * (b - a);
            fe = f(e);
        }
    }
    for (v, y) in [(fc, c), (fe, e)] {
        if v > best {
            best = v;
            best_y = y;
        }
    }
    (best, best_y)
}

/// Brute-force evaluator with a fixed scan step.
#[derive(Debug, Clone, Copy)]
pub struct BruteForce<'a> {
    pub problem: &'a AdmissibleProblem,
    pub h_y: f64,
}

impl FieldEvaluator for BruteForce<'_> {
    fn problem(&self) -> &AdmissibleProblem {
        self.problem
    }

    fn sample(&self, x: f64, d: f64) -> Result<FieldSample> {
        let r = brute_force_u(x, d, self.problem, self.h_y)?;
        Ok(FieldSample {
            value: r.value,
            contact: r.argmax,
        })
    }
}

/// Boundary samples of both strip edges over a truncated window.
///
/// Bottom samples carry `f`, top samples carry the closed-form `u` at height
/// `delta`. Envelope queries are exhaustive over all samples.
#[derive(Debug, Clone)]
pub struct EnvelopeSampler<'a> {
    problem: &'a AdmissibleProblem,
    lo: f64,
    hi: f64,
    margin: f64,
    abscissas: Vec<f64>,
    bottom: Vec<f64>,
    top: Vec<f64>,
}

impl<'a> EnvelopeSampler<'a> {
    /// Samples `[lo, hi]` with step `h` on both edges. Queries must stay
    /// `margin` away from the ends, and `margin` must be at least `10 D delta`.
    pub fn new(problem: &'a AdmissibleProblem, lo: f64, hi: f64, h: f64, margin: f64, exec: Execution) -> Result<Self> {
        let required = 10.0 * problem.window_radius * problem.delta();
        if margin < required {
            return Err(Error::Config(format!(
                "envelope margin {margin} is below 10 D delta = {required}"
            )));
        }
        if !(lo < hi) || !(h > 0.0) {
            return Err(Error::Config(format!("bad boundary sampling [{lo}, {hi}] step {h}")));
        }
        if hi - lo <= 2.0 * margin {
            return Err(Error::Config(format!(
                "window [{lo}, {hi}] leaves no room inside margin {margin}"
            )));
        }
        let n = ((hi - lo) / h).floor() as usize + 1;
        let mut abscissas: Vec<f64> = (0..n).map(|k| lo + k as f64 * h).collect();
        if *abscissas.last().unwrap() < hi {
            abscissas.push(hi);
        }
        let spline = problem.spline();
        let bottom = abscissas.iter().map(|&y| spline.value(y)).collect();
        let settings = SolverSettings::default();
        let delta = problem.delta();
        let top = try_map_range(abscissas.len(), exec, |k| {
            solve_contact(abscissas[k], delta, problem, settings.tol, settings.max_iter).map(|s| s.value)
        })?;
        Ok(Self {
            problem,
            lo,
            hi,
            margin,
            abscissas,
            bottom,
            top,
        })
    }

    pub fn sample_count(&self) -> usize {
        self.abscissas.len()
    }

    /// `(low, high)`: max of `g(q) - L|p - q|` and min of `g(q) + L|p - q|`
    /// over all boundary samples `q`.
    pub fn envelopes(&self, x: f64, d: f64) -> Result<(f64, f64)> {
        let delta = self.problem.delta();
        if !(d > 0.0 && d <= delta) {
            return Err(Error::Domain(format!("height {d} outside (0, {delta}]")));
        }
        if x < self.lo + self.margin || x > self.hi - self.margin {
            return Err(Error::Config(format!(
                "point x = {x} is within margin {} of the sampled window [{}, {}]",
                self.margin, self.lo, self.hi
            )));
        }
        let l = self.problem.cone_slope();
        let up = delta - d;
        let mut low = f64::NEG_INFINITY;
        let mut high = f64::INFINITY;
        for ((&q, &fb), &ut) in self.abscissas.iter().zip(&self.bottom).zip(&self.top) {
            let dx = x - q;
            let to_bottom = l * d.hypot(dx);
            let to_top = l * up.hypot(dx);
            low = low.max(fb - to_bottom).max(ut - to_top);
            high = high.min(fb + to_bottom).min(ut + to_top);
        }
        Ok((low, high))
    }
}

/// McShane-Whitney envelopes at one point, sampling the boundary over
/// `[spec.xmin, spec.xmax]` with step `spec.h_y`.
pub fn mw_envelopes(x: f64, d: f64, problem: &AdmissibleProblem, spec: &GridSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    EnvelopeSampler::new(
        problem,
        spec.xmin,
        spec.xmax,
        spec.h_y,
        spec.margin,
        Execution::Sequential,
    )?
    .envelopes(x, d)
}

/// Fills a [`FieldGrid`] with the selected evaluator.
///
/// Envelope provenances sample the boundary over the window widened by
/// `spec.margin` on each side, so every grid point satisfies the margin.
pub fn grid_eval(
    problem: &AdmissibleProblem,
    spec: &GridSpec,
    provenance: Provenance,
    exec: Execution,
) -> Result<FieldGrid> {
    spec.validate()?;
    let delta = problem.delta();
    let n = spec.nx * spec.nd;
    let at = |k: usize| (spec.x(k % spec.nx), spec.d(k / spec.nx, delta));
    let tag = |x: f64, d: f64| {
        move |e: Error| Error::AtPoint {
            x,
            d,
            source: Box::new(e),
        }
    };

    let values = match provenance {
        Provenance::ClosedForm => {
            let settings = SolverSettings::default();
            try_map_range(n, exec, |k| {
                let (x, d) = at(k);
                solve_contact(x, d, problem, settings.tol, settings.max_iter)
                    .map(|s| s.value)
                    .map_err(tag(x, d))
            })?
        }
        Provenance::BruteForce => try_map_range(n, exec, |k| {
            let (x, d) = at(k);
            brute_force_u(x, d, problem, spec.h_y)
                .map(|r| r.value)
                .map_err(tag(x, d))
        })?,
        Provenance::MwMin | Provenance::MwMax => {
            let sampler = EnvelopeSampler::new(
                problem,
                spec.xmin - spec.margin,
                spec.xmax + spec.margin,
                spec.h_y,
                spec.margin,
                exec,
            )?;
            let lower = provenance == Provenance::MwMin;
            try_map_range(n, exec, |k| {
                let (x, d) = at(k);
                sampler
                    .envelopes(x, d)
                    .map(|(lo, hi)| if lower { lo } else { hi })
                    .map_err(tag(x, d))
            })?
        }
    };
    Ok(FieldGrid {
        spec: *spec,
        delta,
        provenance,
        values,
    })
}
