//! Numbered verification checks over a configured problem.
//!
//! Each check returns a [`CheckOutcome`] with the measured quantity and the
//! threshold it was held to. Checks that evaluate `u` take the evaluator under
//! test as a `&dyn FieldEvaluator`, so a deliberately broken evaluator can be
//! fed in as a negative control; the brute-force oracle is always built from
//! the evaluator's problem.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    distance_to_break_segments, extrapolated_second, monotone_map_check, predicted_curvature,
    residual_infinity_laplacian_with, MonotoneWitness, Side, SlopeSource,
};
use crate::boundary::BoundarySpline;
use crate::construction::{contact_inverse, solve_contact, ClosedForm, FieldEvaluator, SolverSettings};
use crate::error::Result;
use crate::oracle::{brute_force_u, brute_force_u_window, BruteForce, EnvelopeSampler, GridSpec};
use crate::par::{try_map_range, Execution};
use crate::params::{admit, AdmissibleProblem, ProblemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn judged(id: u8, name: &'static str, ok: bool, measured: f64, threshold: f64, detail: String) -> Self {
        Self {
            id,
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            threshold,
            detail,
        }
    }

    fn skipped(id: u8, name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            id,
            name,
            status: Status::Skipped,
            measured: f64::NAN,
            threshold: f64::NAN,
            detail: detail.into(),
        }
    }

    fn errored(id: u8, name: &'static str, err: crate::error::Error) -> Self {
        Self {
            id,
            name,
            status: Status::Fail,
            measured: f64::NAN,
            threshold: f64::NAN,
            detail: format!("error: {err}"),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<7} [{:>2}] {:<22} measured={:.3e} threshold={:.3e}  {}",
            self.status.to_string(),
            self.id,
            self.name,
            self.measured,
            self.threshold,
            self.detail
        )
    }
}

/// Thresholds for every check.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub oracle: f64,
    pub window_change: f64,
    pub argmax_slack: f64,
    pub fixed_point_residual: f64,
    pub round_trip: f64,
    pub gradient: f64,
    pub kink_relative: f64,
    /// Envelope gap allowed, in units of `(L_f + L) h`.
    pub envelope_factor: f64,
    pub envelope_order_slack: f64,
    pub segment: f64,
    pub residual_factor: f64,
    pub degenerate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            oracle: 1e-9,
            window_change: 1e-12,
            argmax_slack: 1e-7,
            fixed_point_residual: 1e-12,
            round_trip: 1e-10,
            gradient: 1e-3,
            kink_relative: 0.01,
            envelope_factor: 5.0,
            envelope_order_slack: 1e-12,
            segment: 1e-9,
            residual_factor: 1.5,
            degenerate: 1e-12,
        }
    }
}

/// Sample sizes, steps and seeds for the suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub grid: GridSpec,
    pub settings: SolverSettings,
    pub seed: u64,
    pub random_points: usize,
    pub random_pairs: usize,
    pub gradient_step: f64,
    pub kink_clearance: f64,
    pub h_schedule: Vec<f64>,
    pub envelope_points: usize,
    pub envelope_step: f64,
    pub segments: usize,
    pub residual_probes: usize,
    pub residual_schedule: Vec<f64>,
    pub exec: Execution,
}

impl SuiteConfig {
    /// Desk-scale defaults on the window `[xmin, xmax]`.
    pub fn standard(xmin: f64, xmax: f64) -> Self {
        Self {
            grid: GridSpec {
                xmin,
                xmax,
                nx: 257,
                nd: 17,
                h_y: 1e-6,
                margin: 0.0,
            },
            settings: SolverSettings::default(),
            seed: 0x5eed,
            random_points: 100,
            random_pairs: 10_000,
            gradient_step: 1e-5,
            kink_clearance: 1e-4,
            h_schedule: vec![1e-3, 5e-4, 2.5e-4],
            envelope_points: 50,
            envelope_step: 1e-4,
            segments: 20,
            residual_probes: 10,
            residual_schedule: vec![1e-2, 5e-3, 2.5e-3],
            exec: Execution::Parallel,
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn grid_points(grid: &GridSpec, delta: f64) -> Vec<(f64, f64)> {
    (0..grid.nx * grid.nd)
        .map(|k| (grid.x(k % grid.nx), grid.d(k / grid.nx, delta)))
        .collect()
}

/// 1: closed form against the brute-force maximizer over the whole grid.
pub fn check_oracle_equivalence(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, tol: f64) -> CheckOutcome {
    const ID: u8 = 1;
    const NAME: &str = "oracle_equivalence";
    let problem = candidate.problem();
    let points = grid_points(&cfg.grid, problem.delta());
    let diffs = try_map_range(points.len(), cfg.exec, |k| {
        let (x, d) = points[k];
        let oracle = brute_force_u(x, d, problem, cfg.grid.h_y)?;
        Ok::<_, crate::error::Error>((candidate.value(x, d)? - oracle.value).abs())
    });
    match diffs {
        Ok(diffs) => {
            let worst = diffs.iter().copied().fold(0.0, f64::max);
            CheckOutcome::judged(
                ID,
                NAME,
                worst <= tol,
                worst,
                tol,
                format!("{}x{} grid, h_y = {:e}", cfg.grid.nx, cfg.grid.nd, cfg.grid.h_y),
            )
        }
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// 2: argmax inside `D d`; doubling the scan window changes nothing.
pub fn check_localization(problem: &AdmissibleProblem, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 2;
    const NAME: &str = "localization";
    let points = grid_points(&cfg.grid, problem.delta());
    let radius = problem.window_radius;
    let res = try_map_range(points.len(), cfg.exec, |k| {
        let (x, d) = points[k];
        let narrow = brute_force_u_window(x, d, problem, cfg.grid.h_y, 1.0)?;
        let wide = brute_force_u_window(x, d, problem, cfg.grid.h_y, 2.0)?;
        let excess = (narrow.argmax - x).abs() - radius * d;
        Ok::<_, crate::error::Error>((excess, (narrow.value - wide.value).abs()))
    });
    match res {
        Ok(v) => {
            let excess = v.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            let change = v.iter().map(|p| p.1).fold(0.0, f64::max);
            CheckOutcome::judged(
                ID,
                NAME,
                excess <= tol.argmax_slack && change <= tol.window_change,
                change,
                tol.window_change,
                format!(
                    "max(|argmax - x| - D d) = {excess:.3e} (slack {:.0e}), D = {radius:.6}",
                    tol.argmax_slack
                ),
            )
        }
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// 3: residuals, inverse round trip and iteration counts.
pub fn check_fixed_point(problem: &AdmissibleProblem, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 3;
    const NAME: &str = "fixed_point";
    let s = cfg.settings;
    let q = problem.contraction_q;
    let iter_cap = if q > 0.0 {
        (s.tol.ln() / q.ln()).ceil().max(0.0) as usize + 2
    } else {
        2
    };
    let mut r = rng(cfg.seed, ID as u64);
    let delta = problem.delta();
    let mut run = || -> Result<(f64, f64, usize)> {
        let mut worst_res: f64 = 0.0;
        let mut worst_trip: f64 = 0.0;
        let mut most_iter = 0;
        for k in 0..cfg.grid.nx * cfg.grid.nd {
            let (x, d) = (cfg.grid.x(k % cfg.grid.nx), cfg.grid.d(k / cfg.grid.nx, delta));
            let sol = solve_contact(x, d, problem, s.tol, s.max_iter)?;
            worst_res = worst_res.max(sol.residual);
            most_iter = most_iter.max(sol.iterations);
        }
        for _ in 0..cfg.random_points {
            let y = r.random_range(cfg.grid.xmin..cfg.grid.xmax);
            let x = contact_inverse(y, delta, problem);
            let sol = solve_contact(x, delta, problem, s.tol, s.max_iter)?;
            worst_res = worst_res.max(sol.residual);
            worst_trip = worst_trip.max((sol.y - y).abs());
            most_iter = most_iter.max(sol.iterations);
        }
        Ok((worst_res, worst_trip, most_iter))
    };
    match run() {
        Ok((res, trip, iters)) => CheckOutcome::judged(
            ID,
            NAME,
            res <= tol.fixed_point_residual && trip <= tol.round_trip && iters <= iter_cap,
            res,
            tol.fixed_point_residual,
            format!(
                "round trip {trip:.3e} (<= {:.0e}), iterations {iters} (<= {iter_cap}), q = {q:.6}",
                tol.round_trip
            ),
        ),
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// Random point of `[lo, hi]` at least `clearance` away from every break.
fn sample_clear(r: &mut ChaCha8Rng, lo: f64, hi: f64, breaks: &[f64], clearance: f64) -> f64 {
    loop {
        let y = r.random_range(lo..hi);
        if breaks.iter().all(|b| (y - b).abs() >= clearance) {
            return y;
        }
    }
}

/// 4: central difference of `u` along the top edge equals `f'` at the contact.
pub fn check_gradient_identity(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 4;
    const NAME: &str = "gradient_identity";
    let problem = candidate.problem();
    let delta = problem.delta();
    let spline = problem.spline();
    let breaks = spline.slope_breaks();
    let mut r = rng(cfg.seed, ID as u64);
    let h = cfg.gradient_step;
    let mut run = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.random_points {
            let y = sample_clear(&mut r, cfg.grid.xmin, cfg.grid.xmax, &breaks, cfg.kink_clearance);
            let x = contact_inverse(y, delta, problem);
            let fd = (candidate.value(x + h, delta)? - candidate.value(x - h, delta)?) / (2.0 * h);
            worst = worst.max((fd - spline.derivative(y)).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => CheckOutcome::judged(
            ID,
            NAME,
            worst <= tol.gradient,
            worst,
            tol.gradient,
            format!("{} points, h = {h:e}", cfg.random_points),
        ),
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// Measured one-sided curvature at one kink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkMeasurement {
    pub y0: f64,
    pub x0: f64,
    pub pred_minus: f64,
    pub pred_plus: f64,
    /// Second differences of the brute-force oracle.
    pub oracle_minus: f64,
    pub oracle_plus: f64,
    /// Quotients of `f'(contact)` from the evaluator under test.
    pub identity_minus: f64,
    pub identity_plus: f64,
    pub denom_min: f64,
}

pub fn measure_kinks(candidate: &dyn FieldEvaluator, h_y: f64, h_schedule: &[f64]) -> Result<Vec<KinkMeasurement>> {
    let problem = candidate.problem();
    let oracle = BruteForce { problem, h_y };
    problem
        .spline()
        .kinks()
        .iter()
        .map(|k| {
            let x0 = contact_inverse(k.y0, problem.delta(), problem);
            let pred = predicted_curvature(k.y0, problem);
            Ok(KinkMeasurement {
                y0: k.y0,
                x0,
                pred_minus: pred.upp_minus,
                pred_plus: pred.upp_plus,
                oracle_minus: extrapolated_second(&oracle, x0, Side::Left, SlopeSource::Quotients, h_schedule)?,
                oracle_plus: extrapolated_second(&oracle, x0, Side::Right, SlopeSource::Quotients, h_schedule)?,
                identity_minus: extrapolated_second(candidate, x0, Side::Left, SlopeSource::Identity, h_schedule)?,
                identity_plus: extrapolated_second(candidate, x0, Side::Right, SlopeSource::Identity, h_schedule)?,
                denom_min: pred.denom_minus.min(pred.denom_plus),
            })
        })
        .collect()
}

/// Relative error; absolute when the prediction is exactly zero.
fn rel_err(measured: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        measured.abs()
    } else {
        (measured - predicted).abs() / predicted.abs()
    }
}

/// 5: predicted one-sided second derivatives match both measurement paths,
/// stay ordered, and the transfer map is increasing.
pub fn check_kink_transfer(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 5;
    const NAME: &str = "kink_transfer";
    let problem = candidate.problem();
    if problem.spline().kinks().is_empty() {
        return CheckOutcome::skipped(ID, NAME, "boundary spline has no kinks");
    }
    let run = || -> Result<CheckOutcome> {
        let kinks = measure_kinks(candidate, cfg.grid.h_y, &cfg.h_schedule)?;
        let mut worst: f64 = 0.0;
        let mut ordered = true;
        let mut denoms_ok = true;
        for k in &kinks {
            for (m, p) in [
                (k.oracle_minus, k.pred_minus),
                (k.oracle_plus, k.pred_plus),
                (k.identity_minus, k.pred_minus),
                (k.identity_plus, k.pred_plus),
            ] {
                worst = worst.max(rel_err(m, p));
            }
            let fk = problem.spline();
            let (fm, fp) = (fk.second_left(k.y0), fk.second_right(k.y0));
            ordered &= (fm < fp) == (k.pred_minus < k.pred_plus) && k.pred_minus != k.pred_plus;
            denoms_ok &= k.denom_min >= 1.0 - problem.contraction_q;
        }
        let monotone = monotone_map_check(problem, 10_001)? == MonotoneWitness::Increasing;
        let first = kinks[0];
        Ok(CheckOutcome::judged(
            ID,
            NAME,
            worst <= tol.kink_relative && ordered && denoms_ok && monotone,
            worst,
            tol.kink_relative,
            format!(
                "{} kink(s); at y0 = {}: pred ({:.7}, {:.7}) oracle ({:.7}, {:.7}); ordered = {ordered}, monotone = {monotone}",
                kinks.len(),
                first.y0,
                first.pred_minus,
                first.pred_plus,
                first.oracle_minus,
                first.oracle_plus
            ),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::errored(ID, NAME, e))
}

/// 6: sampled McShane-Whitney envelopes pinch onto `u`.
pub fn check_envelopes(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 6;
    const NAME: &str = "envelope_coincidence";
    let problem = candidate.problem();
    let delta = problem.delta();
    let margin = 10.0 * problem.window_radius * delta;
    let h = cfg.envelope_step;
    let allowed = tol.envelope_factor * (problem.slope_bound + problem.cone_slope()) * h;
    let run = || -> Result<CheckOutcome> {
        let sampler = EnvelopeSampler::new(problem, cfg.grid.xmin, cfg.grid.xmax, h, margin, cfg.exec)?;
        let mut r = rng(cfg.seed, ID as u64);
        let points: Vec<(f64, f64)> = (0..cfg.envelope_points)
            .map(|_| {
                (
                    r.random_range(cfg.grid.xmin + margin..=cfg.grid.xmax - margin),
                    r.random_range(0.02 * delta..0.98 * delta),
                )
            })
            .collect();
        let rows = try_map_range(points.len(), cfg.exec, |k| {
            let (x, d) = points[k];
            let (low, high) = sampler.envelopes(x, d)?;
            Ok::<_, crate::error::Error>((low, high, candidate.value(x, d)?))
        })?;
        let gap = rows.iter().map(|(l, h, _)| h - l).fold(f64::NEG_INFINITY, f64::max);
        let slack = tol.envelope_order_slack;
        let bracketed = rows.iter().all(|&(l, h, u)| l <= u + slack && u <= h + slack);
        Ok(CheckOutcome::judged(
            ID,
            NAME,
            gap <= allowed && bracketed,
            gap,
            allowed,
            format!(
                "{} points, boundary step {h:e}, {} samples per edge, low <= u <= high: {bracketed}",
                points.len(),
                sampler.sample_count()
            ),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::errored(ID, NAME, e))
}

/// 7: `u` is affine along contact segments with slope `-L` per unit length.
pub fn check_segments(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 7;
    const NAME: &str = "segment_affine";
    let problem = candidate.problem();
    let delta = problem.delta();
    let spline = problem.spline();
    let l = problem.cone_slope();
    let mut r = rng(cfg.seed, ID as u64);
    let ts: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let mut run = || -> Result<(f64, f64)> {
        let mut worst: f64 = 0.0;
        let mut worst_grad: f64 = 0.0;
        for _ in 0..cfg.segments {
            let y = r.random_range(cfg.grid.xmin..cfg.grid.xmax);
            let top = contact_inverse(y, delta, problem);
            let length = delta.hypot(top - y);
            let us = ts
                .iter()
                .map(|&t| candidate.value(y + t * (top - y), t * delta))
                .collect::<Result<Vec<_>>>()?;
            // least-squares line in t
            let n = ts.len() as f64;
            let tm = ts.iter().sum::<f64>() / n;
            let um = us.iter().sum::<f64>() / n;
            let stt: f64 = ts.iter().map(|t| (t - tm) * (t - tm)).sum();
            let stu: f64 = ts.iter().zip(&us).map(|(t, u)| (t - tm) * (u - um)).sum();
            let slope = stu / stt;
            for (t, u) in ts.iter().zip(&us) {
                let fit = um + slope * (t - tm);
                let model = spline.value(y) - l * t * length;
                worst = worst.max((u - fit).abs()).max((u - model).abs());
            }
            worst_grad = worst_grad.max((-slope / length - l).abs());
        }
        Ok((worst, worst_grad))
    };
    match run() {
        Ok((worst, grad)) => CheckOutcome::judged(
            ID,
            NAME,
            worst <= tol.segment,
            worst,
            tol.segment,
            format!("{} segments, max ||grad u| - L| = {grad:.3e}", cfg.segments),
        ),
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// Result of the empirical Lipschitz study of the contact offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetLipschitz {
    pub empirical: f64,
    pub bound: f64,
    pub printed_bound: f64,
}

pub fn offset_lipschitz(problem: &AdmissibleProblem, cfg: &SuiteConfig) -> Result<OffsetLipschitz> {
    let mut r = rng(cfg.seed, 8);
    let pairs: Vec<(f64, f64)> = (0..cfg.random_pairs)
        .map(|_| loop {
            let a = r.random_range(cfg.grid.xmin..cfg.grid.xmax);
            let b = r.random_range(cfg.grid.xmin..cfg.grid.xmax);
            if (a - b).abs() >= 1e-6 {
                break (a, b);
            }
        })
        .collect();
    let s = cfg.settings;
    let delta = problem.delta();
    let ratios = try_map_range(pairs.len(), cfg.exec, |k| {
        let (a, b) = pairs[k];
        let ya = solve_contact(a, delta, problem, s.tol, s.max_iter)?.offset;
        let yb = solve_contact(b, delta, problem, s.tol, s.max_iter)?.offset;
        Ok::<_, crate::error::Error>((ya - yb).abs() / (a - b).abs())
    })?;
    Ok(OffsetLipschitz {
        empirical: ratios.into_iter().fold(0.0, f64::max),
        bound: problem.lip_offset_bound,
        printed_bound: problem.printed_lip_bound(),
    })
}

/// 8: empirical Lipschitz constant of the offset against `q / (1 - q)`; the
/// printed-constant bound is reported only.
pub fn check_offset_lipschitz(problem: &AdmissibleProblem, cfg: &SuiteConfig) -> CheckOutcome {
    const ID: u8 = 8;
    const NAME: &str = "offset_lipschitz";
    match offset_lipschitz(problem, cfg) {
        Ok(o) => CheckOutcome::judged(
            ID,
            NAME,
            o.empirical <= o.bound,
            o.empirical,
            o.bound,
            format!(
                "{} pairs; printed-constant bound {:.6e}, empirical/printed = {:.4} (informative)",
                cfg.random_pairs,
                o.printed_bound,
                o.empirical / o.printed_bound
            ),
        ),
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// Probe points for the residual study: off every break segment by a tube
/// of `5 h_max` plus the stencil, with contacts over curved spline pieces.
pub fn residual_probes(problem: &AdmissibleProblem, cfg: &SuiteConfig) -> Vec<(f64, f64)> {
    let delta = problem.delta();
    let h_max = cfg.residual_schedule.iter().copied().fold(0.0, f64::max);
    let spline = problem.spline();
    let mut r = rng(cfg.seed, 9);
    let mut probes = Vec::with_capacity(cfg.residual_probes);
    let lo_d = (2.0 * h_max).max(0.3 * delta);
    let hi_d = (delta - 2.0 * h_max).min(0.7 * delta);
    if !(lo_d < hi_d) {
        return probes;
    }
    let settings = SolverSettings::default();
    for _ in 0..100_000 {
        if probes.len() == cfg.residual_probes {
            break;
        }
        let x = r.random_range(cfg.grid.xmin..cfg.grid.xmax);
        let d = r.random_range(lo_d..hi_d);
        if distance_to_break_segments(x, d, problem) < 7.0 * h_max {
            continue;
        }
        let Ok(sol) = solve_contact(x, d, problem, settings.tol, settings.max_iter) else {
            continue;
        };
        if spline.second_left(sol.y) == 0.0 && spline.second_right(sol.y) == 0.0 {
            continue;
        }
        probes.push((x, d));
    }
    probes
}

/// 9: the discrete infinity-Laplacian residual shrinks under refinement.
pub fn check_residual(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 9;
    const NAME: &str = "residual_refinement";
    let problem = candidate.problem();
    let probes = residual_probes(problem, cfg);
    if probes.is_empty() {
        return CheckOutcome::skipped(ID, NAME, "no probe points over curved boundary pieces");
    }
    let run = || -> Result<f64> {
        let mut worst = f64::INFINITY;
        for &(x, d) in &probes {
            let res = cfg
                .residual_schedule
                .iter()
                .map(|&h| residual_infinity_laplacian_with(candidate, x, d, h).map(f64::abs))
                .collect::<Result<Vec<_>>>()?;
            for w in res.windows(2) {
                worst = worst.min(w[0] / w[1]);
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => CheckOutcome::judged(
            ID,
            NAME,
            worst >= tol.residual_factor,
            worst,
            tol.residual_factor,
            format!(
                "{} probes, min reduction per halving over h = {:?}",
                probes.len(),
                cfg.residual_schedule
            ),
        ),
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// Worst deviation of closed form and oracle from an exact formula on a
/// small grid over the window.
pub fn degenerate_deviation(
    problem: &AdmissibleProblem,
    cfg: &SuiteConfig,
    exact: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<f64> {
    let closed = ClosedForm::with_settings(problem, cfg.settings);
    let oracle = BruteForce {
        problem,
        h_y: cfg.grid.h_y,
    };
    let grid = GridSpec {
        nx: 33,
        nd: 5,
        ..cfg.grid
    };
    let points = grid_points(&grid, problem.delta());
    let devs = try_map_range(points.len(), cfg.exec, |k| {
        let (x, d) = points[k];
        let e = exact(x, d);
        Ok::<_, crate::error::Error>((closed.value(x, d)? - e).abs().max((oracle.value(x, d)? - e).abs()))
    })?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

/// 10: constant and linear data reproduce their closed forms.
pub fn check_degenerate(cone_slope: f64, delta: f64, cfg: &SuiteConfig, tol: &Tolerances) -> CheckOutcome {
    const ID: u8 = 10;
    const NAME: &str = "degenerate_data";
    let c = 0.3;
    let a = 0.5 * cone_slope;
    let run = || -> Result<(f64, f64)> {
        let constant = admit(ProblemParams::new(
            BoundarySpline::new(c, &[(0.0, 0.0)])?,
            cone_slope,
            delta,
        ))?;
        let linear = admit(ProblemParams::new(
            BoundarySpline::new(0.0, &[(0.0, a)])?,
            cone_slope,
            delta,
        ))?;
        let surd = (cone_slope * cone_slope - a * a).sqrt();
        Ok((
            degenerate_deviation(&constant, cfg, |_, d| c - cone_slope * d)?,
            degenerate_deviation(&linear, cfg, |x, d| a * x - d * surd)?,
        ))
    };
    match run() {
        Ok((dc, dl)) => {
            let worst = dc.max(dl);
            CheckOutcome::judged(
                ID,
                NAME,
                worst <= tol.degenerate,
                worst,
                tol.degenerate,
                format!("constant {dc:.3e}, linear (a = {a}) {dl:.3e}"),
            )
        }
        Err(e) => CheckOutcome::errored(ID, NAME, e),
    }
}

/// Runs checks 1 through 10 in order.
pub fn run_suite(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, tol: &Tolerances) -> Vec<CheckOutcome> {
    let problem = candidate.problem();
    vec![
        check_oracle_equivalence(candidate, cfg, tol.oracle),
        check_localization(problem, cfg, tol),
        check_fixed_point(problem, cfg, tol),
        check_gradient_identity(candidate, cfg, tol),
        check_kink_transfer(candidate, cfg, tol),
        check_envelopes(candidate, cfg, tol),
        check_segments(candidate, cfg, tol),
        check_offset_lipschitz(problem, cfg),
        check_residual(candidate, cfg, tol),
        check_degenerate(problem.cone_slope(), problem.delta(), cfg, tol),
    ]
}
