//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage / I/O / parse error, 2 inadmissible
//! parameters, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{kink_transfer_report_with, DEFAULT_H_SCHEDULE};
use crate::boundary::parse_spline;
use crate::construction::{ClosedForm, FieldEvaluator, SolverSettings};
use crate::error::{Error, Result};
use crate::export::{self, Format};
use crate::oracle::{grid_eval, BruteForce, GridSpec, Provenance};
use crate::par::Execution;
use crate::params::{admit, delta_caps, window_radius, AdmissibleProblem, ProblemParams};
use crate::verify::{run_suite, SuiteConfig, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INADMISSIBLE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "infharm", version, about = "Infinity-harmonic envelopes on a strip")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the admissibility constants.
    Params(RunArgs),
    /// Sample contact map, u and u' along the top edge.
    Construct(RunArgs),
    /// Run the verification suite.
    Verify(RunArgs),
    /// Export u over a rectangular grid.
    Grid(RunArgs),
    /// Export the kink-transfer report.
    Report(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Structured => Format::Structured,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Spline-spec file with the boundary data.
    #[arg(long)]
    pub spline: PathBuf,
    /// Cone slope; must exceed sup |f'|.
    #[arg(long = "L", allow_hyphen_values = true)]
    pub cone_slope: f64,
    /// Strip height.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "delta_frac",
        required_unless_present = "delta_frac"
    )]
    pub delta: Option<f64>,
    /// Strip height as a fraction of the smaller admissibility cap.
    #[arg(long = "delta-frac", allow_hyphen_values = true)]
    pub delta_frac: Option<f64>,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 257)]
    pub nx: usize,
    #[arg(long, default_value_t = 17)]
    pub nd: usize,
    /// Brute-force scan step (also the envelope boundary step in `grid`).
    #[arg(long, default_value_t = 1e-6)]
    pub hy: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 200)]
    pub max_iter: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Grid evaluators (comma separated): closed_form, brute_force, mw_min, mw_max.
    #[arg(long, value_delimiter = ',', default_value = "closed_form")]
    pub provenance: Vec<String>,
    /// Envelope truncation margin for `grid`; defaults to 10 D delta.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Seed for the randomized checks of `verify`.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaChoice {
    Absolute(f64),
    FractionOfCap(f64),
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spline_path: PathBuf,
    pub cone_slope: f64,
    pub delta: DeltaChoice,
    pub grid: GridSpec,
    pub margin: Option<f64>,
    pub settings: SolverSettings,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub provenances: Vec<Provenance>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let delta = match (args.delta, args.delta_frac) {
            (Some(d), None) => DeltaChoice::Absolute(d),
            (None, Some(f)) => {
                if !(f > 0.0 && f < 1.0) {
                    return Err(Error::Config(format!("--delta-frac {f} must lie in (0, 1)")));
                }
                DeltaChoice::FractionOfCap(f)
            }
            _ => return Err(Error::Config("give exactly one of --delta, --delta-frac".into())),
        };
        if !(args.tol > 0.0) {
            return Err(Error::Config(format!("--tol {} must be positive", args.tol)));
        }
        let grid = GridSpec {
            xmin: args.xmin,
            xmax: args.xmax,
            nx: args.nx,
            nd: args.nd,
            h_y: args.hy,
            margin: args.margin.unwrap_or(0.0),
        };
        grid.validate()?;
        let provenances = args
            .provenance
            .iter()
            .map(|p| p.parse())
            .collect::<Result<Vec<Provenance>>>()?;
        Ok(Self {
            spline_path: args.spline.clone(),
            cone_slope: args.cone_slope,
            delta,
            grid,
            margin: args.margin,
            settings: SolverSettings {
                tol: args.tol,
                max_iter: args.max_iter,
            },
            out_path: args.out.clone(),
            format: args.format.into(),
            provenances,
            seed: args.seed,
        })
    }

    /// Reads the spline and resolves the strip height, without admitting.
    pub fn params(&self) -> Result<ProblemParams> {
        let text = fs::read_to_string(&self.spline_path)?;
        let spline = parse_spline(&text)?;
        let (slope_bound, curvature_bound) = spline.lipschitz_constants();
        let delta = match self.delta {
            DeltaChoice::Absolute(d) => d,
            DeltaChoice::FractionOfCap(f) => {
                let cap = delta_caps(self.cone_slope, slope_bound, curvature_bound)?.min();
                if !cap.is_finite() {
                    return Err(Error::Config(
                        "caps are unbounded for this spline; pass --delta instead of --delta-frac".into(),
                    ));
                }
                f * cap
            }
        };
        Ok(ProblemParams::new(spline, self.cone_slope, delta))
    }

    pub fn problem(&self) -> Result<AdmissibleProblem> {
        admit(self.params()?)
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Inadmissible { .. } => EXIT_INADMISSIBLE,
        _ => EXIT_USAGE,
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn fmt_cap(x: f64) -> String {
    if x.is_finite() {
        export::fmt_real(x)
    } else {
        "inf".to_string()
    }
}

/// `params`: prints every admissibility constant; exit 2 when rejected.
pub fn cmd_params(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let params = config.params()?;
    let (slope_bound, curvature_bound) = params.spline.lipschitz_constants();
    let radius = window_radius(params.cone_slope, slope_bound)?;
    let caps = delta_caps(params.cone_slope, slope_bound, curvature_bound)?;
    writeln!(out, "L              {}", export::fmt_real(params.cone_slope))?;
    writeln!(out, "L_f            {}", export::fmt_real(slope_bound))?;
    writeln!(out, "L'_f           {}", export::fmt_real(curvature_bound))?;
    writeln!(out, "D              {}", export::fmt_real(radius))?;
    writeln!(out, "delta_touch    {}", fmt_cap(caps.touch))?;
    writeln!(out, "delta_banach   {}", fmt_cap(caps.banach))?;
    writeln!(out, "delta          {}", export::fmt_real(params.delta))?;
    match admit(params) {
        Ok(p) => {
            writeln!(out, "contraction_q  {}", export::fmt_real(p.contraction_q))?;
            writeln!(out, "lip_Y_bound    {}", export::fmt_real(p.lip_offset_bound))?;
            writeln!(out, "status         admitted")?;
            Ok(EXIT_OK)
        }
        Err(e @ Error::Inadmissible { .. }) => {
            writeln!(out, "status         rejected: {e}")?;
            Ok(EXIT_INADMISSIBLE)
        }
        Err(e) => Err(e),
    }
}

/// `construct`: samples along the top edge over `[xmin, xmax]`.
pub fn cmd_construct(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = config.problem()?;
    let samples = export::top_samples(
        &problem,
        config.grid.xmin,
        config.grid.xmax,
        config.grid.nx,
        config.settings,
        Execution::Parallel,
    )?;
    export::write_top_samples(out, &samples, config.format)?;
    Ok(EXIT_OK)
}

/// `grid`: field grids for each requested provenance.
pub fn cmd_grid(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = config.problem()?;
    let margin = config.margin.unwrap_or(10.0 * problem.window_radius * problem.delta());
    let spec = GridSpec { margin, ..config.grid };
    let grids = config
        .provenances
        .iter()
        .map(|&p| grid_eval(&problem, &spec, p, Execution::Parallel))
        .collect::<Result<Vec<_>>>()?;
    export::write_field_grids(out, &grids, config.format)?;
    Ok(EXIT_OK)
}

/// `report`: kink reports measured on the brute-force oracle.
pub fn cmd_report(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = config.problem()?;
    let oracle = BruteForce {
        problem: &problem,
        h_y: config.grid.h_y,
    };
    let reports = kink_transfer_report_with(&oracle, &DEFAULT_H_SCHEDULE)?;
    export::write_kink_reports(out, &reports, config.format)?;
    Ok(EXIT_OK)
}

pub fn suite_config(config: &RunConfig) -> SuiteConfig {
    let mut cfg = SuiteConfig::standard(config.grid.xmin, config.grid.xmax);
    cfg.grid.nx = config.grid.nx;
    cfg.grid.nd = config.grid.nd;
    cfg.grid.h_y = config.grid.h_y;
    cfg.settings = config.settings;
    cfg.seed = config.seed;
    cfg
}

/// Runs the suite against `candidate`, printing one line per check.
/// Returns [`EXIT_VERIFY_FAILED`] if any check fails.
pub fn verify_with(candidate: &dyn FieldEvaluator, cfg: &SuiteConfig, out: &mut dyn Write) -> Result<i32> {
    let outcomes = run_suite(candidate, cfg, &Tolerances::default());
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    writeln!(
        out,
        "{} checks, {} failed, {} skipped",
        outcomes.len(),
        failed,
        outcomes
            .iter()
            .filter(|o| o.status == crate::verify::Status::Skipped)
            .count()
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

pub fn cmd_verify(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = config.problem()?;
    let candidate = ClosedForm::with_settings(&problem, config.settings);
    verify_with(&candidate, &suite_config(config), out)
}

type CommandFn = fn(&RunConfig, &mut dyn Write) -> Result<i32>;

/// Parses `args` (including the program name) and runs the command, writing
/// diagnostics to stderr. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (args, cmd): (&RunArgs, CommandFn) = match &cli.command {
        Command::Params(a) => (a, cmd_params),
        Command::Construct(a) => (a, cmd_construct),
        Command::Verify(a) => (a, cmd_verify),
        Command::Grid(a) => (a, cmd_grid),
        Command::Report(a) => (a, cmd_report),
    };
    let result = RunConfig::from_args(args).and_then(|config| {
        let mut out = open_out(&config.out_path)?;
        let code = cmd(&config, &mut out)?;
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("infharm: {e}");
            exit_code(&e)
        }
    }
}
