//! Command-line front end: `converge`, `stability` and `solve`.
//!
//! Every flag may also be given in a `--config` file; flags on the command
//! line take precedence.

use super::output::write_to_path;
use super::{
    parse_config, run_convergence, run_solve, run_stability, write_error_csv, write_stability_csv, ConfigMap,
    HarnessError, Reference, RowStatus, RunParams, SolveSpec, StabilitySpec, StudySpec,
};
use crate::manufactured::CaseId;
use crate::schemes::{CrossCorrection, SchemeId};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(name = "artcomp", version, about = "Artificial-compressibility time steppers: convergence, stability and solves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error table over a list of time steps for a manufactured solution.
    Converge(CommonArgs),
    /// Energy trace of an unforced run from random divergence-free data.
    Stability(CommonArgs),
    /// One manufactured run; writes the final fields as a binary snapshot.
    Solve(CommonArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// `key = value` file supplying defaults for any flag below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Cells per axis.
    #[arg(long)]
    pub nx: Option<usize>,
    /// Comma-separated, strictly decreasing (a single value for `stability` and `solve`).
    #[arg(long)]
    pub dt: Option<String>,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub chi: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// `mms2d` or `mms3d`.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long)]
    pub nonlinear: bool,
    /// `analytic` or `fine`.
    #[arg(long)]
    pub reference: Option<String>,
    /// Refinement factor of the fine-dt reference.
    #[arg(long)]
    pub ref_factor: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of steps of a stability run.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Mixed-derivative correction of the split defect schemes.
    #[arg(long)]
    pub cross_correction: Option<String>,
    /// Relative tolerance of the iterative solvers.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Fill the `wall_seconds` column.
    #[arg(long)]
    pub timing: bool,
    /// Report raw pressure errors instead of mean-adjusted ones.
    #[arg(long)]
    pub no_mean_adjust: bool,
}

/// Command-line values layered over a config file.
struct Settings {
    args: CommonArgs,
    file: ConfigMap,
}

impl Settings {
    fn load(args: CommonArgs) -> Result<Self, HarnessError> {
        let file = match &args.config {
            None => ConfigMap::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Spec(format!("{}: {e}", path.display())))?;
                parse_config(&text).map_err(|e| HarnessError::Spec(format!("{}: {e}", path.display())))?
            }
        };
        const KNOWN: &[&str] = &[
            "scheme", "dim", "nx", "dt", "t-final", "nu", "chi", "lambda", "case", "nonlinear", "reference",
            "ref-factor", "out", "seed", "steps", "cross-correction", "tol", "timing", "no-mean-adjust",
        ];
        if let Some(k) = file.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(HarnessError::Spec(format!("unknown config key '{k}'")));
        }
        Ok(Self { args, file })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, HarnessError> {
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| HarnessError::Spec(format!("bad value '{v}' for '{key}'"))),
        }
    }

    fn pick<T: FromStr + Clone>(&self, cli: &Option<T>, key: &str) -> Result<Option<T>, HarnessError> {
        match cli {
            Some(v) => Ok(Some(v.clone())),
            None => self.file_value(key),
        }
    }

    fn flag(&self, cli: bool, key: &str) -> Result<bool, HarnessError> {
        Ok(cli || self.file_value::<bool>(key)?.unwrap_or(false))
    }

    fn parsed<T: FromStr>(&self, cli: &Option<String>, key: &str) -> Result<Option<T>, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        match self.pick(cli, key)? {
            None => Ok(None),
            Some(s) => s.parse::<T>().map(Some).map_err(|e| HarnessError::Spec(e.to_string())),
        }
    }

    fn scheme(&self) -> Result<SchemeId, HarnessError> {
        self.parsed::<SchemeId>(&self.args.scheme, "scheme")?
            .ok_or_else(|| HarnessError::Spec("--scheme is required".into()))
    }

    fn case(&self) -> Result<CaseId, HarnessError> {
        let dim = self.pick(&self.args.dim, "dim")?;
        let case = self.parsed::<CaseId>(&self.args.case, "case")?;
        match (dim, case) {
            (Some(d), Some(c)) if c.dim() != d => {
                Err(HarnessError::Spec(format!("case {c} is {}D but --dim is {d}", c.dim())))
            }
            (_, Some(c)) => Ok(c),
            (Some(2), None) | (None, None) => Ok(CaseId::Mms2d),
            (Some(3), None) => Ok(CaseId::Mms3d),
            (Some(d), None) => Err(HarnessError::Spec(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    fn dts(&self) -> Result<Option<Vec<f64>>, HarnessError> {
        match self.pick(&self.args.dt, "dt")? {
            None => Ok(None),
            Some(s) => s
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| HarnessError::Spec(format!("bad dt value '{x}'"))))
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }

    fn single_dt(&self, default: f64) -> Result<f64, HarnessError> {
        match self.dts()? {
            None => Ok(default),
            Some(v) if v.len() == 1 => Ok(v[0]),
            Some(_) => Err(HarnessError::Spec("expected a single --dt value".into())),
        }
    }

    fn params(&self, dim: usize, default_nx: usize) -> Result<RunParams, HarnessError> {
        let nx = self.pick(&self.args.nx, "nx")?.unwrap_or(default_nx);
        let mut p = RunParams::new(self.scheme()?, nx);
        if let Some(v) = self.pick(&self.args.nu, "nu")? {
            p.nu = v;
        }
        if let Some(v) = self.pick(&self.args.chi, "chi")? {
            p.chi = v;
        }
        if let Some(v) = self.pick(&self.args.lambda, "lambda")? {
            p.lambda = v;
        }
        if let Some(v) = self.parsed::<CrossCorrection>(&self.args.cross_correction, "cross-correction")? {
            p.cross_correction = v;
        }
        if let Some(v) = self.pick(&self.args.tol, "tol")? {
            if !(v > 0.0) {
                return Err(HarnessError::Spec("--tol must be positive".into()));
            }
            p.solver.tol = v;
        }
        p.nonlinear = self.flag(self.args.nonlinear, "nonlinear")?;
        if !p.scheme.supports_dim(dim) {
            return Err(HarnessError::Spec(format!("scheme {} is not defined in {dim}D", p.scheme)));
        }
        Ok(p)
    }

    fn out(&self) -> Result<Option<PathBuf>, HarnessError> {
        self.pick(&self.args.out, "out")
    }
}

fn default_nx(dim: usize) -> usize {
    if dim == 2 {
        64
    } else {
        20
    }
}

fn default_dts(dim: usize) -> Vec<f64> {
    if dim == 2 {
        vec![0.2, 0.1, 0.05, 0.025]
    } else {
        vec![0.1, 0.05, 0.025]
    }
}

/// Assembles the convergence study described by the arguments.
pub fn study_from_args(args: CommonArgs) -> Result<(StudySpec, Option<PathBuf>), HarnessError> {
    let s = Settings::load(args)?;
    let case = s.case()?;
    let dim = case.dim();
    let params = s.params(dim, default_nx(dim))?;
    let dts = s.dts()?.unwrap_or_else(|| default_dts(dim));
    let mut spec = StudySpec::new(params.scheme, case, params.nx, dts);
    spec.params = params;
    if let Some(t) = s.pick(&s.args.t_final, "t-final")? {
        spec.t_final = t;
    }
    let factor = s.pick(&s.args.ref_factor, "ref-factor")?.unwrap_or(8);
    spec.reference = match s.parsed::<Reference>(&s.args.reference, "reference")?.unwrap_or(Reference::Fine { factor }) {
        Reference::Fine { .. } => Reference::Fine { factor },
        r => r,
    };
    spec.timing = s.flag(s.args.timing, "timing")?;
    spec.mean_adjust = !s.flag(s.args.no_mean_adjust, "no-mean-adjust")?;
    Ok((spec, s.out()?))
}

fn stability_from_args(args: CommonArgs) -> Result<(StabilitySpec, Option<PathBuf>), HarnessError> {
    let s = Settings::load(args)?;
    let dim = s.case()?.dim();
    let params = s.params(dim, if dim == 2 { 32 } else { 12 })?;
    let dt = s.single_dt(0.1)?;
    let steps = s.pick(&s.args.steps, "steps")?.unwrap_or(500);
    let mut spec = StabilitySpec::new(params.scheme, dim, params.nx, dt, steps);
    spec.params = params;
    spec.seed = s.pick(&s.args.seed, "seed")?.unwrap_or(0);
    Ok((spec, s.out()?))
}

fn solve_from_args(args: CommonArgs) -> Result<SolveSpec, HarnessError> {
    let s = Settings::load(args)?;
    let case = s.case()?;
    let dim = case.dim();
    let params = s.params(dim, default_nx(dim))?;
    let dt = s.single_dt(default_dts(dim)[0])?;
    let t_final = s.pick(&s.args.t_final, "t-final")?.unwrap_or(10.0);
    let out = s.out()?.ok_or_else(|| HarnessError::Spec("solve needs --out <path>".into()))?;
    Ok(SolveSpec { params, case, dt, t_final, out })
}

fn emit(
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), HarnessError> {
    match out {
        Some(path) => write_to_path(&path, f),
        None => f(stdout).map_err(|source| HarnessError::Io { path: "<stdout>".into(), source }),
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, HarnessError> {
    match cmd {
        Command::Converge(args) => {
            let (spec, out) = study_from_args(args)?;
            let report = run_convergence(&spec)?;
            emit(out, stdout, |w| write_error_csv(w, &report))?;
            let mut code = 0;
            for r in &report.rows {
                if r.generalized_order {
                    let _ = writeln!(stderr, "note: dt {} is not half the previous step; generalized order used", r.dt);
                }
                if (r.dt - r.dt_used).abs() > 1e-15 * r.dt {
                    let _ = writeln!(stderr, "note: dt {} shortened to {} to reach t-final", r.dt, r.dt_used);
                }
                if let RowStatus::Failed(m) = &r.status {
                    let _ = writeln!(stderr, "row dt={} failed: {m}", r.dt);
                    code = 3;
                }
            }
            Ok(code)
        }
        Command::Stability(args) => {
            let (spec, out) = stability_from_args(args)?;
            let trace = run_stability(&spec)?;
            emit(out, stdout, |w| write_stability_csv(w, &trace))?;
            let _ = writeln!(
                stderr,
                "{}: monotone = {}, heuristic = {}, max relative increase = {:e}",
                spec.params.scheme, trace.monotone, trace.heuristic, trace.max_relative_increase
            );
            Ok(0)
        }
        Command::Solve(args) => {
            let spec = solve_from_args(args)?;
            let outcome = run_solve(&spec)?;
            let _ = writeln!(
                stderr,
                "wrote {} (t = {}, {} steps): err_u = {:e}, err_p = {:e}, err_div = {:e}",
                spec.out.display(),
                outcome.snapshot.t,
                outcome.steps,
                outcome.errors.err_u,
                outcome.errors.err_p,
                outcome.errors.err_div
            );
            Ok(0)
        }
    }
}

/// Parses `argv` and runs the requested subcommand; returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
