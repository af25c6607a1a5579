//! Convergence studies, stability probes and single solves.
//!
//! Everything here is deterministic for a fixed spec: convergence rows run
//! in parallel but are assembled in spec order, and random initial data are
//! drawn from a seeded ChaCha stream.

pub mod cli;
mod config_file;
mod init;
mod output;
mod snapshot;

pub use config_file::{parse_config, ConfigMap};
pub use init::random_solenoidal;
pub use output::{write_error_csv, write_stability_csv, CSV_HEADER};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};

use crate::linsolve::SolverOptions;
use crate::mac::{Location, MacGrid, ScalarField, VelocityField};
use crate::manufactured::{compare_to_reference, evaluate_errors, AnalyticCase, CaseId, ErrorTriple, ManufacturedProblem};
use crate::schemes::{energy, step, CrossCorrection, EnergyBreakdown, SchemeConfig, SchemeError, SchemeId, SimState, Unforced};
use rayon::prelude::*;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl HarnessError {
    /// Process exit code: 2 for an invalid spec, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Spec(_) | HarnessError::Scheme(SchemeError::Config(_)) => 2,
            _ => 3,
        }
    }
}

/// What the errors of a convergence study are measured against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    /// The manufactured solution itself.
    Analytic,
    /// A run of the same scheme on the same grid with `dt_min / factor`.
    Fine { factor: usize },
}

impl std::str::FromStr for Reference {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Reference::Analytic),
            "fine" => Ok(Reference::Fine { factor: 8 }),
            _ => Err(format!("unknown reference '{s}' (expected analytic or fine)")),
        }
    }
}

/// Physical and numerical parameters shared by all harness runs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunParams {
    pub scheme: SchemeId,
    pub nx: usize,
    pub nu: f64,
    pub chi: f64,
    pub lambda: f64,
    pub nonlinear: bool,
    pub cross_correction: CrossCorrection,
    pub solver: SolverOptions,
}

impl RunParams {
    pub fn new(scheme: SchemeId, nx: usize) -> Self {
        Self {
            scheme,
            nx,
            nu: 0.01,
            chi: 1.0,
            lambda: 0.0,
            nonlinear: false,
            cross_correction: CrossCorrection::LaggedDivided,
            solver: SolverOptions::default(),
        }
    }

    pub fn config(&self, dim: usize, dt: f64) -> SchemeConfig {
        let mut cfg = SchemeConfig::new(self.scheme, dim, dt, self.nu);
        cfg.chi = self.chi;
        cfg.lambda = self.lambda;
        cfg.nonlinear = self.nonlinear;
        cfg.cross_correction = self.cross_correction;
        cfg.solver = self.solver;
        cfg
    }

    pub fn grid(&self, dim: usize) -> Result<MacGrid, HarnessError> {
        MacGrid::unit(dim, self.nx).map_err(|e| HarnessError::Spec(e.to_string()))
    }

    fn validate(&self, dim: usize) -> Result<(), HarnessError> {
        let grid = self.grid(dim)?;
        self.config(dim, 1.0).validate(&grid).map_err(|e| HarnessError::Spec(e.to_string()))
    }
}

/// A convergence study over a list of time steps.
#[derive(Clone, Debug, PartialEq)]
pub struct StudySpec {
    pub params: RunParams,
    pub case: CaseId,
    /// Strictly decreasing.
    pub dts: Vec<f64>,
    pub t_final: f64,
    pub reference: Reference,
    /// Subtract the discrete mean of the pressure error.
    pub mean_adjust: bool,
    /// Fill the `wall_seconds` column (makes the CSV nondeterministic).
    pub timing: bool,
}

impl StudySpec {
    pub fn new(scheme: SchemeId, case: CaseId, nx: usize, dts: Vec<f64>) -> Self {
        Self {
            params: RunParams::new(scheme, nx),
            case,
            dts,
            t_final: 10.0,
            reference: Reference::Fine { factor: 8 },
            mean_adjust: true,
            timing: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.case.dim()
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.params.validate(self.dim())?;
        if self.dts.is_empty() {
            return Err(HarnessError::Spec("empty dt list".into()));
        }
        if self.dts.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(HarnessError::Spec("every dt must be positive".into()));
        }
        if self.dts.windows(2).any(|w| w[1] >= w[0]) {
            return Err(HarnessError::Spec("dt list must be strictly decreasing".into()));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(HarnessError::Spec("t-final must be positive".into()));
        }
        if let Reference::Fine { factor } = self.reference {
            if factor < 2 {
                return Err(HarnessError::Spec("reference refinement factor must be at least 2".into()));
            }
        }
        Ok(())
    }
}

/// Number of steps and the (possibly shortened) step that lands on `t_final`.
pub fn fit_step(t_final: f64, dt: f64) -> (usize, f64) {
    let steps = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    (steps, t_final / steps as f64)
}

/// Outcome of one row of a convergence study.
#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    /// Requested step.
    pub dt: f64,
    /// Step actually used so that `t_final` is reached exactly.
    pub dt_used: f64,
    pub err: ErrorTriple,
    pub order_u: Option<f64>,
    pub order_p: Option<f64>,
    pub order_div: Option<f64>,
    /// True when the order uses `log(e_i/e_{i+1}) / log(dt_i/dt_{i+1})`
    /// because consecutive steps are not halvings.
    pub generalized_order: bool,
    pub wall_seconds: Option<f64>,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub spec: StudySpec,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Ok)
    }

    pub fn last_orders(&self) -> Option<(f64, f64, f64)> {
        let r = self.rows.last()?;
        Some((r.order_u?, r.order_p?, r.order_div?))
    }
}

/// Observed order between consecutive rows.
pub fn observed_order(e0: f64, e1: f64, dt0: f64, dt1: f64) -> (f64, bool) {
    let ratio = dt0 / dt1;
    if (ratio - 2.0).abs() < 1e-9 {
        ((e0 / e1).log2(), false)
    } else {
        ((e0 / e1).ln() / ratio.ln(), true)
    }
}

/// Final reportable fields of a manufactured run.
pub struct RunResult {
    pub u: VelocityField,
    pub p: ScalarField,
    pub t: f64,
    pub steps: usize,
}

/// Runs the manufactured case to `t_final` with step `dt` (shortened to
/// land on `t_final`). Defect schemes run extra steps so that their lagged
/// composite reaches `t_final`.
pub fn run_case(params: &RunParams, case: CaseId, dt: f64, t_final: f64) -> Result<RunResult, HarnessError> {
    let dim = case.dim();
    let grid = params.grid(dim)?;
    let (steps, dt_used) = fit_step(t_final, dt);
    let cfg = params.config(dim, dt_used);
    let analytic = AnalyticCase::new(case);
    let problem = ManufacturedProblem { case: analytic, nu: params.nu, nonlinear: params.nonlinear };
    let mut state = SimState::from_exact(
        &cfg,
        &grid,
        &|k, x, t| analytic.velocity(k, x, t),
        &|x, t| analytic.pressure(x, t),
    )?;
    let total = steps + params.scheme.output_lag();
    for _ in 0..total {
        step(&mut state, &cfg, &problem)?;
    }
    let (u, p, t) = state.solution(params.scheme);
    Ok(RunResult { u, p, t, steps: total })
}

/// Runs a convergence study: one row per `dt`, errors at `t_final`.
/// A failing row is flagged with NaN errors and the study continues.
pub fn run_convergence(spec: &StudySpec) -> Result<ErrorReport, HarnessError> {
    spec.validate()?;
    let dt_min = *spec.dts.last().expect("validated non-empty");
    let mut jobs: Vec<f64> = spec.dts.clone();
    if let Reference::Fine { factor } = spec.reference {
        jobs.push(dt_min / factor as f64);
    }
    let results: Vec<(Result<RunResult, HarnessError>, f64)> = jobs
        .par_iter()
        .map(|&dt| {
            let start = Instant::now();
            let r = run_case(&spec.params, spec.case, dt, spec.t_final);
            (r, start.elapsed().as_secs_f64())
        })
        .collect();
    let mut results = results.into_iter();
    let rows_raw: Vec<_> = results.by_ref().take(spec.dts.len()).collect();
    let reference = match spec.reference {
        Reference::Analytic => None,
        Reference::Fine { .. } => Some(results.next().expect("reference job").0?),
    };
    let analytic = AnalyticCase::new(spec.case);
    let nan = ErrorTriple { err_u: f64::NAN, err_p: f64::NAN, err_div: f64::NAN };
    let mut rows: Vec<ErrorRow> = Vec::with_capacity(rows_raw.len());
    for (&dt, (res, secs)) in spec.dts.iter().zip(rows_raw) {
        let (err, status) = match res {
            Ok(run) => {
                let e = match &reference {
                    None => evaluate_errors(&run.u, &run.p, &analytic, run.t, spec.mean_adjust),
                    Some(r) => compare_to_reference(&run.u, &run.p, &r.u, &r.p, spec.mean_adjust),
                };
                (e, RowStatus::Ok)
            }
            Err(e) => (nan, RowStatus::Failed(e.to_string())),
        };
        let mut row = ErrorRow {
            dt,
            dt_used: fit_step(spec.t_final, dt).1,
            err,
            order_u: None,
            order_p: None,
            order_div: None,
            generalized_order: false,
            wall_seconds: spec.timing.then_some(secs),
            status,
        };
        if let Some(prev) = rows.last() {
            let ord = |a: f64, b: f64| {
                let (o, g) = observed_order(a, b, prev.dt_used, row.dt_used);
                (o.is_finite().then_some(o), g)
            };
            let (ou, g) = ord(prev.err.err_u, row.err.err_u);
            row.order_u = ou;
            row.order_p = ord(prev.err.err_p, row.err.err_p).0;
            row.order_div = ord(prev.err.err_div, row.err.err_div).0;
            row.generalized_order = g;
        }
        rows.push(row);
    }
    Ok(ErrorReport { spec: spec.clone(), rows })
}

/// An unforced run from random divergence-free data with no-slip walls.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilitySpec {
    pub params: RunParams,
    pub dim: usize,
    pub dt: f64,
    pub steps: usize,
    pub seed: u64,
    /// Scale of the initial velocity; `0` gives zero data.
    pub amplitude: f64,
}

impl StabilitySpec {
    pub fn new(scheme: SchemeId, dim: usize, nx: usize, dt: f64, steps: usize) -> Self {
        Self { params: RunParams::new(scheme, nx), dim, dt, steps, seed: 0, amplitude: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityTrace {
    /// `steps + 1` energies, the first for the initial state.
    pub energies: Vec<EnergyBreakdown>,
    /// The energy functional is a heuristic one rather than a proven Lyapunov function.
    pub heuristic: bool,
    /// Every step satisfies `E^{n+1} ≤ E^n (1 + 1e−12)`.
    pub monotone: bool,
    /// Largest relative one-step increase, `max (E^{n+1} − E^n) / E^n`.
    pub max_relative_increase: f64,
    /// Step after which the worst increase occurred.
    pub worst_step: usize,
    pub sup: f64,
}

/// Relative slack allowed in the per-step energy comparison.
pub const ENERGY_SLACK: f64 = 1e-12;

/// Runs `steps` unforced steps and records the scheme's energy functional.
pub fn run_stability(spec: &StabilitySpec) -> Result<StabilityTrace, HarnessError> {
    spec.params.validate(spec.dim)?;
    if !(spec.dt > 0.0 && spec.dt.is_finite()) {
        return Err(HarnessError::Spec("dt must be positive".into()));
    }
    let grid = spec.params.grid(spec.dim)?;
    let cfg = spec.params.config(spec.dim, spec.dt);
    let mut u = random_solenoidal(&grid, spec.seed);
    u.scale(spec.amplitude);
    let p = ScalarField::zeros(&grid, Location::Cell);
    let mut state = SimState::from_fields(&cfg, u, p)?;
    let mut energies = vec![energy(spec.params.scheme, &state, &cfg)?];
    for _ in 0..spec.steps {
        match step(&mut state, &cfg, &Unforced) {
            Ok(()) => energies.push(energy(spec.params.scheme, &state, &cfg)?),
            Err(SchemeError::Diverged { .. }) => {
                energies.push(EnergyBreakdown::non_finite(&energies[0]));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(summarize(energies))
}

fn summarize(energies: Vec<EnergyBreakdown>) -> StabilityTrace {
    let heuristic = energies[0].heuristic;
    let mut monotone = true;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_step = 0;
    for (n, w) in energies.windows(2).enumerate() {
        let (a, b) = (w[0].total, w[1].total);
        let ok = b <= a * (1.0 + ENERGY_SLACK) + f64::MIN_POSITIVE;
        monotone &= ok && b.is_finite();
        let rel = if a > 0.0 { (b - a) / a } else if b > 0.0 { f64::INFINITY } else { 0.0 };
        let rel = if rel.is_nan() { f64::INFINITY } else { rel };
        if rel > worst {
            worst = rel;
            worst_step = n + 1;
        }
    }
    let sup = energies.iter().map(|e| e.total).fold(0.0, |m: f64, v| if v.is_nan() { f64::INFINITY } else { m.max(v) });
    StabilityTrace {
        energies,
        heuristic,
        monotone,
        max_relative_increase: if worst.is_finite() || worst == f64::INFINITY { worst } else { 0.0 },
        worst_step,
        sup,
    }
}

/// A single simulation whose final state is written to disk.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveSpec {
    pub params: RunParams,
    pub case: CaseId,
    pub dt: f64,
    pub t_final: f64,
    pub out: PathBuf,
}

/// Result of [`run_solve`]: the written snapshot and its analytic errors.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub snapshot: Snapshot,
    pub errors: ErrorTriple,
    pub steps: usize,
}

/// Runs one manufactured simulation and writes its final fields.
pub fn run_solve(spec: &SolveSpec) -> Result<SolveOutcome, HarnessError> {
    spec.params.validate(spec.case.dim())?;
    if !(spec.dt > 0.0 && spec.t_final > 0.0) {
        return Err(HarnessError::Spec("dt and t-final must be positive".into()));
    }
    let run = run_case(&spec.params, spec.case, spec.dt, spec.t_final)?;
    let errors = evaluate_errors(&run.u, &run.p, &AnalyticCase::new(spec.case), run.t, true);
    let snapshot = Snapshot::from_fields(&run.u, &run.p, run.t);
    write_snapshot(&spec.out, &snapshot)?;
    Ok(SolveOutcome { snapshot, errors, steps: run.steps })
}
