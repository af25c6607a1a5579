//! CSV emission.

use super::{ErrorReport, HarnessError, StabilityTrace};
use std::io::Write;

pub const CSV_HEADER: &str = "dt,err_u,err_p,err_div,order_u,order_p,order_div,wall_seconds";

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Writes the error table; orders are blank on the first row and wherever
/// undefined, `wall_seconds` is blank unless timing was requested.
pub fn write_error_csv(w: &mut dyn Write, report: &ErrorReport) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            num(r.dt),
            num(r.err.err_u),
            num(r.err.err_p),
            num(r.err.err_div),
            opt(r.order_u),
            opt(r.order_p),
            opt(r.order_div),
            opt(r.wall_seconds)
        )?;
    }
    Ok(())
}

/// Writes one row per step with every energy term and the total, followed
/// by `#` comment lines carrying the verdict.
pub fn write_stability_csv(w: &mut dyn Write, trace: &StabilityTrace) -> std::io::Result<()> {
    let names: Vec<&str> = trace.energies[0].terms.iter().map(|t| t.0).collect();
    writeln!(w, "step,{},total", names.join(","))?;
    for (n, e) in trace.energies.iter().enumerate() {
        let vals: Vec<String> = e.terms.iter().map(|t| num(t.1)).collect();
        writeln!(w, "{n},{},{}", vals.join(","), num(e.total))?;
    }
    writeln!(w, "# heuristic = {}", trace.heuristic)?;
    writeln!(w, "# monotone = {}", trace.monotone)?;
    writeln!(w, "# max_relative_increase = {}", num(trace.max_relative_increase))?;
    writeln!(w, "# sup = {}", num(trace.sup))
}

pub(crate) fn write_to_path(
    path: &std::path::Path,
    f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    f(&mut w).map_err(io)?;
    w.flush().map_err(io)
}
