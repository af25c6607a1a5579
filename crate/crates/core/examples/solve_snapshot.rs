//! Runs one manufactured simulation, writes the final state as a binary
//! snapshot and reads it back.

use artcomp::harness::{read_snapshot, run_solve, RunParams, SolveSpec};
use artcomp::manufactured::CaseId;
use artcomp::schemes::SchemeId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("artcomp_example_snapshot.bin");
    let spec = SolveSpec {
        params: RunParams::new(SchemeId::Defect2Split, 24),
        case: CaseId::Mms2d,
        dt: 0.05,
        t_final: 2.0,
        out: out.clone(),
    };
    let outcome = run_solve(&spec)?;
    println!(
        "{} steps to t = {}: err_u = {:.3e}, err_p = {:.3e}, ‖div u‖ = {:.3e}",
        outcome.steps, outcome.snapshot.t, outcome.errors.err_u, outcome.errors.err_p, outcome.errors.err_div
    );

    let back = read_snapshot(&out)?;
    assert_eq!(back, outcome.snapshot);
    let sizes: Vec<usize> = back.velocity.iter().map(Vec::len).collect();
    println!(
        "{}: {}D, cells {:?}, velocity values per component {:?}, {} pressures",
        out.display(),
        back.dim,
        &back.cells[..back.dim],
        sizes,
        back.pressure.len()
    );
    std::fs::remove_file(&out)?;
    Ok(())
}
