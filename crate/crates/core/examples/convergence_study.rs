//! Temporal convergence of a few schemes on the 2D manufactured problem.
//!
//! Run with `cargo run --release --example convergence_study [nx]`.

use artcomp::harness::{run_convergence, write_error_csv, Reference, StudySpec};
use artcomp::manufactured::CaseId;
use artcomp::schemes::SchemeId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nx: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(16);
    for id in [SchemeId::Gs2d, SchemeId::Bdf2Bootstrap, SchemeId::Defect3Coupled] {
        let mut spec = StudySpec::new(id, CaseId::Mms2d, nx, vec![0.2, 0.1, 0.05, 0.025]);
        spec.t_final = 4.0;
        // errors against the same scheme run with dt/8, so spatial error cancels
        spec.reference = Reference::Fine { factor: 8 };
        let report = run_convergence(&spec)?;
        println!("# {id} (nominal order {})", id.nominal_order());
        write_error_csv(&mut std::io::stdout(), &report)?;
        if let Some((ou, op, _)) = report.last_orders() {
            println!("# last ratio: velocity {ou:.2}, pressure {op:.2}\n");
        }
    }
    Ok(())
}
