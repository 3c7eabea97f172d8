//! Run descriptions, output files and study drivers for the `rmi` solver.

pub mod config;
pub mod error;
pub mod io;
pub mod runner;
pub mod suite;

pub use config::{parse_config, parse_run_config, RunConfig};
pub use error::{CliError, Result};
pub use io::{read_series, read_snapshot, write_series, write_snapshot, SeriesWriter, Snapshot};
pub use runner::{execute, output_dir, RunSummary, OUTPUT_DIR_ENV};
pub use suite::{run_convergence_suite, ConvergenceReport, ResolutionResult};

use rmi_core::{PrimitiveState, RiemannSolution};

/// Exact Sod solution sampled at `cells` cell centres on `[-5, 5]` at time
/// `t`, as CSV text with columns `x,rho,u,p,M`.
pub fn sod_oracle_csv(cells: usize, t: f64) -> Result<String> {
    if cells == 0 || !(t > 0.0) {
        return Err(CliError::Usage("oracle needs cells > 0 and t > 0".into()));
    }
    let eos = rmi_core::IdealGasEos::new(1.4)?;
    let exact = RiemannSolution::solve(
        PrimitiveState::new(1.0, 0.0, 0.0, 1.0, 0.0),
        PrimitiveState::new(0.125, 0.0, 0.0, 0.1, 1.0),
        &eos,
    )?;
    let h = 10.0 / cells as f64;
    let mut out = String::from("x,rho,u,p,M\n");
    for i in 0..cells {
        let x = -5.0 + (i as f64 + 0.5) * h;
        let w = exact.sample(x / t);
        let row = [x, w.rho, w.u, w.p, w.mass_fraction].map(io::fmt_f64);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
