use std::path::{Path, PathBuf};

use rmi_core::{run_with, Field2D, IdealGasEos, InterfaceRecord, RunObserver, SolverError};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io::{write_snapshot, SeriesWriter};

/// Environment variable that replaces the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "RMI_OUTPUT_DIR";

pub const SERIES_FILE: &str = "series.csv";

/// Output directory for `config`, honouring [`OUTPUT_DIR_ENV`].
pub fn output_dir(config: &RunConfig) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => config.output_dir.clone(),
    }
}

pub fn snapshot_name(index: usize) -> String {
    format!("snapshot_{index:04}.csv")
}

#[derive(Debug)]
pub struct RunSummary {
    pub field: Field2D,
    pub steps: u64,
    pub snapshots: Vec<PathBuf>,
    pub series_path: Option<PathBuf>,
    pub series: Vec<InterfaceRecord>,
}

struct FileSink {
    dir: PathBuf,
    eos: IdealGasEos,
    snapshots: Vec<PathBuf>,
    series: Option<SeriesWriter>,
    records: Vec<InterfaceRecord>,
    failure: Option<CliError>,
}

impl FileSink {
    /// Park an output error and abort the run.
    fn keep(&mut self, r: Result<()>) -> rmi_core::Result<()> {
        r.map_err(|e| {
            let msg = e.to_string();
            self.failure = Some(e);
            SolverError::Diagnostic(format!("output failed: {msg}"))
        })
    }
}

impl RunObserver for FileSink {
    fn snapshot(&mut self, field: &Field2D) -> rmi_core::Result<()> {
        let path = self.dir.join(snapshot_name(self.snapshots.len()));
        let r = write_snapshot(field, &self.eos, &path);
        self.snapshots.push(path);
        self.keep(r)
    }

    fn record(&mut self, record: &InterfaceRecord) -> rmi_core::Result<()> {
        self.records.push(*record);
        let r = match self.series.as_mut() {
            Some(w) => w.push(record),
            None => Ok(()),
        };
        self.keep(r)
    }
}

/// Run `config` writing snapshots (and the interface series for RMI runs)
/// into `dir`, which is created if needed. Files written before a failure
/// are kept.
pub fn execute(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let series_path = config
        .spec
        .tracks_interface()
        .then(|| dir.join(SERIES_FILE));
    let series = series_path
        .as_deref()
        .map(SeriesWriter::create)
        .transpose()?;
    let mut sink = FileSink {
        dir: dir.to_path_buf(),
        eos: config.spec.eos,
        snapshots: Vec::new(),
        series,
        records: Vec::new(),
        failure: None,
    };
    let outcome = run_with(&config.spec, &mut sink);
    if let Some(w) = sink.series.take() {
        w.finish()?;
    }
    if let Some(e) = sink.failure.take() {
        return Err(e);
    }
    let (field, steps) = outcome.map_err(|e| match e {
        SolverError::Config(_) | SolverError::InvalidArgument(_) => CliError::Invalid(e),
        e => CliError::Solver(e),
    })?;
    Ok(RunSummary {
        field,
        steps,
        snapshots: sink.snapshots,
        series_path,
        series: sink.records,
    })
}
