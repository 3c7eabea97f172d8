use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rmi_core::{
    primitives_from_conserved, Field2D, InterfaceRecord, ProblemKind, Resolution, RiemannSolution,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io::fmt_f64;
use crate::runner::execute;

pub const REPORT_FILE: &str = "convergence.csv";

/// Spacing of the fixed times at which RMI amplitudes are compared (s).
pub const AMPLITUDE_SPACING: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionResult {
    /// Cells (1D tubes) or points per wavelength (RMI).
    pub resolution: usize,
    pub dir: PathBuf,
    /// Mean absolute density difference from the finest run; `None` for the
    /// finest run itself and for RMI runs.
    pub l1_vs_finest: Option<f64>,
    /// Mean absolute density error against the exact Riemann solution
    /// (Sod only).
    pub l1_vs_exact: Option<f64>,
    /// Amplitude at each of [`ConvergenceReport::times`] (RMI only).
    pub amplitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub times: Vec<f64>,
    pub rows: Vec<ResolutionResult>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("resolution,l1_vs_finest,l1_vs_exact");
        for t in &self.times {
            let _ = write!(s, ",a(t={})", fmt_f64(*t));
        }
        s.push('\n');
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        for r in &self.rows {
            let _ = write!(
                s,
                "{},{},{}",
                r.resolution,
                opt(r.l1_vs_finest),
                opt(r.l1_vs_exact)
            );
            for a in &r.amplitudes {
                let _ = write!(s, ",{}", fmt_f64(*a));
            }
            s.push('\n');
        }
        s
    }
}

fn with_resolution(base: &RunConfig, n: usize) -> RunConfig {
    let mut c = base.clone();
    c.spec.resolution = match c.spec.resolution {
        Resolution::Cells(_) => Resolution::Cells(n),
        Resolution::PointsPerWavelength(_) => Resolution::PointsPerWavelength(n),
    };
    c
}

fn density(f: &Field2D, i: usize) -> f64 {
    f.get(i, 0).rho
}

/// Mean absolute density difference between a coarse 1D field and a finer
/// one sampled at the coarse cell centres by linear interpolation.
pub fn l1_against_finer(coarse: &Field2D, fine: &Field2D) -> f64 {
    let n = fine.nx();
    let x0 = fine.cell_center(0, 0).0;
    let sample = |x: f64| {
        let s = ((x - x0) / fine.dx).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let w = s - i as f64;
        (1.0 - w) * density(fine, i) + w * density(fine, i + 1)
    };
    (0..coarse.nx())
        .map(|i| (density(coarse, i) - sample(coarse.cell_center(i, 0).0)).abs())
        .sum::<f64>()
        / coarse.nx() as f64
}

/// Mean absolute density error of a Sod-type field against the exact
/// solution of the Riemann problem at `x = 0`.
pub fn l1_against_exact(field: &Field2D, exact: &RiemannSolution) -> f64 {
    let t = field.time;
    (0..field.nx())
        .map(|i| {
            let x = field.cell_center(i, 0).0;
            let xi = if t > 0.0 {
                x / t
            } else {
                x.signum() * f64::INFINITY
            };
            (density(field, i) - exact.sample(xi).rho).abs()
        })
        .sum::<f64>()
        / field.nx() as f64
}

/// Amplitude at `t` by linear interpolation between records.
pub fn amplitude_at(series: &[InterfaceRecord], t: f64) -> Option<f64> {
    let k = series.iter().position(|r| r.t >= t * (1.0 - 1e-9))?;
    if k == 0 || (series[k].t - t).abs() <= 1e-9 * t {
        return Some(series[k].amplitude);
    }
    let (a, b) = (&series[k - 1], &series[k]);
    let w = (t - a.t) / (b.t - a.t);
    Some((1.0 - w) * a.amplitude + w * b.amplitude)
}

/// Run `base` at every resolution (cells for the tubes, points per
/// wavelength for RMI) into subdirectories of `dir`, then compare the runs.
/// The report is also written to `dir/convergence.csv`. A failed run aborts
/// the suite; outputs already written stay on disk.
pub fn run_convergence_suite(
    base: &RunConfig,
    resolutions: &[usize],
    dir: &Path,
) -> Result<ConvergenceReport> {
    let mut res = resolutions.to_vec();
    res.sort_unstable();
    res.dedup();
    if res.len() < 2 {
        return Err(CliError::Usage(
            "a convergence study needs at least two distinct resolutions".into(),
        ));
    }
    let spec = &base.spec;
    let is_rmi = matches!(spec.kind, ProblemKind::Rmi(_));

    let mut finals = Vec::new();
    let mut rows = Vec::new();
    let times: Vec<f64> = if is_rmi {
        let n = (spec.t_end / AMPLITUDE_SPACING + 1e-9).floor() as usize;
        (1..=n).map(|k| k as f64 * AMPLITUDE_SPACING).collect()
    } else {
        Vec::new()
    };
    let configs: Vec<RunConfig> = res.iter().map(|&n| with_resolution(base, n)).collect();
    for cfg in &configs {
        cfg.spec.validate().map_err(CliError::Invalid)?;
    }
    for (&n, cfg) in res.iter().zip(&configs) {
        let sub = dir.join(format!("{}_{n}", spec.name));
        let summary = execute(cfg, &sub)?;
        let amplitudes = times
            .iter()
            .map(|&t| amplitude_at(&summary.series, t).unwrap_or(f64::NAN))
            .collect();
        rows.push(ResolutionResult {
            resolution: n,
            dir: sub,
            l1_vs_finest: None,
            l1_vs_exact: None,
            amplitudes,
        });
        finals.push(summary.field);
    }

    if !is_rmi {
        let finest = finals.last().unwrap();
        for (row, f) in rows.iter_mut().zip(&finals).take(res.len() - 1) {
            row.l1_vs_finest = Some(l1_against_finer(f, finest));
        }
    }
    if matches!(spec.kind, ProblemKind::Sod) {
        let init = spec.initial_field()?;
        let left = primitives_from_conserved(init.get(0, 0), &spec.eos)?;
        let right = primitives_from_conserved(init.get(init.nx() - 1, 0), &spec.eos)?;
        let exact = RiemannSolution::solve(left, right, &spec.eos)?;
        for (row, f) in rows.iter_mut().zip(&finals) {
            row.l1_vs_exact = Some(l1_against_exact(f, &exact));
        }
    }

    let report = ConvergenceReport { times, rows };
    let path = dir.join(REPORT_FILE);
    std::fs::write(&path, report.to_csv()).map_err(|e| CliError::io(&path, e))?;
    Ok(report)
}
