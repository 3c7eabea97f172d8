//! SSP-RK3 time stepping of dimension-split sweeps, CFL control and the run
//! driver.

use rayon::prelude::*;

use crate::diagnostics::{locate_interface, InterfaceRecord, InterfaceTips};
use crate::error::{Result, SolverError};
use crate::flux::{line_flux_into, AlphaMode, LineScratch};
use crate::grid::{fill_ghost, BoundaryCondition, BoundarySpec, Field2D, GHOST};
use crate::problems::ProblemSpec;
use crate::state::{
    max_wave_speed, primitives_from_conserved, ConservedState, Direction, IdealGasEos, NVARS,
};
use crate::weno::WenoParams;

/// How the two directional CFL limits are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtMode {
    /// `cfl * min(dx/ax, dy/ay)`
    Min,
    /// `cfl / (ax/dx + ay/dy)`
    InverseSum,
}

/// Spatial discretization settings shared by every sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    pub eos: IdealGasEos,
    pub weno: WenoParams,
    pub alpha_mode: AlphaMode,
}

impl Scheme {
    pub fn new(eos: IdealGasEos, weno: WenoParams) -> Self {
        Self {
            eos,
            weno,
            alpha_mode: AlphaMode::Global,
        }
    }
}

/// Time-integrated flux leaving through the two ends of every line of a
/// sweep, per conserved component, multiplied by the transverse face size.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SweepReport {
    pub boundary_outflow: [f64; NVARS],
}

pub fn compute_dt(field: &Field2D, cfl: f64, eos: &IdealGasEos, mode: DtMode) -> Result<f64> {
    if !(cfl > 0.0 && cfl < 1.0) {
        return Err(SolverError::InvalidArgument(format!(
            "CFL number must lie in (0, 1), got {cfl}"
        )));
    }
    let ax = max_wave_speed(field, Direction::X, eos)?;
    let ay = max_wave_speed(field, Direction::Y, eos)?;
    let dt = match mode {
        DtMode::Min => cfl * (field.dx / ax).min(field.dy / ay),
        DtMode::InverseSum => cfl / (ax / field.dx + ay / field.dy),
    };
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SolverError::invalid("time step", f64::NAN, f64::NAN));
    }
    Ok(dt)
}

struct LineUpdate {
    interior: Vec<ConservedState>,
    outflow: [f64; NVARS],
}

/// One RK stage: `next = a0 * base + a1 * (stage + dt * L(stage))` on every
/// line along `dir`. Ghosts of `stage` must be filled.
#[allow(clippy::too_many_arguments)]
fn stage_update(
    base: &Field2D,
    stage: &Field2D,
    next: &mut Field2D,
    dir: Direction,
    dt: f64,
    (a0, a1): (f64, f64),
    scheme: &Scheme,
) -> Result<[f64; NVARS]> {
    let alpha = match scheme.alpha_mode {
        AlphaMode::Global => Some(max_wave_speed(stage, dir, &scheme.eos)?),
        AlphaMode::Local => None,
    };
    let lines = stage.len_along(dir.other());
    let n = stage.len_along(dir);
    let h = stage.spacing(dir);
    let face = stage.spacing(dir.other());
    let updates: Vec<Result<LineUpdate>> = (0..lines)
        .into_par_iter()
        .map_init(
            || (LineScratch::default(), Vec::new(), Vec::new(), Vec::new()),
            |(scratch, line, base_line, fluxes), l| {
                stage.read_line(dir, l, line);
                base.read_line(dir, l, base_line);
                line_flux_into(line, dir, &scheme.eos, &scheme.weno, alpha, scratch, fluxes)
                    .map_err(|e| e.at(format_args!("{dir:?}-line {l}")))?;
                let mut interior = Vec::with_capacity(n);
                for c in 0..n {
                    let s = line[GHOST + c].to_array();
                    let b = base_line[GHOST + c].to_array();
                    let mut out = [0.0; NVARS];
                    for v in 0..NVARS {
                        let rhs = -(fluxes[c + 1][v] - fluxes[c][v]) / h;
                        out[v] = a0 * b[v] + a1 * (s[v] + dt * rhs);
                    }
                    interior.push(ConservedState::from_array(out));
                }
                let mut outflow = [0.0; NVARS];
                for v in 0..NVARS {
                    outflow[v] = (fluxes[n][v] - fluxes[0][v]) * face;
                }
                Ok(LineUpdate { interior, outflow })
            },
        )
        .collect();

    let mut total = [0.0; NVARS];
    let mut padded = Vec::new();
    for (l, upd) in updates.into_iter().enumerate() {
        let upd = upd?;
        padded.clear();
        padded.resize(GHOST, ConservedState::default());
        padded.extend_from_slice(&upd.interior);
        padded.resize(n + 2 * GHOST, ConservedState::default());
        next.write_line_interior(dir, l, &padded);
        for v in 0..NVARS {
            total[v] += upd.outflow[v];
        }
    }
    Ok(total)
}

fn validate_interior(field: &Field2D, eos: &IdealGasEos) -> Result<()> {
    for j in 0..field.ny() {
        for i in 0..field.nx() {
            primitives_from_conserved(field.get(i, j), eos)
                .map_err(|e| e.at(format_args!("cell ({i}, {j})")))?;
        }
    }
    Ok(())
}

/// Advance every line along `dir` by one SSP-RK3 step of size `dt`.
pub fn sweep(
    field: &mut Field2D,
    dir: Direction,
    dt: f64,
    bc: &BoundarySpec,
    scheme: &Scheme,
) -> Result<SweepReport> {
    let base = field.clone();
    let mut stage = field.clone();
    let mut next = field.clone();
    let coeffs = [(0.0, 1.0), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0)];
    let weights = [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0];
    let mut outflow = [0.0; NVARS];
    for (k, &c) in coeffs.iter().enumerate() {
        fill_ghost(&mut stage, bc);
        let b = stage_update(&base, &stage, &mut next, dir, dt, c, scheme)
            .map_err(|e| e.at(format_args!("RK stage {}", k + 1)))?;
        for v in 0..NVARS {
            outflow[v] += dt * weights[k] * b[v];
        }
        std::mem::swap(&mut stage, &mut next);
    }
    validate_interior(&stage, &scheme.eos)?;
    fill_ghost(&mut stage, bc);
    let (time, step) = (field.time, field.step);
    *field = stage;
    field.time = time;
    field.step = step;
    Ok(SweepReport {
        boundary_outflow: outflow,
    })
}

/// A sweep along an axis with a single cell and no walls on it cannot change
/// the field: every stencil along it is constant.
fn is_trivial(field: &Field2D, dir: Direction, bc: &BoundarySpec) -> bool {
    let (lo, hi) = bc.sides(dir);
    field.len_along(dir) == 1
        && lo != BoundaryCondition::ReflectingWall
        && hi != BoundaryCondition::ReflectingWall
}

/// One Strang-split step: X then Y on even steps, Y then X on odd ones.
pub fn strang_step(
    field: &mut Field2D,
    dt: f64,
    bc: &BoundarySpec,
    scheme: &Scheme,
) -> Result<SweepReport> {
    let order = if field.step % 2 == 0 {
        [Direction::X, Direction::Y]
    } else {
        [Direction::Y, Direction::X]
    };
    let mut report = SweepReport::default();
    for dir in order {
        if is_trivial(field, dir, bc) {
            continue;
        }
        let r = sweep(field, dir, dt, bc, scheme)?;
        for v in 0..NVARS {
            report.boundary_outflow[v] += r.boundary_outflow[v];
        }
    }
    field.time += dt;
    field.step += 1;
    Ok(report)
}

/// Final state of a run together with everything it emitted.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub field: Field2D,
    pub snapshots: Vec<Field2D>,
    pub series: Vec<InterfaceRecord>,
    pub steps: u64,
}

/// Callbacks invoked by [`run_with`].
pub trait RunObserver: Send {
    fn snapshot(&mut self, _field: &Field2D) -> Result<()> {
        Ok(())
    }
    fn record(&mut self, _record: &InterfaceRecord) -> Result<()> {
        Ok(())
    }
}

struct Collect {
    snapshots: Vec<Field2D>,
    series: Vec<InterfaceRecord>,
}

impl RunObserver for Collect {
    fn snapshot(&mut self, field: &Field2D) -> Result<()> {
        self.snapshots.push(field.clone());
        Ok(())
    }
    fn record(&mut self, record: &InterfaceRecord) -> Result<()> {
        self.series.push(*record);
        Ok(())
    }
}

/// Integrate `problem` from its initial condition to `t_end`, keeping
/// snapshots and interface records in memory.
pub fn run(problem: &ProblemSpec) -> Result<RunOutput> {
    let mut sink = Collect {
        snapshots: Vec::new(),
        series: Vec::new(),
    };
    let (field, steps) = run_with(problem, &mut sink)?;
    Ok(RunOutput {
        field,
        snapshots: sink.snapshots,
        series: sink.series,
        steps,
    })
}

/// Scheduled event times in `(0, t_end]`, sorted.
fn schedule(times: &[f64], interval: Option<f64>, t_end: f64) -> Vec<f64> {
    let mut out: Vec<f64> = times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t <= t_end)
        .collect();
    if let Some(dt) = interval.filter(|&d| d > 0.0) {
        let mut k = 1u64;
        loop {
            let t = k as f64 * dt;
            // Within rounding of t_end counts as t_end itself.
            if t > t_end * (1.0 - 1e-12) {
                break;
            }
            out.push(t);
            k += 1;
        }
    }
    if t_end > 0.0 {
        out.push(t_end);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * t_end.max(f64::MIN_POSITIVE));
    out
}

/// As [`run`], streaming snapshots and records to `observer`. Returns the
/// final field and the step count.
pub fn run_with(problem: &ProblemSpec, observer: &mut dyn RunObserver) -> Result<(Field2D, u64)> {
    problem.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(problem.threads.unwrap_or(0))
        .build()
        .map_err(|e| SolverError::Config(format!("thread pool: {e}")))?;
    pool.install(|| drive(problem, observer))
}

fn drive(problem: &ProblemSpec, observer: &mut dyn RunObserver) -> Result<(Field2D, u64)> {
    let mut field = problem.initial_field()?;
    let bc = problem.bc;
    let scheme = problem.scheme();
    fill_ghost(&mut field, &bc);

    let snapshot_times = schedule(
        &problem.output_times,
        problem.output_interval,
        problem.t_end,
    );
    let record_times = if problem.tracks_interface() {
        schedule(&[], problem.series_interval, problem.t_end)
    } else {
        Vec::new()
    };

    let mut tips0: Option<InterfaceTips> = None;
    let mut record = |field: &Field2D, observer: &mut dyn RunObserver| -> Result<()> {
        let tips = locate_interface(field)?;
        let t0 = *tips0.get_or_insert(tips);
        observer.record(&InterfaceRecord::new(field.time, tips, t0))
    };

    observer.snapshot(&field)?;
    if problem.tracks_interface() {
        record(&field, observer)?;
    }

    let mut events: Vec<(f64, bool, bool)> = Vec::new();
    for &t in &snapshot_times {
        events.push((t, true, false));
    }
    for &t in &record_times {
        match events
            .iter_mut()
            .find(|e| (e.0 - t).abs() <= 1e-12 * problem.t_end)
        {
            Some(e) => e.2 = true,
            None => events.push((t, false, true)),
        }
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut steps = 0u64;
    for (target, snap, rec) in events {
        while field.time < target {
            let dt_cfl = compute_dt(&field, problem.cfl, &problem.eos, problem.dt_mode)
                .map_err(|e| fail(steps, field.time, e))?;
            let remaining = target - field.time;
            // Land on the target exactly rather than leave a sliver step.
            let dt = if dt_cfl >= remaining {
                remaining
            } else {
                dt_cfl
            };
            strang_step(&mut field, dt, &bc, &scheme).map_err(|e| fail(steps, field.time, e))?;
            if target - field.time <= 1e-14 * target.abs() {
                field.time = target;
            }
            steps += 1;
        }
        if snap {
            observer.snapshot(&field)?;
        }
        if rec {
            record(&field, observer)?;
        }
    }
    Ok((field, steps))
}

fn fail(step: u64, time: f64, e: SolverError) -> SolverError {
    SolverError::StepFailed {
        step,
        time,
        source: Box::new(e),
    }
}
