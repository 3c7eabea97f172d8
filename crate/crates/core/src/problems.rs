//! Run descriptions and initial conditions: the Sod and Shu-Osher shock
//! tubes and the single-mode air/SF6 Richtmyer-Meshkov shock tube.

use libm::erf;

use crate::error::{Result, SolverError};
use crate::flux::AlphaMode;
use crate::grid::{BoundaryCondition, BoundarySpec, Field2D};
use crate::integrator::{DtMode, Scheme};
use crate::state::{conserved_from_primitives, sound_speed, IdealGasEos, PrimitiveState};
use crate::weno::WenoParams;

/// Shock-tube geometry and gas data of the air/SF6 experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmiParams {
    /// Incident shock Mach number.
    pub mach: f64,
    /// Initial perturbation amplitude (cm).
    pub a0: f64,
    /// Perturbation wavelength (cm).
    pub lambda0: f64,
    /// Diffuse-interface thickness (cm).
    pub delta: f64,
    pub rho_heavy: f64,
    pub rho_light: f64,
    /// Uniform pre-shock pressure (dyn/cm²).
    pub p_interface: f64,
    pub y_shock: f64,
    pub y_interface: f64,
    /// Tube width and length (cm).
    pub width: f64,
    pub length: f64,
    pub gamma: f64,
    /// Carried for reference; the single-gamma closure does not use them.
    pub molar_mass_heavy: f64,
    pub molar_mass_light: f64,
}

impl RmiParams {
    /// Parameters for one of the two experimental Mach numbers (1.11, 1.21).
    pub fn for_mach(mach: f64) -> Result<Self> {
        let a0 = if (mach - 1.11).abs() < 1e-9 {
            0.229
        } else if (mach - 1.21).abs() < 1e-9 {
            0.183
        } else {
            return Err(SolverError::Config(format!(
                "no tabulated amplitude for Mach {mach}; set a0 explicitly"
            )));
        };
        Ok(Self::with_amplitude(mach, a0))
    }

    pub fn with_amplitude(mach: f64, a0: f64) -> Self {
        Self {
            mach,
            a0,
            lambda0: 5.933,
            delta: 0.5,
            rho_heavy: 5.494e-3,
            rho_light: 1.351e-3,
            p_interface: 9.56e5,
            y_shock: 1.0,
            y_interface: 3.0,
            width: 8.9,
            length: 75.0,
            gamma: 1.276,
            molar_mass_heavy: 146.05,
            molar_mass_light: 34.76,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.lambda0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SolverError::Config(m));
        if !(self.mach >= 1.0) {
            return bad(format!("Mach number {} below 1", self.mach));
        }
        if !(self.a0 >= 0.0 && self.a0 < self.lambda0 / 4.0) {
            return bad(format!("amplitude {} outside [0, lambda0/4)", self.a0));
        }
        if !(self.delta > 0.0) {
            return bad(format!("diffuse thickness {} must be positive", self.delta));
        }
        if !(self.rho_light > 0.0 && self.rho_heavy > self.rho_light) {
            return bad("densities must satisfy 0 < light < heavy".into());
        }
        if !(self.p_interface > 0.0) || !(self.gamma > 1.0) {
            return bad("pressure and gamma must be positive/above 1".into());
        }
        if !(self.width > 0.0 && self.length > 0.0) {
            return bad("tube dimensions must be positive".into());
        }
        let layer = self.a0 + 2.0 * self.delta;
        if !(self.y_shock < self.y_interface - layer) || !(self.y_shock > 0.0) {
            return bad(format!(
                "shock at y={} must lie on the light side outside the diffuse layer [{}, {}]",
                self.y_shock,
                self.y_interface - layer,
                self.y_interface + layer
            ));
        }
        if !(self.y_interface + layer < self.length) {
            return bad("interface layer extends past the end wall".into());
        }
        Ok(())
    }

    /// Atwood number of the unshocked pair.
    pub fn atwood(&self) -> f64 {
        crate::diagnostics::atwood(self.rho_light, self.rho_heavy)
    }

    /// Pre-shock density and heavy mass fraction at `(x, y)`.
    pub fn interface_profile(&self, x: f64, y: f64) -> (f64, f64) {
        let mean = 0.5 * (self.rho_heavy + self.rho_light);
        let shift = self.a0 * (self.wavenumber() * x).cos();
        let s = std::f64::consts::PI.sqrt() * (y - self.y_interface - shift) / self.delta;
        let rho = mean * (1.0 + self.atwood() * erf(s));
        let m = ((rho - self.rho_light) / (self.rho_heavy - self.rho_light)).clamp(0.0, 1.0);
        (rho, m)
    }

    /// Quiescent air ahead of the incident shock.
    pub fn light_state(&self) -> PrimitiveState {
        PrimitiveState::new(self.rho_light, 0.0, 0.0, self.p_interface, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    Sod,
    ShuOsher { amplitude: f64, wavenumber: f64 },
    Rmi(RmiParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    /// Cells along x for the 1D tubes.
    Cells(usize),
    /// Grid points per initial perturbation wavelength.
    PointsPerWavelength(usize),
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub kind: ProblemKind,
    pub resolution: Resolution,
    /// `(x_min, x_max, y_min, y_max)` in cm.
    pub domain: (f64, f64, f64, f64),
    pub eos: IdealGasEos,
    pub bc: BoundarySpec,
    pub cfl: f64,
    pub t_end: f64,
    /// Explicit snapshot times (s).
    pub output_times: Vec<f64>,
    /// Regular snapshot interval (s).
    pub output_interval: Option<f64>,
    /// Interface-record interval (s), RMI only.
    pub series_interval: Option<f64>,
    pub weno: WenoParams,
    pub alpha_mode: AlphaMode,
    pub dt_mode: DtMode,
    /// Solver threads; `None` uses all cores.
    pub threads: Option<usize>,
}

impl ProblemSpec {
    fn base(name: &str, kind: ProblemKind, resolution: Resolution, eos: IdealGasEos) -> Self {
        Self {
            name: name.to_string(),
            kind,
            resolution,
            domain: (-5.0, 5.0, 0.0, 0.0),
            eos,
            bc: BoundarySpec::uniform(BoundaryCondition::ZeroGradientOutflow),
            cfl: 0.45,
            t_end: 0.0,
            output_times: Vec::new(),
            output_interval: None,
            series_interval: None,
            weno: WenoParams::default(),
            alpha_mode: AlphaMode::Global,
            dt_mode: DtMode::Min,
            threads: None,
        }
    }

    pub fn sod(n_cells: usize) -> Self {
        let mut p = Self::base(
            "sod",
            ProblemKind::Sod,
            Resolution::Cells(n_cells),
            IdealGasEos::new(1.4).unwrap(),
        );
        p.t_end = 2.0;
        p
    }

    pub fn shu_osher(n_cells: usize) -> Self {
        let mut p = Self::base(
            "shu-osher",
            ProblemKind::ShuOsher {
                amplitude: 0.2,
                wavenumber: 5.0,
            },
            Resolution::Cells(n_cells),
            IdealGasEos::new(1.4).unwrap(),
        );
        p.t_end = 1.8;
        p
    }

    pub fn rmi(params: RmiParams, ppw: usize) -> Result<Self> {
        let eos = IdealGasEos::new(params.gamma)?;
        let mut p = Self::base(
            "rmi",
            ProblemKind::Rmi(params),
            Resolution::PointsPerWavelength(ppw),
            eos,
        );
        p.domain = (0.0, params.width, 0.0, params.length);
        p.bc = BoundarySpec {
            x_min: BoundaryCondition::ReflectingWall,
            x_max: BoundaryCondition::ReflectingWall,
            y_min: BoundaryCondition::ZeroGradientOutflow,
            y_max: BoundaryCondition::ReflectingWall,
        };
        p.t_end = 1e-3;
        p.series_interval = Some(1e-5);
        Ok(p)
    }

    pub fn scheme(&self) -> Scheme {
        Scheme {
            eos: self.eos,
            weno: self.weno,
            alpha_mode: self.alpha_mode,
        }
    }

    pub fn tracks_interface(&self) -> bool {
        matches!(self.kind, ProblemKind::Rmi(_))
    }

    /// Interior cell counts and spacing `(nx, ny, h)`.
    pub fn grid_shape(&self) -> Result<(usize, usize, f64)> {
        let (x0, x1, y0, y1) = self.domain;
        match (self.kind, self.resolution) {
            (ProblemKind::Rmi(p), Resolution::PointsPerWavelength(ppw)) => {
                let h = p.lambda0 / ppw as f64;
                let nx = ((x1 - x0) / h).round() as usize;
                let ny = ((y1 - y0) / h).round() as usize;
                Ok((nx, ny, h))
            }
            (ProblemKind::Rmi(_), Resolution::Cells(_)) => Err(SolverError::Config(
                "RMI resolution is given in points per wavelength".into(),
            )),
            (_, Resolution::Cells(n)) => Ok((n, 1, (x1 - x0) / n as f64)),
            (_, Resolution::PointsPerWavelength(_)) => {
                Err(SolverError::Config("1D tubes take a cell count".into()))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (nx, ny, _) = self.grid_shape()?;
        let min_cells = |n: usize, axis: &str| {
            if n < 7 {
                Err(SolverError::Config(format!(
                    "{axis} resolution {n} below 7 cells"
                )))
            } else {
                Ok(())
            }
        };
        min_cells(nx, "x")?;
        if self.tracks_interface() {
            min_cells(ny, "y")?;
        }
        if !(self.t_end >= 0.0) {
            return Err(SolverError::Config(format!(
                "t_end {} is negative",
                self.t_end
            )));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SolverError::Config(format!(
                "cfl {} outside (0, 1)",
                self.cfl
            )));
        }
        if matches!(self.threads, Some(0)) {
            return Err(SolverError::Config("threads must be at least 1".into()));
        }
        self.weno.validate()?;
        self.bc.validate()?;
        if let ProblemKind::Rmi(p) = self.kind {
            p.validate()?;
        }
        Ok(())
    }

    pub fn initial_field(&self) -> Result<Field2D> {
        self.validate()?;
        match self.kind {
            ProblemKind::Sod => {
                let left = PrimitiveState::new(1.0, 0.0, 0.0, 1.0, 0.0);
                let right = PrimitiveState::new(0.125, 0.0, 0.0, 0.1, 1.0);
                self.tube(|x| if x < 0.0 { left } else { right })
            }
            ProblemKind::ShuOsher {
                amplitude,
                wavenumber,
            } => self.tube(|x| {
                if x < -4.0 {
                    PrimitiveState::new(3.857143, 2.629369, 0.0, 10.33333, 0.0)
                } else {
                    PrimitiveState::new(
                        1.0 + amplitude * (wavenumber * x).sin(),
                        0.0,
                        0.0,
                        1.0,
                        1.0,
                    )
                }
            }),
            ProblemKind::Rmi(p) => self.rmi_field(&p),
        }
    }

    fn tube(&self, state: impl Fn(f64) -> PrimitiveState) -> Result<Field2D> {
        let (nx, _, h) = self.grid_shape()?;
        let mut f = Field2D::new(nx, 1, h, h, (self.domain.0, 0.0), Default::default())?;
        for i in 0..nx {
            let (x, _) = f.cell_center(i, 0);
            *f.get_mut(i, 0) = conserved_from_primitives(&state(x), &self.eos);
        }
        Ok(f)
    }

    fn rmi_field(&self, p: &RmiParams) -> Result<Field2D> {
        let (nx, ny, h) = self.grid_shape()?;
        let mut f = Field2D::new(
            nx,
            ny,
            h,
            h,
            (self.domain.0, self.domain.2),
            Default::default(),
        )?;
        let shocked = post_shock_state(&p.light_state(), p.mach, &self.eos)?;
        // The shock travels in +y: the induced velocity is the y component.
        let shocked = PrimitiveState::new(shocked.rho, 0.0, shocked.u, shocked.p, 0.0);
        for j in 0..ny {
            for i in 0..nx {
                let (x, y) = f.cell_center(i, j);
                let w = if y < p.y_shock {
                    shocked
                } else {
                    let (rho, m) = p.interface_profile(x - self.domain.0, y);
                    PrimitiveState::new(rho, 0.0, 0.0, p.p_interface, m)
                };
                *f.get_mut(i, j) = conserved_from_primitives(&w, &self.eos);
            }
        }
        Ok(f)
    }
}

/// State behind a normal shock of Mach `mach` running in +x into `pre`.
pub fn post_shock_state(
    pre: &PrimitiveState,
    mach: f64,
    eos: &IdealGasEos,
) -> Result<PrimitiveState> {
    if !(mach >= 1.0) {
        return Err(SolverError::InvalidArgument(format!(
            "shock Mach number {mach} below 1"
        )));
    }
    pre.validate()?;
    let g = eos.gamma();
    let m2 = mach * mach;
    let rho_ratio = (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
    let p_ratio = (2.0 * g * m2 - (g - 1.0)) / (g + 1.0);
    let shock_speed = mach * sound_speed(pre, eos);
    // Mass conservation in the shock frame.
    let induced = shock_speed * (1.0 - 1.0 / rho_ratio);
    Ok(PrimitiveState::new(
        pre.rho * rho_ratio,
        pre.u + induced,
        pre.v,
        pre.p * p_ratio,
        pre.mass_fraction,
    ))
}

/// Lab-frame speed of a shock of Mach `mach` running into `pre` in +x.
pub fn shock_speed(pre: &PrimitiveState, mach: f64, eos: &IdealGasEos) -> f64 {
    pre.u + mach * sound_speed(pre, eos)
}

pub fn init_sod(n_cells: usize) -> Result<(ProblemSpec, Field2D)> {
    let spec = ProblemSpec::sod(n_cells);
    let field = spec.initial_field()?;
    Ok((spec, field))
}

pub fn init_shu_osher(n_cells: usize) -> Result<(ProblemSpec, Field2D)> {
    let spec = ProblemSpec::shu_osher(n_cells);
    let field = spec.initial_field()?;
    Ok((spec, field))
}

pub fn init_rmi(params: RmiParams, points_per_wavelength: usize) -> Result<(ProblemSpec, Field2D)> {
    let spec = ProblemSpec::rmi(params, points_per_wavelength)?;
    let field = spec.initial_field()?;
    Ok((spec, field))
}
