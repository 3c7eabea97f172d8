//! Characteristic-wise, Lax-Friedrichs-split WENO5 numerical flux along one
//! grid line.
//!
//! For every interface the 6-cell window of conserved states and physical
//! fluxes is projected onto the characteristic fields of the flux Jacobian at
//! the arithmetic-mean state, split as `f± = (g ± alpha w) / 2`, reconstructed
//! (upwind for each half), summed and projected back.

use crate::error::{Result, SolverError};
use crate::grid::GHOST;
use crate::state::{
    physical_flux, primitives_from_conserved, sound_speed, ConservedState, Direction, IdealGasEos,
    NVARS,
};
use crate::weno::{reconstruct, Stencil5, WenoParams};

type Mat5 = [[f64; NVARS]; NVARS];

/// Characteristic fields that receive artificial compression: the three
/// fields moving with the flow (entropy, shear, mass fraction).
pub const COMPRESSED_FIELDS: [usize; 3] = [1, 2, 3];

/// How the splitting speed is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMode {
    /// One value per sweep direction and stage, the field-wide maximum.
    Global,
    /// Per interface, the maximum over the six stencil cells.
    Local,
}

/// Eigen-decomposition of the flux Jacobian at a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    /// `(u-a, u, u, u, u+a)` with `u` the normal velocity.
    pub lambdas: [f64; NVARS],
    /// Rows are left eigenvectors.
    pub left: Mat5,
    /// Columns are right eigenvectors.
    pub right: Mat5,
}

impl EigenSystem {
    #[inline]
    pub fn to_characteristic(&self, x: &[f64; NVARS]) -> [f64; NVARS] {
        let mut out = [0.0; NVARS];
        for (o, row) in out.iter_mut().zip(&self.left) {
            *o = dot(row, x);
        }
        out
    }

    #[inline]
    pub fn to_conserved(&self, w: &[f64; NVARS]) -> [f64; NVARS] {
        let mut out = [0.0; NVARS];
        for (o, row) in out.iter_mut().zip(&self.right) {
            *o = dot(row, w);
        }
        out
    }
}

#[inline(always)]
fn dot(a: &[f64; NVARS], b: &[f64; NVARS]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] + a[4] * b[4]
}

/// Component-wise arithmetic mean; fails if the mean is not a valid state.
pub fn average_state(
    left: &ConservedState,
    right: &ConservedState,
    eos: &IdealGasEos,
) -> Result<ConservedState> {
    let avg = mean_state(left, right);
    primitives_from_conserved(&avg, eos).map_err(|e| e.at("interface mean state"))?;
    Ok(avg)
}

#[inline]
fn mean_state(left: &ConservedState, right: &ConservedState) -> ConservedState {
    ConservedState::new(
        0.5 * (left.rho + right.rho),
        0.5 * (left.mx + right.mx),
        0.5 * (left.my + right.my),
        0.5 * (left.energy + right.energy),
        0.5 * (left.rho_m + right.rho_m),
    )
}

pub fn eigensystem(
    ubar: &ConservedState,
    dir: Direction,
    eos: &IdealGasEos,
) -> Result<EigenSystem> {
    let w = primitives_from_conserved(ubar, eos)?;
    let a = sound_speed(&w, eos);
    if !(a > 0.0) || !a.is_finite() {
        return Err(SolverError::invalid("eigensystem", w.rho, w.p));
    }
    let n = dir.normal_momentum();
    let t = dir.tangential_momentum();
    let un = w.velocity(dir);
    let ut = w.velocity(dir.other());
    let q2 = w.u * w.u + w.v * w.v;
    let h = (ubar.energy + w.p) / w.rho;
    let y = w.mass_fraction;
    let gm1 = eos.gamma() - 1.0;
    let b1 = gm1 / (a * a);
    let b2 = 0.5 * b1 * q2;

    let mut right = [[0.0; NVARS]; NVARS];
    let mut set_col = |col: usize, v: [f64; NVARS]| {
        for r in 0..NVARS {
            right[r][col] = v[r];
        }
    };
    let acoustic = |c: f64| {
        let mut v = [1.0, 0.0, 0.0, h + c * un * a, y];
        v[n] = un + c * a;
        v[t] = ut;
        v
    };
    let minus = acoustic(-1.0);
    let plus = acoustic(1.0);
    set_col(0, minus);
    set_col(1, [1.0, w.u, w.v, 0.5 * q2, y]);
    let mut shear = [0.0; NVARS];
    shear[t] = 1.0;
    shear[3] = ut;
    set_col(2, shear);
    set_col(3, [0.0, 0.0, 0.0, 0.0, 1.0]);
    set_col(4, plus);

    let mut left = [[0.0; NVARS]; NVARS];
    let mut l0 = [0.5 * (b2 + un / a), 0.0, 0.0, 0.5 * b1, 0.0];
    l0[n] = 0.5 * (-b1 * un - 1.0 / a);
    l0[t] = -0.5 * b1 * ut;
    let mut l4 = [0.5 * (b2 - un / a), 0.0, 0.0, 0.5 * b1, 0.0];
    l4[n] = 0.5 * (-b1 * un + 1.0 / a);
    l4[t] = -0.5 * b1 * ut;
    let mut l2 = [-ut, 0.0, 0.0, 0.0, 0.0];
    l2[t] = 1.0;
    left[0] = l0;
    left[1] = [1.0 - b2, b1 * w.u, b1 * w.v, -b1, 0.0];
    left[2] = l2;
    left[3] = [-y, 0.0, 0.0, 0.0, 1.0];
    left[4] = l4;

    Ok(EigenSystem {
        lambdas: [un - a, un, un, un, un + a],
        left,
        right,
    })
}

/// Reusable per-line buffers.
#[derive(Debug, Default)]
pub struct LineScratch {
    cons: Vec<[f64; NVARS]>,
    flux: Vec<[f64; NVARS]>,
    speed: Vec<f64>,
}

/// Numerical fluxes at the `n+1` interfaces of a line of `n` interior cells
/// padded with three ghosts per end. Entry `k` is the flux between interior
/// cells `k-1` and `k`.
pub fn line_flux(
    line: &[ConservedState],
    dir: Direction,
    eos: &IdealGasEos,
    params: &WenoParams,
    alpha: f64,
) -> Result<Vec<[f64; NVARS]>> {
    let mut out = Vec::new();
    line_flux_into(
        line,
        dir,
        eos,
        params,
        Some(alpha),
        &mut LineScratch::default(),
        &mut out,
    )?;
    Ok(out)
}

/// As [`line_flux`], writing into `out`. `alpha = None` selects local
/// splitting speeds.
pub fn line_flux_into(
    line: &[ConservedState],
    dir: Direction,
    eos: &IdealGasEos,
    params: &WenoParams,
    alpha: Option<f64>,
    scratch: &mut LineScratch,
    out: &mut Vec<[f64; NVARS]>,
) -> Result<()> {
    if line.len() < 2 * GHOST + 1 {
        return Err(SolverError::InvalidArgument(format!(
            "line of length {} is shorter than the 7-cell minimum",
            line.len()
        )));
    }
    let n = line.len() - 2 * GHOST;
    scratch.cons.clear();
    scratch.flux.clear();
    scratch.speed.clear();
    for (p, u) in line.iter().enumerate() {
        let w =
            primitives_from_conserved(u, eos).map_err(|e| e.at(format_args!("line cell {p}")))?;
        let s = w.velocity(dir).abs() + sound_speed(&w, eos);
        if let Some(a) = alpha {
            if s > a {
                return Err(SolverError::WaveSpeedBelowLocal {
                    alpha: a,
                    local: s,
                    location: format!("line cell {p}"),
                });
            }
        }
        scratch.cons.push(u.to_array());
        scratch.flux.push(physical_flux(u, dir, eos));
        scratch.speed.push(s);
    }

    out.clear();
    out.reserve(n + 1);
    for k in 0..=n {
        // Interface between padded cells p and p+1; window p-2..=p+3.
        let p = GHOST - 1 + k;
        // The eigensystem rejects an invalid mean state.
        let ubar = mean_state(&line[p], &line[p + 1]);
        let es = eigensystem(&ubar, dir, eos)
            .map_err(|e| e.at(format_args!("interface {k} mean state")))?;
        let a = match alpha {
            Some(a) => a,
            None => scratch.speed[p - 2..=p + 3]
                .iter()
                .fold(0.0f64, |m, &s| m.max(s)),
        };

        let cons: &[[f64; NVARS]; 6] = scratch.cons[k..k + 6].try_into().unwrap();
        let flux: &[[f64; NVARS]; 6] = scratch.flux[k..k + 6].try_into().unwrap();
        let mut g_hat = [0.0; NVARS];
        for (m, lrow) in es.left.iter().enumerate() {
            let mut fp = [0.0; 6];
            let mut fm = [0.0; 6];
            for c in 0..6 {
                let w = dot(lrow, &cons[c]);
                let g = dot(lrow, &flux[c]);
                fp[c] = 0.5 * (g + a * w);
                fm[c] = 0.5 * (g - a * w);
            }
            let sp = Stencil5([fp[0], fp[1], fp[2], fp[3], fp[4]]);
            let sm = Stencil5([fm[5], fm[4], fm[3], fm[2], fm[1]]);
            let compress = COMPRESSED_FIELDS.contains(&m);
            g_hat[m] = reconstruct(&sp, params, compress) + reconstruct(&sm, params, compress);
        }
        out.push(es.to_conserved(&g_hat));
    }
    Ok(())
}
