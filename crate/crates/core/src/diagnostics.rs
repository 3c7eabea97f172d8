//! Interface diagnostics: bubble/spike tips from the M = 0.5 contour,
//! amplitude and displacement, Atwood number and the impulsive growth-rate
//! model.

use crate::error::{Result, SolverError};
use crate::grid::Field2D;
use crate::problems::{post_shock_state, shock_speed, RmiParams};
use crate::riemann::RiemannSolution;
use crate::state::{IdealGasEos, PrimitiveState};

/// Bubble and spike tip heights (cm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceTips {
    pub y_bubble: f64,
    pub y_spike: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceRecord {
    /// Time (s).
    pub t: f64,
    pub y_bubble: f64,
    pub y_spike: f64,
    pub amplitude: f64,
    pub displacement: f64,
}

impl InterfaceRecord {
    pub fn new(t: f64, tips: InterfaceTips, initial: InterfaceTips) -> Self {
        let (amplitude, displacement) = amplitude_displacement(&tips, &initial);
        Self {
            t,
            y_bubble: tips.y_bubble,
            y_spike: tips.y_spike,
            amplitude,
            displacement,
        }
    }
}

/// Growth-model inputs and result for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthReport {
    /// Interface velocity (cm/s).
    pub delta_u: f64,
    /// Richtmyer velocity (cm/s).
    pub v_rm: f64,
    pub a0_plus: f64,
    pub atwood_plus: f64,
    /// Fit window `(start, end)` in seconds.
    pub window: (f64, f64),
}

fn mass_fraction(field: &Field2D, i: usize, j: usize) -> f64 {
    let u = field.get(i, j);
    u.rho_m / u.rho
}

/// Lowest and highest M = 0.5 crossing in column `i`, linearly interpolated
/// between cell centres.
fn column_crossings(field: &Field2D, i: usize) -> Option<(f64, f64)> {
    let mut lowest: Option<f64> = None;
    let mut highest: Option<f64> = None;
    let y = |j: usize| field.origin.1 + (j as f64 + 0.5) * field.dy;
    for j in 0..field.ny().saturating_sub(1) {
        let (a, b) = (
            mass_fraction(field, i, j) - 0.5,
            mass_fraction(field, i, j + 1) - 0.5,
        );
        let crossing = if a == 0.0 {
            Some(y(j))
        } else if a * b < 0.0 {
            Some(y(j) + a / (a - b) * field.dy)
        } else {
            None
        };
        if let Some(c) = crossing {
            lowest.get_or_insert(c);
            highest = Some(c);
        }
    }
    let last = field.ny() - 1;
    if mass_fraction(field, i, last) == 0.5 {
        lowest.get_or_insert(y(last));
        highest = Some(y(last));
    }
    lowest.zip(highest)
}

/// Bubble and spike tips of the M = 0.5 contour.
///
/// The heavy side is detected from the mean mass fraction of the bottom and
/// top rows. Bubbles (light into heavy) are the extreme crossing toward the
/// heavy side, spikes the extreme crossing toward the light side.
pub fn locate_interface(field: &Field2D) -> Result<InterfaceTips> {
    let (nx, ny) = (field.nx(), field.ny());
    let row_mean = |j: usize| (0..nx).map(|i| mass_fraction(field, i, j)).sum::<f64>() / nx as f64;
    let heavy_above = row_mean(ny - 1) >= row_mean(0);
    let mut low = f64::INFINITY;
    let mut high = f64::NEG_INFINITY;
    for i in 0..nx {
        let (lo, hi) = column_crossings(field, i)
            .ok_or_else(|| SolverError::Diagnostic(format!("no M = 0.5 crossing in column {i}")))?;
        low = low.min(lo);
        high = high.max(hi);
    }
    Ok(if heavy_above {
        InterfaceTips {
            y_bubble: high,
            y_spike: low,
        }
    } else {
        InterfaceTips {
            y_bubble: low,
            y_spike: high,
        }
    })
}

/// Amplitude (half the tip separation) and the mean tip drift from `initial`.
pub fn amplitude_displacement(tips: &InterfaceTips, initial: &InterfaceTips) -> (f64, f64) {
    let amplitude = 0.5 * (tips.y_spike - tips.y_bubble).abs();
    let displacement =
        0.5 * ((tips.y_bubble - initial.y_bubble) + (tips.y_spike - initial.y_spike));
    (amplitude, displacement)
}

pub fn atwood(rho_light: f64, rho_heavy: f64) -> f64 {
    (rho_heavy - rho_light) / (rho_heavy + rho_light)
}

/// Least-squares slope and intercept of `(t, y)` pairs.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(SolverError::Diagnostic(format!(
            "fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(SolverError::Diagnostic(
            "fit times must increase strictly".into(),
        ));
    }
    let n = points.len() as f64;
    let tm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, y) in points {
        sxy += (t - tm) * (y - ym);
        sxx += (t - tm) * (t - tm);
    }
    let slope = sxy / sxx;
    Ok((slope, ym - slope * tm))
}

fn window_points(
    series: &[InterfaceRecord],
    (t0, t1): (f64, f64),
    value: impl Fn(&InterfaceRecord) -> f64,
) -> Result<Vec<(f64, f64)>> {
    if !(t1 > t0) {
        return Err(SolverError::Diagnostic(format!(
            "empty fit window [{t0}, {t1}]"
        )));
    }
    let tol = 1e-9 * t1.abs();
    Ok(series
        .iter()
        .filter(|r| r.t >= t0 - tol && r.t <= t1 + tol)
        .map(|r| (r.t, value(r)))
        .collect())
}

/// Interface velocity: slope of displacement over the window (cm/s).
pub fn fit_interface_velocity(series: &[InterfaceRecord], window: (f64, f64)) -> Result<f64> {
    Ok(linear_fit(&window_points(series, window, |r| r.displacement)?)?.0)
}

/// Growth rate: slope of amplitude over the window (cm/s).
pub fn fit_growth_rate(series: &[InterfaceRecord], window: (f64, f64)) -> Result<f64> {
    Ok(linear_fit(&window_points(series, window, |r| r.amplitude)?)?.0)
}

/// First abrupt change of the growth rate after `baseline`.
///
/// Slides a `width`-long window over the records after the baseline window
/// and returns the midpoint of the first window whose amplitude slope
/// differs from the baseline slope by more than `factor` times its
/// magnitude, or `None` if no window does.
pub fn growth_rate_jump(
    series: &[InterfaceRecord],
    baseline: (f64, f64),
    width: f64,
    factor: f64,
) -> Result<Option<f64>> {
    if !(width > 0.0) || !(factor > 0.0) {
        return Err(SolverError::InvalidArgument(format!(
            "window width {width} and factor {factor} must be positive"
        )));
    }
    let rate = fit_growth_rate(series, baseline)?;
    let threshold = factor * rate.abs();
    let last = series.last().map_or(f64::NEG_INFINITY, |r| r.t);
    for r in series.iter().filter(|r| r.t >= baseline.1) {
        let window = (r.t, r.t + width);
        if window.1 > last * (1.0 + 1e-9) {
            break;
        }
        if (fit_growth_rate(series, window)? - rate).abs() > threshold {
            return Ok(Some(r.t + 0.5 * width));
        }
    }
    Ok(None)
}

/// Impulsive-model growth rate `k a0+ A+ du`.
pub fn richtmyer_velocity(k: f64, a0_plus: f64, atwood_plus: f64, delta_u: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(SolverError::InvalidArgument(format!(
            "wavenumber {k} must be positive"
        )));
    }
    Ok(k * a0_plus * atwood_plus * delta_u)
}

/// Shock-compressed amplitude `a0 (1 - du / W_s)`.
pub fn post_shock_amplitude(a0: f64, delta_u: f64, shock_speed: f64) -> Result<f64> {
    if !(shock_speed > delta_u) || !(delta_u >= 0.0) {
        return Err(SolverError::InvalidArgument(format!(
            "need shock speed {shock_speed} > interface velocity {delta_u} >= 0"
        )));
    }
    Ok(a0 * (1.0 - delta_u / shock_speed))
}

/// Amplitude of the first record at or after `t_after`: the measured
/// post-shock amplitude.
pub fn measured_post_shock_amplitude(series: &[InterfaceRecord], t_after: f64) -> Result<f64> {
    series
        .iter()
        .find(|r| r.t >= t_after * (1.0 - 1e-9))
        .map(|r| r.amplitude)
        .ok_or_else(|| SolverError::Diagnostic(format!("no record after t={t_after}")))
}

/// Smallest amplitude in `window`: the shock-compressed amplitude before
/// the interface starts to grow.
pub fn minimum_amplitude(series: &[InterfaceRecord], window: (f64, f64)) -> Result<f64> {
    window_points(series, window, |r| r.amplitude)?
        .into_iter()
        .map(|p| p.1)
        .reduce(f64::min)
        .ok_or_else(|| {
            SolverError::Diagnostic(format!("no record in [{}, {}]", window.0, window.1))
        })
}

/// Linear impulsive-model prediction for the air/SF6 tube, with the
/// interface velocity and post-shock densities taken from the exact
/// Riemann problem of shocked air against SF6 at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulsiveModel {
    /// Incident shock speed (cm/s).
    pub shock_speed: f64,
    /// Time the incident shock reaches the mean interface (s).
    pub t_shock: f64,
    pub delta_u: f64,
    pub atwood_plus: f64,
    pub a0_plus: f64,
    pub v_rm: f64,
}

impl ImpulsiveModel {
    pub fn new(params: &RmiParams) -> Result<Self> {
        params.validate()?;
        let eos = IdealGasEos::new(params.gamma)?;
        let air = params.light_state();
        let shocked = post_shock_state(&air, params.mach, &eos)?;
        let ws = shock_speed(&air, params.mach, &eos);
        let sf6 = PrimitiveState::new(params.rho_heavy, 0.0, 0.0, params.p_interface, 1.0);
        let rp = RiemannSolution::solve(shocked, sf6, &eos)?;
        let (rho_l, rho_r) = rp.star_densities();
        let delta_u = rp.u_star;
        let atwood_plus = atwood(rho_l.min(rho_r), rho_l.max(rho_r));
        let a0_plus = post_shock_amplitude(params.a0, delta_u, ws)?;
        Ok(Self {
            shock_speed: ws,
            t_shock: (params.y_interface - params.y_shock) / ws,
            delta_u,
            atwood_plus,
            a0_plus,
            v_rm: richtmyer_velocity(params.wavenumber(), a0_plus, atwood_plus, delta_u)?,
        })
    }

    /// Predicted amplitude at `t`; the pre-shock amplitude is not modelled.
    pub fn amplitude(&self, t: f64) -> f64 {
        self.a0_plus + self.v_rm * (t - self.t_shock).max(0.0)
    }
}

/// Post-shock Atwood number from the mean densities of the rows `offset`
/// below the spike tip and above the bubble tip (or the reverse when the
/// heavy fluid lies below).
pub fn post_shock_atwood(field: &Field2D, tips: &InterfaceTips, offset: f64) -> Result<f64> {
    let (lo, hi) = if tips.y_spike <= tips.y_bubble {
        (tips.y_spike - offset, tips.y_bubble + offset)
    } else {
        (tips.y_bubble - offset, tips.y_spike + offset)
    };
    let row = |y: f64| -> Result<f64> {
        let j = ((y - field.origin.1) / field.dy - 0.5).round();
        if j < 0.0 || j >= field.ny() as f64 {
            return Err(SolverError::Diagnostic(format!(
                "sample height {y} outside the grid"
            )));
        }
        let j = j as usize;
        Ok((0..field.nx()).map(|i| field.get(i, j).rho).sum::<f64>() / field.nx() as f64)
    };
    let (a, b) = (row(lo)?, row(hi)?);
    Ok(atwood(a.min(b), a.max(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{init_rmi, RmiParams};
    use crate::state::ConservedState;

    fn tips(b: f64, s: f64) -> InterfaceTips {
        InterfaceTips {
            y_bubble: b,
            y_spike: s,
        }
    }

    fn field_with_profile(nx: usize, ny: usize, dy: f64, m: impl Fn(f64, f64) -> f64) -> Field2D {
        let mut f = Field2D::new(nx, ny, 0.1, dy, (0.0, 0.0), ConservedState::default()).unwrap();
        for j in 0..ny {
            for i in 0..nx {
                let (x, y) = f.cell_center(i, j);
                let mf = m(x, y);
                *f.get_mut(i, j) = ConservedState::new(1.0 + mf, 0.0, 0.0, 1.0, (1.0 + mf) * mf);
            }
        }
        f
    }

    #[test]
    fn amplitude_and_displacement() {
        let t0 = tips(1.0, 0.4);
        let (a, d) = amplitude_displacement(&t0, &t0);
        assert!((a - 0.3).abs() < 1e-15);
        assert_eq!(d, 0.0);
        let (a, d) = amplitude_displacement(&tips(1.5, 0.9), &t0);
        assert!((a - 0.3).abs() < 1e-15 && (d - 0.5).abs() < 1e-15);
        let swapped = amplitude_displacement(&tips(0.4, 1.0), &t0).0;
        assert_eq!(swapped, amplitude_displacement(&t0, &t0).0);
    }

    #[test]
    fn atwood_values() {
        assert!((atwood(1.351e-3, 5.494e-3) - 0.6053).abs() < 5e-5);
        assert_eq!(atwood(2.0, 2.0), 0.0);
        assert!((atwood(1e-300, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn velocity_fit_examples() {
        let line: Vec<_> = (0..20)
            .map(|k| {
                let t = k as f64 * 5e-5;
                InterfaceRecord {
                    t,
                    y_bubble: 0.0,
                    y_spike: 0.0,
                    amplitude: 0.0,
                    displacement: 3580.0 * t + 0.1,
                }
            })
            .collect();
        let v = fit_interface_velocity(&line, (0.0, 1e-3)).unwrap();
        assert!((v - 3580.0).abs() < 1e-6);
        let flat: Vec<_> = line
            .iter()
            .map(|r| InterfaceRecord {
                displacement: 0.25,
                ..*r
            })
            .collect();
        assert_eq!(fit_interface_velocity(&flat, (0.0, 1e-3)).unwrap(), 0.0);
        assert!(fit_interface_velocity(&line[..2], (0.0, 1e-3)).is_err());
        assert!(fit_interface_velocity(&line, (1e-3, 1e-3)).is_err());
    }

    #[test]
    fn noisy_velocity_fit() {
        use rand_free_noise as noise;
        let truth = 3580.0;
        let series: Vec<_> = (0..50)
            .map(|k| {
                let t = 2e-4 + k as f64 * 8e-4 / 49.0;
                let d = truth * t + 1e-3 * noise::gaussian(k);
                InterfaceRecord {
                    t,
                    y_bubble: 0.0,
                    y_spike: 0.0,
                    amplitude: 0.0,
                    displacement: d,
                }
            })
            .collect();
        let v = fit_interface_velocity(&series, (2e-4, 1e-3)).unwrap();
        assert!((v - truth).abs() < 0.01 * truth, "{v}");
    }

    /// Deterministic standard-normal samples via Box-Muller on a hash.
    mod rand_free_noise {
        fn uniform(k: u64) -> f64 {
            let mut x = k
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(0x2545_F491_4F6C_DD1D);
            x ^= x >> 33;
            x = x.wrapping_mul(0xFF51_AFD7_ED55_8CCD);
            x ^= x >> 33;
            ((x >> 11) as f64 + 0.5) / (1u64 << 53) as f64
        }
        pub fn gaussian(k: usize) -> f64 {
            let (u1, u2) = (uniform(2 * k as u64), uniform(2 * k as u64 + 1));
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        }
    }

    #[test]
    fn richtmyer_velocity_examples() {
        let k = 2.0 * std::f64::consts::PI / 5.933;
        assert!((k - 1.0590).abs() < 1e-4);
        assert_eq!(richtmyer_velocity(k, 0.0, 0.6, 3600.0).unwrap(), 0.0);
        let v1 = richtmyer_velocity(k, 0.2, 0.6, 3600.0).unwrap();
        let v2 = richtmyer_velocity(k, 0.4, 0.6, 3600.0).unwrap();
        assert!((v2 - 2.0 * v1).abs() < 1e-12 * v2);
        assert!(richtmyer_velocity(0.0, 0.2, 0.6, 3600.0).is_err());
    }

    #[test]
    fn post_shock_amplitude_examples() {
        assert_eq!(post_shock_amplitude(0.2, 0.0, 100.0).unwrap(), 0.2);
        assert_eq!(post_shock_amplitude(0.2, 50.0, 100.0).unwrap(), 0.1);
        assert!(post_shock_amplitude(0.2, 100.0, 100.0).is_err());
    }

    #[test]
    fn flat_interface_tips() {
        let y_i = 2.03;
        let dy = 0.1;
        let f = field_with_profile(4, 40, dy, |_, y| if y < y_i { 0.0 } else { 1.0 });
        let t = locate_interface(&f).unwrap();
        assert!((t.y_bubble - y_i).abs() <= dy / 2.0 && (t.y_spike - y_i).abs() <= dy / 2.0);
        assert_eq!(t.y_bubble, t.y_spike);
    }

    #[test]
    fn perturbed_rmi_tips_match_initial_amplitude() {
        let p = RmiParams::for_mach(1.11).unwrap();
        let (_, f) = init_rmi(p, 64).unwrap();
        let t = locate_interface(&f).unwrap();
        let sep = t.y_bubble - t.y_spike;
        assert!((sep - 2.0 * p.a0).abs() <= f.dy, "separation {sep}");
        assert!(t.y_bubble > t.y_spike);
    }

    #[test]
    fn tips_translate_with_the_field() {
        let shape = |c: f64| {
            move |x: f64, y: f64| {
                let s = (y - 2.0 - c - 0.3 * (x * 2.0).cos()) / 0.4;
                0.5 * (1.0 + s.tanh())
            }
        };
        let c = 0.5; // five cells
        let a = locate_interface(&field_with_profile(16, 60, 0.1, shape(0.0))).unwrap();
        let b = locate_interface(&field_with_profile(16, 60, 0.1, shape(c))).unwrap();
        assert!((b.y_bubble - a.y_bubble - c).abs() < 1e-12);
        assert!((b.y_spike - a.y_spike - c).abs() < 1e-12);
    }

    #[test]
    fn tips_are_reflection_equivariant_in_x() {
        let shape = |x: f64, y: f64| {
            let s = (y - 2.0 - 0.3 * (x * 2.0).cos() - 0.1 * x) / 0.4;
            0.5 * (1.0 + s.tanh())
        };
        let f = field_with_profile(16, 60, 0.1, shape);
        let mut g = f.clone();
        for j in 0..f.ny() {
            for i in 0..f.nx() {
                *g.get_mut(i, j) = *f.get(f.nx() - 1 - i, j);
            }
        }
        assert_eq!(locate_interface(&f).unwrap(), locate_interface(&g).unwrap());
    }

    #[test]
    fn heavy_below_swaps_roles() {
        let f = field_with_profile(16, 60, 0.1, |x, y| {
            let s = (y - 2.0 - 0.3 * (x * 2.0).cos()) / 0.4;
            0.5 * (1.0 - s.tanh())
        });
        let t = locate_interface(&f).unwrap();
        assert!(t.y_bubble < t.y_spike);
    }

    #[test]
    fn missing_crossing_is_reported() {
        let f = field_with_profile(
            3,
            10,
            0.1,
            |x, y| if x > 0.2 && y > 0.5 { 1.0 } else { 0.0 },
        );
        let err = locate_interface(&f).unwrap_err();
        assert!(err.to_string().contains("column 0"), "{err}");
    }

    #[test]
    fn impulsive_model_for_both_experiments() {
        let cases = [
            (
                1.21, 36359.004, 6729.751, 0.604499, 0.149128, 642.481, 0.756268,
            ),
            (
                1.11, 33354.128, 3663.004, 0.605129, 0.203851, 478.523, 0.653681,
            ),
        ];
        for (mach, ws, du, at, a0p, v, a1) in cases {
            let m = ImpulsiveModel::new(&RmiParams::for_mach(mach).unwrap()).unwrap();
            let close = |x: f64, y: f64| (x - y).abs() <= 2e-6 * y.abs();
            assert!(close(m.shock_speed, ws), "{m:?}");
            assert!(close(m.delta_u, du) && close(m.atwood_plus, at), "{m:?}");
            assert!(close(m.a0_plus, a0p) && close(m.v_rm, v), "{m:?}");
            assert!(close(m.t_shock, 2.0 / ws));
            assert!(close(m.amplitude(1e-3), a1));
            assert_eq!(m.amplitude(0.0), m.a0_plus);
        }
    }

    fn kinked(kink: f64, before: f64, after: f64) -> Vec<InterfaceRecord> {
        (0..=700)
            .map(|k| {
                let t = k as f64 * 1e-5;
                let a = 0.2 + before * t.min(kink) + after * (t - kink).max(0.0);
                let a = a + 2e-3 * rand_free_noise::gaussian(k);
                InterfaceRecord {
                    t,
                    y_bubble: 0.0,
                    y_spike: 0.0,
                    amplitude: a,
                    displacement: 0.0,
                }
            })
            .collect()
    }

    #[test]
    fn growth_rate_jump_finds_the_kink() {
        for (after, lo, hi) in [(6000.0, 5.85e-3, 6.1e-3), (-3000.0, 5.85e-3, 6.1e-3)] {
            let t = growth_rate_jump(&kinked(6e-3, 450.0, after), (2e-3, 4e-3), 2e-4, 2.0)
                .unwrap()
                .unwrap();
            assert!(t > lo && t < hi, "{t}");
        }
        let smooth = kinked(6e-3, 450.0, 450.0);
        assert_eq!(
            growth_rate_jump(&smooth, (2e-3, 4e-3), 2e-4, 2.0).unwrap(),
            None
        );
        assert!(growth_rate_jump(&smooth, (2e-3, 4e-3), 0.0, 2.0).is_err());
    }

    #[test]
    fn measured_post_shock_amplitudes() {
        let series: Vec<_> = [0.18, 0.16, 0.15, 0.155, 0.17, 0.2]
            .iter()
            .enumerate()
            .map(|(k, &a)| InterfaceRecord {
                t: k as f64 * 1e-4,
                y_bubble: 0.0,
                y_spike: 0.0,
                amplitude: a,
                displacement: 0.0,
            })
            .collect();
        assert_eq!(minimum_amplitude(&series, (0.0, 3e-4)).unwrap(), 0.15);
        assert_eq!(minimum_amplitude(&series, (4e-4, 5e-4)).unwrap(), 0.17);
        assert!(minimum_amplitude(&series, (1e-3, 2e-3)).is_err());
        assert_eq!(measured_post_shock_amplitude(&series, 1e-4).unwrap(), 0.16);
        assert_eq!(
            measured_post_shock_amplitude(&series, 1.5e-4).unwrap(),
            0.15
        );
        assert!(measured_post_shock_amplitude(&series, 1e-3).is_err());
    }
}
