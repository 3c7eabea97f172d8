//! State algebra for the 2D Euler equations carrying a heavy-fluid mass
//! fraction: conserved/primitive conversion, the ideal-gas closure, physical
//! fluxes and wave-speed bounds.
//!
//! All quantities are CGS (g, cm, s, dyn/cm²).

use crate::error::{Result, SolverError};
use crate::grid::Field2D;

/// Number of conserved components: rho, rho*u, rho*v, E, rho*M.
pub const NVARS: usize = 5;

/// Sweep axis. Selects the x-flux or the y-flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    X,
    Y,
}

impl Direction {
    /// Index of the momentum component normal to a line along this axis.
    #[inline]
    pub fn normal_momentum(self) -> usize {
        match self {
            Direction::X => 1,
            Direction::Y => 2,
        }
    }

    #[inline]
    pub fn tangential_momentum(self) -> usize {
        match self {
            Direction::X => 2,
            Direction::Y => 1,
        }
    }

    pub fn other(self) -> Direction {
        match self {
            Direction::X => Direction::Y,
            Direction::Y => Direction::X,
        }
    }
}

/// Ideal-gas equation of state with a single ratio of specific heats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGasEos {
    gamma: f64,
}

impl IdealGasEos {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(SolverError::InvalidArgument(format!(
                "gamma must exceed 1, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Pressure from conserved variables, unchecked.
    #[inline]
    pub fn pressure(&self, u: &ConservedState) -> f64 {
        (self.gamma - 1.0) * (u.energy - 0.5 * (u.mx * u.mx + u.my * u.my) / u.rho)
    }
}

/// Conserved per-cell vector (rho, rho*u, rho*v, E, rho*M).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub rho: f64,
    pub mx: f64,
    pub my: f64,
    pub energy: f64,
    pub rho_m: f64,
}

/// Primitive view (rho, u, v, p, M).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub mass_fraction: f64,
}

impl ConservedState {
    pub const fn new(rho: f64, mx: f64, my: f64, energy: f64, rho_m: f64) -> Self {
        Self {
            rho,
            mx,
            my,
            energy,
            rho_m,
        }
    }

    #[inline]
    pub fn to_array(self) -> [f64; NVARS] {
        [self.rho, self.mx, self.my, self.energy, self.rho_m]
    }

    #[inline]
    pub fn from_array(a: [f64; NVARS]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    /// Momentum component normal to `dir`.
    #[inline]
    pub fn momentum(&self, dir: Direction) -> f64 {
        match dir {
            Direction::X => self.mx,
            Direction::Y => self.my,
        }
    }
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64, mass_fraction: f64) -> Self {
        Self {
            rho,
            u,
            v,
            p,
            mass_fraction,
        }
    }

    #[inline]
    pub fn velocity(&self, dir: Direction) -> f64 {
        match dir {
            Direction::X => self.u,
            Direction::Y => self.v,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !(self.p > 0.0) || !self.u.is_finite() || !self.v.is_finite() {
            return Err(SolverError::invalid("primitive state", self.rho, self.p));
        }
        if !(0.0..=1.0).contains(&self.mass_fraction) {
            return Err(SolverError::InvalidArgument(format!(
                "mass fraction {} outside [0, 1]",
                self.mass_fraction
            )));
        }
        Ok(())
    }
}

/// Primitive variables of `u`; fails on non-positive density or pressure.
pub fn primitives_from_conserved(u: &ConservedState, eos: &IdealGasEos) -> Result<PrimitiveState> {
    // Negated comparisons so NaN is rejected too.
    if !(u.rho > 0.0) {
        return Err(SolverError::invalid("cell", u.rho, f64::NAN));
    }
    let vx = u.mx / u.rho;
    let vy = u.my / u.rho;
    let p = (eos.gamma - 1.0) * (u.energy - 0.5 * u.rho * (vx * vx + vy * vy));
    if !(p > 0.0) || !p.is_finite() {
        return Err(SolverError::invalid("cell", u.rho, p));
    }
    Ok(PrimitiveState::new(u.rho, vx, vy, p, u.rho_m / u.rho))
}

pub fn conserved_from_primitives(w: &PrimitiveState, eos: &IdealGasEos) -> ConservedState {
    let kinetic = 0.5 * w.rho * (w.u * w.u + w.v * w.v);
    ConservedState::new(
        w.rho,
        w.rho * w.u,
        w.rho * w.v,
        w.p / (eos.gamma - 1.0) + kinetic,
        w.rho * w.mass_fraction,
    )
}

#[inline]
pub fn sound_speed(w: &PrimitiveState, eos: &IdealGasEos) -> f64 {
    (eos.gamma * w.p / w.rho).sqrt()
}

/// Physical flux of `u` along `dir`, returned in conserved-component order.
#[inline]
pub fn physical_flux(u: &ConservedState, dir: Direction, eos: &IdealGasEos) -> [f64; NVARS] {
    let p = eos.pressure(u);
    let vn = u.momentum(dir) / u.rho;
    let mut f = [
        u.rho * vn,
        u.mx * vn,
        u.my * vn,
        (u.energy + p) * vn,
        u.rho_m * vn,
    ];
    f[dir.normal_momentum()] += p;
    f
}

/// |u_dir| + a for a single state.
pub fn wave_speed(u: &ConservedState, dir: Direction, eos: &IdealGasEos) -> Result<f64> {
    let w = primitives_from_conserved(u, eos)?;
    Ok(w.velocity(dir).abs() + sound_speed(&w, eos))
}

/// Maximum of |u_dir| + a over the interior cells of `field`.
pub fn max_wave_speed(field: &Field2D, dir: Direction, eos: &IdealGasEos) -> Result<f64> {
    let mut alpha = 0.0_f64;
    for j in 0..field.ny() {
        for i in 0..field.nx() {
            let s = wave_speed(field.get(i, j), dir, eos)
                .map_err(|e| e.at(format_args!("cell ({i}, {j})")))?;
            alpha = alpha.max(s);
        }
    }
    if !(alpha > 0.0) {
        return Err(SolverError::invalid("zero wave speed", f64::NAN, f64::NAN));
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eos14() -> IdealGasEos {
        IdealGasEos::new(1.4).unwrap()
    }

    #[test]
    fn rest_state_primitives() {
        let w = primitives_from_conserved(&ConservedState::new(1.0, 0.0, 0.0, 2.5, 0.0), &eos14())
            .unwrap();
        assert_eq!((w.rho, w.u, w.v, w.mass_fraction), (1.0, 0.0, 0.0, 0.0));
        assert!((w.p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sod_right_state_primitives() {
        let w =
            primitives_from_conserved(&ConservedState::new(0.125, 0.0, 0.0, 0.25, 0.125), &eos14())
                .unwrap();
        assert_eq!(w.rho, 0.125);
        assert!((w.p - 0.1).abs() < 1e-15);
        assert_eq!(w.mass_fraction, 1.0);
    }

    #[test]
    fn moving_state_primitives() {
        let w = primitives_from_conserved(&ConservedState::new(1.0, 1.0, 2.0, 5.0, 0.5), &eos14())
            .unwrap();
        assert_eq!((w.u, w.v, w.mass_fraction), (1.0, 2.0, 0.5));
        assert!((w.p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_pressure_is_rejected() {
        let err =
            primitives_from_conserved(&ConservedState::new(1.0, 3.0, 0.0, 2.0, 0.0), &eos14())
                .unwrap_err();
        assert!(matches!(err, SolverError::InvalidState { rho, .. } if rho == 1.0));
        assert!(
            primitives_from_conserved(&ConservedState::new(0.0, 0.0, 0.0, 1.0, 0.0), &eos14())
                .is_err()
        );
    }

    #[test]
    fn gamma_must_exceed_one() {
        assert!(IdealGasEos::new(1.0).is_err());
        assert!(IdealGasEos::new(f64::NAN).is_err());
    }

    #[test]
    fn conserved_examples() {
        let eos = eos14();
        let u = conserved_from_primitives(&PrimitiveState::new(1.0, 0.0, 0.0, 1.0, 0.0), &eos);
        assert_eq!((u.rho, u.mx, u.my, u.rho_m), (1.0, 0.0, 0.0, 0.0));
        assert!((u.energy - 2.5).abs() < 1e-15);

        let u = conserved_from_primitives(
            &PrimitiveState::new(3.857143, 2.629369, 0.0, 10.33333, 0.0),
            &eos,
        );
        let expected = 10.33333 / 0.4 + 0.5 * 3.857143 * 2.629369 * 2.629369;
        assert!((u.energy - expected).abs() < 1e-12 * expected);

        let u = conserved_from_primitives(&PrimitiveState::new(2.3, -0.4, 1.7, 0.9, 1.0), &eos);
        assert_eq!(u.rho_m, u.rho);
    }

    #[test]
    fn sound_speed_examples() {
        let a = sound_speed(&PrimitiveState::new(1.0, 0.0, 0.0, 1.0, 0.0), &eos14());
        assert!((a - 1.4f64.sqrt()).abs() < 1e-15);

        let air = IdealGasEos::new(1.276).unwrap();
        let a = sound_speed(&PrimitiveState::new(1.351e-3, 0.0, 0.0, 9.56e5, 0.0), &air);
        assert!((a - 3.005e4).abs() < 5.0, "a = {a}");

        let k = 4.0;
        let a1 = sound_speed(&PrimitiveState::new(0.7, 0.0, 0.0, 0.3, 0.0), &air);
        let a2 = sound_speed(&PrimitiveState::new(0.7, 0.0, 0.0, 0.3 * k, 0.0), &air);
        assert!((a2 - k.sqrt() * a1).abs() < 1e-14 * a2);
    }

    #[test]
    fn flux_examples() {
        let eos = eos14();
        let close = |a: [f64; 5], b: [f64; 5]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        let f = physical_flux(
            &ConservedState::new(1.0, 0.0, 0.0, 2.5, 0.0),
            Direction::X,
            &eos,
        );
        assert!(close(f, [0.0, 1.0, 0.0, 0.0, 0.0]), "{f:?}");

        let f = physical_flux(
            &ConservedState::new(1.0, 1.0, 0.0, 3.0, 1.0),
            Direction::X,
            &eos,
        );
        assert!(close(f, [1.0, 2.0, 0.0, 4.0, 1.0]), "{f:?}");
    }

    #[test]
    fn y_flux_mirrors_x_flux() {
        let eos = eos14();
        let u = ConservedState::new(1.3, 0.4, -0.9, 4.0, 0.2);
        let swapped = ConservedState::new(1.3, -0.9, 0.4, 4.0, 0.2);
        let fx = physical_flux(&u, Direction::X, &eos);
        let gy = physical_flux(&swapped, Direction::Y, &eos);
        assert_eq!(fx, [gy[0], gy[2], gy[1], gy[3], gy[4]]);
    }

    fn valid_primitive() -> impl Strategy<Value = PrimitiveState> {
        (
            1e-3..1e3f64,
            -1e2..1e2f64,
            -1e2..1e2f64,
            1e-2..1e4f64,
            0.0..=1.0f64,
        )
            .prop_map(|(rho, u, v, p, m)| PrimitiveState::new(rho, u, v, p, m))
    }

    proptest! {
        #[test]
        fn primitive_round_trip(w in valid_primitive(), gamma in 1.05..3.0f64) {
            let eos = IdealGasEos::new(gamma).unwrap();
            let u = conserved_from_primitives(&w, &eos);
            // Keep the internal energy resolvable against the kinetic part.
            prop_assume!(w.p / (gamma - 1.0) > 1e-6 * u.energy);
            let back = primitives_from_conserved(&u, &eos).unwrap();
            let rel = |a: f64, b: f64, scale: f64| (a - b).abs() / scale.max(1e-300);
            let speed = (w.u * w.u + w.v * w.v).sqrt().max(1e-12);
            prop_assert!(rel(back.rho, w.rho, w.rho) <= 1e-14);
            prop_assert!(rel(back.u, w.u, speed) <= 1e-14);
            prop_assert!(rel(back.v, w.v, speed) <= 1e-14);
            prop_assert!(rel(back.mass_fraction, w.mass_fraction, 1.0) <= 1e-14);
            // Pressure is recovered as a difference E - KE; the bound scales with E.
            prop_assert!(rel(back.p, w.p, u.energy * (gamma - 1.0)) <= 1e-14);
        }

        #[test]
        fn rest_flux_has_no_transport(rho in 1e-3..1e3f64, p in 1e-2..1e4f64, m in 0.0..=1.0f64) {
            let eos = eos14();
            let u = conserved_from_primitives(&PrimitiveState::new(rho, 0.0, 0.0, p, m), &eos);
            for dir in [Direction::X, Direction::Y] {
                let f = physical_flux(&u, dir, &eos);
                prop_assert_eq!(f[0], 0.0);
                prop_assert_eq!(f[3], 0.0);
                prop_assert_eq!(f[4], 0.0);
            }
        }

        #[test]
        fn mass_flux_under_velocity_shift(w in valid_primitive(), shift in -50.0..50.0f64) {
            let eos = eos14();
            let mut moved = w;
            moved.u += shift;
            let f0 = physical_flux(&conserved_from_primitives(&w, &eos), Direction::X, &eos);
            let f1 = physical_flux(&conserved_from_primitives(&moved, &eos), Direction::X, &eos);
            // rho*(u + s) = rho*u + rho*s
            let expected = f0[0] + w.rho * shift;
            prop_assert!((f1[0] - expected).abs() <= 1e-12 * (f1[0].abs() + w.rho * shift.abs() + f0[0].abs()));
        }
    }
}
