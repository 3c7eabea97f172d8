//! Exact solution of the 1D Riemann problem for an ideal gas, with the
//! tangential velocity and mass fraction carried passively across the
//! contact. Used as a verification oracle.

use crate::error::{Result, SolverError};
use crate::state::{sound_speed, IdealGasEos, PrimitiveState};

/// Star-region values and the states needed for sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
    pub p_star: f64,
    pub u_star: f64,
    gamma: f64,
}

struct Side {
    rho: f64,
    p: f64,
    a: f64,
}

impl Side {
    /// Pressure function f_K(p) and its derivative.
    fn pressure_function(&self, p: f64, g: f64) -> (f64, f64) {
        if p > self.p {
            let a_k = 2.0 / ((g + 1.0) * self.rho);
            let b_k = (g - 1.0) / (g + 1.0) * self.p;
            let q = (a_k / (p + b_k)).sqrt();
            ((p - self.p) * q, q * (1.0 - 0.5 * (p - self.p) / (p + b_k)))
        } else {
            let ratio = p / self.p;
            let e = (g - 1.0) / (2.0 * g);
            let f = 2.0 * self.a / (g - 1.0) * (ratio.powf(e) - 1.0);
            let df = ratio.powf(-(g + 1.0) / (2.0 * g)) / (self.rho * self.a);
            (f, df)
        }
    }
}

impl RiemannSolution {
    pub fn solve(left: PrimitiveState, right: PrimitiveState, eos: &IdealGasEos) -> Result<Self> {
        left.validate()?;
        right.validate()?;
        let g = eos.gamma();
        let l = Side {
            rho: left.rho,
            p: left.p,
            a: sound_speed(&left, eos),
        };
        let r = Side {
            rho: right.rho,
            p: right.p,
            a: sound_speed(&right, eos),
        };
        let du = right.u - left.u;
        let positivity = 2.0 / (g - 1.0) * (l.a + r.a) - du;
        if positivity <= 0.0 {
            return Err(SolverError::Vacuum(positivity));
        }

        // Two-rarefaction guess, exact when both waves are rarefactions.
        let e = (g - 1.0) / (2.0 * g);
        let mut p = ((l.a + r.a - 0.5 * (g - 1.0) * du) / (l.a / l.p.powf(e) + r.a / r.p.powf(e)))
            .powf(1.0 / e);
        let scale = l.a + r.a + du.abs();
        let mut converged = false;
        for _ in 0..200 {
            let (fl, dfl) = l.pressure_function(p, g);
            let (fr, dfr) = r.pressure_function(p, g);
            let residual = fl + fr + du;
            if residual.abs() <= 1e-13 * scale {
                converged = true;
                break;
            }
            let mut next = p - residual / (dfl + dfr);
            if next <= 0.0 {
                next = 0.5 * p;
            }
            p = next;
        }
        if !converged {
            return Err(SolverError::InvalidArgument(
                "Riemann pressure iteration did not converge".into(),
            ));
        }
        let (fl, _) = l.pressure_function(p, g);
        let (fr, _) = r.pressure_function(p, g);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        Ok(Self {
            left,
            right,
            p_star: p,
            u_star,
            gamma: g,
        })
    }

    /// Density on the left/right side of the contact.
    pub fn star_densities(&self) -> (f64, f64) {
        (
            self.star_density(&self.left),
            self.star_density(&self.right),
        )
    }

    fn star_density(&self, k: &PrimitiveState) -> f64 {
        let g = self.gamma;
        let ratio = self.p_star / k.p;
        if ratio > 1.0 {
            let c = (g - 1.0) / (g + 1.0);
            k.rho * (ratio + c) / (c * ratio + 1.0)
        } else {
            k.rho * ratio.powf(1.0 / g)
        }
    }

    fn sound(&self, k: &PrimitiveState) -> f64 {
        (self.gamma * k.p / k.rho).sqrt()
    }

    /// Speed of the left wave if it is a shock.
    pub fn left_shock_speed(&self) -> Option<f64> {
        (self.p_star > self.left.p).then(|| {
            let g = self.gamma;
            self.left.u
                - self.sound(&self.left)
                    * ((g + 1.0) / (2.0 * g) * self.p_star / self.left.p + (g - 1.0) / (2.0 * g))
                        .sqrt()
        })
    }

    /// Speed of the right wave if it is a shock.
    pub fn right_shock_speed(&self) -> Option<f64> {
        (self.p_star > self.right.p).then(|| {
            let g = self.gamma;
            self.right.u
                + self.sound(&self.right)
                    * ((g + 1.0) / (2.0 * g) * self.p_star / self.right.p + (g - 1.0) / (2.0 * g))
                        .sqrt()
        })
    }

    /// Solution at the similarity coordinate `xi = x / t`.
    pub fn sample(&self, xi: f64) -> PrimitiveState {
        let g = self.gamma;
        let on_left = xi <= self.u_star;
        let (k, sign) = if on_left {
            (self.left, 1.0)
        } else {
            (self.right, -1.0)
        };
        // sign = +1 for the left wave; mirror formulas for the right.
        let a_k = self.sound(&k);
        let star =
            |rho: f64| PrimitiveState::new(rho, self.u_star, k.v, self.p_star, k.mass_fraction);
        if self.p_star > k.p {
            let s = if on_left {
                self.left_shock_speed().unwrap()
            } else {
                self.right_shock_speed().unwrap()
            };
            if sign * (xi - s) < 0.0 {
                k
            } else {
                star(self.star_density(&k))
            }
        } else {
            let head = k.u - sign * a_k;
            let a_star = a_k * (self.p_star / k.p).powf((g - 1.0) / (2.0 * g));
            let tail = self.u_star - sign * a_star;
            if sign * (xi - head) < 0.0 {
                k
            } else if sign * (xi - tail) > 0.0 {
                star(self.star_density(&k))
            } else {
                let c = 2.0 / (g + 1.0);
                let base = c + sign * (g - 1.0) / ((g + 1.0) * a_k) * (k.u - xi);
                let rho = k.rho * base.powf(2.0 / (g - 1.0));
                let u = c * (sign * a_k + 0.5 * (g - 1.0) * k.u + xi);
                let p = k.p * base.powf(2.0 * g / (g - 1.0));
                PrimitiveState::new(rho, u, k.v, p, k.mass_fraction)
            }
        }
    }
}

/// Sample the exact solution of the Riemann problem `(left, right)` at `xi`.
pub fn exact_riemann(
    left: PrimitiveState,
    right: PrimitiveState,
    eos: &IdealGasEos,
    xi: f64,
) -> Result<PrimitiveState> {
    Ok(RiemannSolution::solve(left, right, eos)?.sample(xi))
}
