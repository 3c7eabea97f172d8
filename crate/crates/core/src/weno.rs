//! Scalar fifth-order WENO reconstruction (Jiang-Shu weights) and a
//! minmod-limited artificial-compression correction for contact fields.
//!
//! A stencil holds `f[i-2..=i+2]` and every routine returns the left-biased
//! value at `i+1/2`. Right-biased values come from [`Stencil5::mirrored_at`].

/// Ideal weights of the three third-order candidates.
pub const LINEAR_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Five consecutive point values `f[i-2..=i+2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil5(pub [f64; 5]);

impl Stencil5 {
    pub fn new(v: [f64; 5]) -> Self {
        Self(v)
    }

    /// Right-biased stencil for the interface `i+1/2` of `values`, reversed
    /// so that the left-biased formulas apply: `f[i+3], f[i+2], .., f[i-1]`.
    pub fn mirrored_at(values: &[f64], i: usize) -> Self {
        Self([
            values[i + 3],
            values[i + 2],
            values[i + 1],
            values[i],
            values[i - 1],
        ])
    }

    /// Left-biased stencil `f[i-2..=i+2]` of `values`.
    pub fn left_at(values: &[f64], i: usize) -> Self {
        Self([
            values[i - 2],
            values[i - 1],
            values[i],
            values[i + 1],
            values[i + 2],
        ])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoParams {
    /// Regularizer of the nonlinear weights.
    pub epsilon: f64,
    pub acm_enabled: bool,
    pub acm_strength: f64,
}

impl Default for WenoParams {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            acm_enabled: true,
            acm_strength: 1.0 / 3.0,
        }
    }
}

impl WenoParams {
    pub fn without_acm() -> Self {
        Self {
            acm_enabled: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(crate::SolverError::InvalidArgument(format!(
                "WENO epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.acm_strength >= 0.0) {
            return Err(crate::SolverError::InvalidArgument(format!(
                "ACM strength must be non-negative, got {}",
                self.acm_strength
            )));
        }
        Ok(())
    }
}

/// Jiang-Shu smoothness indicators of the three substencils.
#[inline]
pub fn smoothness_indicators(s: &Stencil5) -> [f64; 3] {
    let [a, b, c, d, e] = s.0;
    const K: f64 = 13.0 / 12.0;
    let b0 = K * (a - 2.0 * b + c).powi(2) + 0.25 * (a - 4.0 * b + 3.0 * c).powi(2);
    let b1 = K * (b - 2.0 * c + d).powi(2) + 0.25 * (b - d).powi(2);
    let b2 = K * (c - 2.0 * d + e).powi(2) + 0.25 * (3.0 * c - 4.0 * d + e).powi(2);
    [b0, b1, b2]
}

/// Third-order candidate values at `i+1/2`.
#[inline]
pub fn candidate_values(s: &Stencil5) -> [f64; 3] {
    let [a, b, c, d, e] = s.0;
    [
        (2.0 * a - 7.0 * b + 11.0 * c) / 6.0,
        (-b + 5.0 * c + 2.0 * d) / 6.0,
        (2.0 * c + 5.0 * d - e) / 6.0,
    ]
}

/// Normalized nonlinear weights.
#[inline]
pub fn nonlinear_weights(s: &Stencil5, epsilon: f64) -> [f64; 3] {
    weights_from(&smoothness_indicators(s), epsilon)
}

#[inline]
fn weights_from(beta: &[f64; 3], epsilon: f64) -> [f64; 3] {
    let mut alpha = [0.0; 3];
    for k in 0..3 {
        let r = epsilon + beta[k];
        alpha[k] = LINEAR_WEIGHTS[k] / (r * r);
    }
    let inv = 1.0 / (alpha[0] + alpha[1] + alpha[2]);
    [alpha[0] * inv, alpha[1] * inv, alpha[2] * inv]
}

/// Fifth-order WENO value at `i+1/2` without compression.
#[inline]
pub fn weno5_reconstruct(s: &Stencil5, params: &WenoParams) -> f64 {
    weno5_from(s, &smoothness_indicators(s), params.epsilon)
}

#[inline]
fn weno5_from(s: &Stencil5, beta: &[f64; 3], epsilon: f64) -> f64 {
    let w = weights_from(beta, epsilon);
    let q = candidate_values(s);
    w[0] * q[0] + w[1] * q[1] + w[2] * q[2]
}

/// [`weno5_reconstruct`] followed, when `compress` is set and compression is
/// enabled, by [`artificial_compression`], sharing the smoothness indicators.
#[inline]
pub fn reconstruct(s: &Stencil5, params: &WenoParams, compress: bool) -> f64 {
    let beta = smoothness_indicators(s);
    let base = weno5_from(s, &beta, params.epsilon);
    if compress && params.acm_enabled && params.acm_strength > 0.0 {
        compress_from(s, &beta, base, params)
    } else {
        base
    }
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a > 0.0 {
        a.min(b)
    } else {
        a.max(b)
    }
}

/// Discontinuity sensor: the squared spread of the smoothness indicators
/// relative to the smallest one. Zero when they agree, `O(h^2)` on smooth
/// data, large across a jump.
#[inline]
fn jump_sensor(beta: &[f64; 3], epsilon: f64) -> f64 {
    let hi = beta[0].max(beta[1]).max(beta[2]);
    let lo = beta[0].min(beta[1]).min(beta[2]);
    let q = (hi - lo) / (lo + epsilon);
    q * q
}

/// Steepen the reconstructed value `base` at `i+1/2`.
///
/// The compressive target is the upwind cell's edge value `f[i] + s/2` under
/// the superbee slope `s = maxmod(minmod(2 D-, D+), minmod(D-, 2 D+))` with
/// `D- = f[i]-f[i-1]`, `D+ = f[i+1]-f[i]`. The output moves from `base` toward that target by
/// `min(1, strength * sensor)`, so the correction vanishes wherever the
/// smoothness indicators agree (in particular on linear data). The target
/// lies between `f[i]` and `f[i+1]`, and the output between `base` and the
/// target.
#[inline]
pub fn artificial_compression(s: &Stencil5, base: f64, params: &WenoParams) -> f64 {
    if !params.acm_enabled || params.acm_strength == 0.0 {
        return base;
    }
    compress_from(s, &smoothness_indicators(s), base, params)
}

#[inline]
fn compress_from(s: &Stencil5, beta: &[f64; 3], base: f64, params: &WenoParams) -> f64 {
    let sensor = jump_sensor(beta, params.epsilon);
    if sensor == 0.0 {
        return base;
    }
    let [_, b, c, d, _] = s.0;
    let (dm, dp) = (c - b, d - c);
    let s1 = minmod(2.0 * dm, dp);
    let s2 = minmod(dm, 2.0 * dp);
    let slope = if s1.abs() > s2.abs() { s1 } else { s2 };
    let target = (c + 0.5 * slope).clamp(c.min(d), c.max(d));
    let theta = (params.acm_strength * sensor).min(1.0);
    (base + theta * (target - base)).clamp(base.min(target), base.max(target))
}
