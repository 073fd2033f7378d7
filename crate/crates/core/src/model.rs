//! Model parameters and the explicit travelling-wave profiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound accepted for the chemoattractant diffusivity `eps`.
pub const EPS_MAX: f64 = 0.5;
/// Above this `eps` the small-diffusion asymptotics are questionable.
pub const EPS_WARN: f64 = 0.1;

/// Nondimensional parameters `(beta, c, m, eps)`.
///
/// `beta` is the chemotactic strength, `c` the wave speed, `m` the
/// consumption exponent and `eps` the chemoattractant diffusivity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub c: f64,
    pub m: f64,
    pub eps: f64,
}

impl ModelParams {
    /// Builds and validates a parameter set.
    pub fn new(beta: f64, c: f64, m: f64, eps: f64) -> Result<Self> {
        Self { beta, c, m, eps }.validate()
    }

    pub fn validate(self) -> Result<Self> {
        let finite = [self.beta, self.c, self.m, self.eps]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams {
                field: "params",
                constraint: "all parameters must be finite",
            });
        }
        if self.c <= 0.0 {
            return Err(Error::InvalidParams {
                field: "c",
                constraint: "c must be positive",
            });
        }
        if !(0.0..=1.0).contains(&self.m) {
            return Err(Error::InvalidParams {
                field: "m",
                constraint: "m must lie in [0, 1]",
            });
        }
        if self.beta + self.m <= 1.0 {
            return Err(Error::InvalidParams {
                field: "beta",
                constraint: "beta+m must exceed 1",
            });
        }
        if !(0.0..=EPS_MAX).contains(&self.eps) {
            return Err(Error::InvalidParams {
                field: "eps",
                constraint: "eps must lie in [0, 0.5]",
            });
        }
        Ok(self)
    }

    /// Non-fatal remarks about the parameter regime.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.eps > EPS_WARN {
            out.push(format!(
                "eps = {} is outside the small-diffusion regime (eps <= {EPS_WARN})",
                self.eps
            ));
        }
        out
    }

    /// `beta + m - 1`, positive for valid parameters.
    pub fn b1(&self) -> f64 {
        self.beta + self.m - 1.0
    }

    pub fn profile_constants(&self) -> ProfileConstants {
        let b1 = self.b1();
        ProfileConstants {
            gamma: 1.0 / b1,
            sigma: b1 / (self.c * self.c),
            z_star: 0.0,
            u_r: 1.0,
        }
    }

    /// Same parameters with a different wave speed.
    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Self { eps, ..self }
    }
}

/// Converts dimensional parameters: `beta = beta_dim / delta`,
/// `eps = eps_dim / delta`.
pub fn nondimensionalize(
    alpha: f64,
    beta_dim: f64,
    delta: f64,
    eps_dim: f64,
    m: f64,
    c: f64,
) -> Result<ModelParams> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParams {
            field: "alpha",
            constraint: "alpha must be positive",
        });
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParams {
            field: "delta",
            constraint: "delta must be positive",
        });
    }
    ModelParams::new(beta_dim / delta, c, m, eps_dim / delta)
}

/// Constants of the closed-form profile
/// `u = (u_r^{-1/gamma} + sigma e^{-c(z+z*)})^{-gamma}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileConstants {
    pub gamma: f64,
    pub sigma: f64,
    pub z_star: f64,
    pub u_r: f64,
}

/// Profile values at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveState {
    pub u: f64,
    pub w: f64,
    pub uz_over_u: f64,
    /// `w / u^(1-m)`.
    pub w_over_u_pow: f64,
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Leading-order profile at `z`, with `u_r = 1` and `z* = 0`.
///
/// Everything is evaluated through `s = ln(sigma) - c z`, so the far tails
/// underflow gracefully instead of overflowing.
pub fn wave_profile(params: &ModelParams, z: f64) -> WaveState {
    let k = params.profile_constants();
    let c = params.c;
    let s = k.sigma.ln() - c * z;
    let ln_u = -k.gamma * softplus(s);
    let u = ln_u.exp();
    let w = (-c * z + params.beta * ln_u).exp();
    let frac = logistic(s);
    WaveState {
        u,
        w,
        uz_over_u: k.gamma * c * frac,
        w_over_u_pow: frac / k.sigma,
    }
}

/// Limits of the profile as `z -> -inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveLimits {
    /// `lim u_z / u`.
    pub uz_over_u: f64,
    /// `lim w / u^(1-m)`.
    pub w_over_u_pow: f64,
    /// Left plateau of `w`, present only for `m = 1`.
    pub w_left: Option<f64>,
}

pub fn wave_limits(params: &ModelParams) -> WaveLimits {
    let ModelParams { beta, c, m, eps } = *params;
    let b1 = params.b1();
    let ratio = c / b1;
    WaveLimits {
        uz_over_u: ratio,
        w_over_u_pow: ratio * (c * eps / b1 + c),
        w_left: (m == 1.0).then(|| c * c / beta + eps * c * c / (beta * beta)),
    }
}

/// Samples `(z, u, w)` uniformly on `[z0, z1]`.
pub fn sample_profile(params: &ModelParams, z0: f64, z1: f64, n: usize) -> Vec<(f64, WaveState)> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![(z0, wave_profile(params, z0))];
    }
    (0..n)
        .map(|i| {
            let z = z0 + (z1 - z0) * i as f64 / (n - 1) as f64;
            (z, wave_profile(params, z))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(beta: f64, c: f64, m: f64, eps: f64) -> ModelParams {
        ModelParams::new(beta, c, m, eps).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ModelParams::new(2.0, 2.0, 0.0, 0.0).is_ok());
        assert!(ModelParams::new(0.95, 1.0, 0.1, 0.0).is_ok());
        assert_eq!(
            ModelParams::new(0.5, 1.0, 0.0, 0.0),
            Err(Error::InvalidParams {
                field: "beta",
                constraint: "beta+m must exceed 1"
            })
        );
        assert!(ModelParams::new(2.0, 0.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(2.0, 1.0, 1.5, 0.0).is_err());
        assert!(ModelParams::new(2.0, 1.0, 0.0, 0.6).is_err());
        assert!(p(2.0, 1.0, 0.0, 0.2).warnings().len() == 1);
        assert!(p(2.0, 1.0, 0.0, 0.02).warnings().is_empty());
    }

    #[test]
    fn nondimensional_scaling() {
        assert_eq!(
            nondimensionalize(1.0, 4.0, 2.0, 0.0, 0.0, 2.0).unwrap(),
            p(2.0, 2.0, 0.0, 0.0)
        );
        assert_eq!(
            nondimensionalize(3.0, 3.0, 1.0, 0.02, 1.0, 1.0).unwrap(),
            p(3.0, 1.0, 1.0, 0.02)
        );
        assert!(nondimensionalize(1.0, 1.0, 2.0, 0.0, 0.0, 1.0).is_err());
        assert!(nondimensionalize(1.0, 1.0, 0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn profile_at_origin() {
        let s = wave_profile(&p(2.0, 2.0, 0.0, 0.0), 0.0);
        assert!((s.u - 0.8).abs() < 1e-14);
        assert!((s.w - 0.64).abs() < 1e-14);
    }

    #[test]
    fn limits_match_tails() {
        for &(beta, c, m) in &[(2.0, 2.0, 0.0), (1.3, 1.0, 0.4), (2.0, 2.0, 1.0), (3.0, 0.7, 0.9)] {
            let prm = p(beta, c, m, 0.0);
            let lim = wave_limits(&prm);
            let left = wave_profile(&prm, -50.0 / c);
            let right = wave_profile(&prm, 50.0 / c);
            assert!((left.uz_over_u - lim.uz_over_u).abs() < 1e-8);
            assert!((left.w_over_u_pow - lim.w_over_u_pow).abs() < 1e-8);
            assert!((right.u - 1.0).abs() < 1e-8 && right.w < 1e-8);
            if let Some(wl) = lim.w_left {
                assert!((left.w - wl).abs() < 1e-8);
            }
        }
        let lim = wave_limits(&p(2.0, 2.0, 0.0, 0.0));
        assert_eq!((lim.uz_over_u, lim.w_over_u_pow, lim.w_left), (2.0, 4.0, None));
        assert_eq!(wave_limits(&p(2.0, 2.0, 1.0, 0.0)).w_left, Some(2.0));
        assert!((wave_limits(&p(2.0, 1.0, 1.0, 0.02)).w_left.unwrap() - 0.505).abs() < 1e-15);
    }

    #[test]
    fn far_tails_are_finite() {
        let prm = p(2.0, 2.0, 0.5, 0.0);
        for z in [-1e4, -600.0, 600.0, 1e4] {
            let s = wave_profile(&prm, z);
            assert!(s.u.is_finite() && s.w.is_finite() && s.uz_over_u.is_finite());
        }
    }

    fn sign_changes(xs: &[f64]) -> usize {
        let d: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).filter(|d| d.abs() > 1e-300).collect();
        d.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
    }

    #[test]
    fn morphology() {
        for &(m, pulse) in &[(0.0, true), (0.5, true), (1.0, false)] {
            let prm = p(2.0, 2.0, m, 0.0);
            let s = sample_profile(&prm, -50.0, 50.0, 1000);
            let u: Vec<f64> = s.iter().map(|x| x.1.u).collect();
            assert!(u.windows(2).all(|w| w[1] > w[0] || 1.0 - w[0] < 1e-14));
            assert!(u.iter().all(|&x| x > 0.0 && x <= 1.0));
            let sample = sample_profile(&prm, -10.0, 10.0, 1000);
            let w: Vec<f64> = sample.iter().map(|x| x.1.w).collect();
            if pulse {
                assert_eq!(sign_changes(&w), 1);
            } else {
                assert!(w.windows(2).all(|x| x[1] < x[0]));
            }
        }
    }

    #[test]
    fn ode_residuals() {
        let prm = p(1.7, 1.3, 0.3, 0.0);
        let h = 1e-5;
        for i in 0..41 {
            let z = -5.0 + 0.25 * i as f64;
            let s = wave_profile(&prm, z);
            let up = wave_profile(&prm, z + h);
            let um = wave_profile(&prm, z - h);
            let uz = (up.u - um.u) / (2.0 * h);
            let wz = (up.w - um.w) / (2.0 * h);
            let r1 = prm.c * uz - s.w * s.u.powf(prm.m);
            let r2 = wz - (-prm.c * s.w + prm.beta * s.w * s.uz_over_u);
            let scale = s.w.abs().max(1e-3);
            assert!(r1.abs() / scale < 1e-8, "r1 {r1} at {z}");
            assert!(r2.abs() / scale < 1e-8, "r2 {r2} at {z}");
            assert!((s.uz_over_u - uz / s.u).abs() < 1e-8);
        }
    }
}
