//! Reserve-process models: claim laws, Laplace exponents and the right
//! inverse of the Laplace exponent.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, GaussLaguerre};

/// Claim-size distribution of the jump part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClaimDistribution {
    Exponential { rate: f64 },
    Lomax { scale: f64, shape: f64 },
    Gamma { shape: f64, scale: f64 },
}

impl ClaimDistribution {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ClaimDistribution::Exponential { rate } => rate > 0.0,
            // shape > 1 keeps the mean finite.
            ClaimDistribution::Lomax { scale, shape } => scale > 0.0 && shape > 1.0,
            ClaimDistribution::Gamma { shape, scale } => shape > 0.0 && scale > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid claim distribution {self:?}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ClaimDistribution::Exponential { rate } => 1.0 / rate,
            ClaimDistribution::Lomax { scale, shape } => scale / (shape - 1.0),
            ClaimDistribution::Gamma { shape, scale } => shape * scale,
        }
    }

    pub fn density(&self, z: f64) -> f64 {
        if z < 0.0 {
            return 0.0;
        }
        match *self {
            ClaimDistribution::Exponential { rate } => rate * (-rate * z).exp(),
            ClaimDistribution::Lomax { scale, shape } => {
                shape / scale * (1.0 + z / scale).powf(-shape - 1.0)
            }
            ClaimDistribution::Gamma { shape, scale } => {
                let lg = crate::numerics::ln_gamma(shape);
                ((shape - 1.0) * z.ln() - z / scale - shape * scale.ln() - lg).exp()
            }
        }
    }

    /// Laplace transform `m(theta) = E[e^{-theta Z}]` for real `theta >= 0`.
    ///
    /// Lomax has no elementary closed form; it is integrated adaptively on
    /// the substitution `u = 1/(1+z)` which maps the half-line to `(0,1]`.
    pub fn laplace(&self, theta: f64) -> f64 {
        match *self {
            ClaimDistribution::Exponential { rate } => rate / (rate + theta),
            ClaimDistribution::Gamma { shape, scale } => (1.0 + scale * theta).powf(-shape),
            ClaimDistribution::Lomax { scale, shape } => {
                if theta == 0.0 {
                    return 1.0;
                }
                let t = scale * theta;
                let a = shape;
                adaptive_simpson(
                    &|u: f64| {
                        if u <= 0.0 {
                            0.0
                        } else {
                            a * u.powf(a - 1.0) * (-t * (1.0 - u) / u).exp()
                        }
                    },
                    0.0,
                    1.0,
                    1e-12,
                )
            }
        }
    }

    /// `m'(theta) = -E[Z e^{-theta Z}]` for real `theta >= 0`.
    pub fn laplace_derivative(&self, theta: f64) -> f64 {
        match *self {
            ClaimDistribution::Exponential { rate } => -rate / (rate + theta).powi(2),
            ClaimDistribution::Gamma { shape, scale } => {
                -shape * scale * (1.0 + scale * theta).powf(-shape - 1.0)
            }
            ClaimDistribution::Lomax { scale, shape } => {
                if theta == 0.0 {
                    return -self.mean();
                }
                let t = scale * theta;
                let a = shape;
                let unit = adaptive_simpson(
                    &|u: f64| {
                        if u <= 0.0 {
                            0.0
                        } else {
                            a * u.powf(a - 2.0) * (1.0 - u) * (-t * (1.0 - u) / u).exp()
                        }
                    },
                    0.0,
                    1.0,
                    1e-12,
                );
                -scale * unit
            }
        }
    }

    /// Laplace transform at complex `s` with `Re s > 0`, for transform
    /// inversion. The Lomax case integrates along the rotated ray `w = s z`
    /// with a Gauss-Laguerre rule; the branch of `(1 + w/s)^{-shape-1}`
    /// stays principal since `Re s > 0`.
    pub fn laplace_complex(&self, s: Complex64, gl: &GaussLaguerre) -> Complex64 {
        match *self {
            ClaimDistribution::Exponential { rate } => rate / (rate + s),
            ClaimDistribution::Gamma { shape, scale } => {
                (Complex64::new(1.0, 0.0) + scale * s).powf(-shape)
            }
            ClaimDistribution::Lomax { scale, shape } => {
                let t = scale * s;
                let mut sum = Complex64::new(0.0, 0.0);
                for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
                    if w == 0.0 {
                        break;
                    }
                    sum += w * (Complex64::new(1.0, 0.0) + x / t).powf(-shape - 1.0);
                }
                shape / t * sum
            }
        }
    }
}

/// Path-variation classification of the reserve process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VariationKind {
    Bounded,
    Unbounded,
}

/// Whether the reserve process itself is spectrally negative, or spectrally
/// positive with all scale quantities computed for its negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    #[default]
    SpectrallyNegative,
    SpectrallyPositiveDual,
}

/// Levy model of the reserve process. The jump-model fields always
/// parametrize the spectrally negative process used for scale-function
/// computations; for the dual orientation that process is the negative of
/// the reserve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProcessModel {
    CramerLundberg {
        premium: f64,
        intensity: f64,
        claims: ClaimDistribution,
        #[serde(default)]
        orientation: Orientation,
    },
    CramerLundbergDiffusion {
        premium: f64,
        intensity: f64,
        claims: ClaimDistribution,
        volatility: f64,
        #[serde(default)]
        orientation: Orientation,
    },
    /// Spectrally negative alpha-stable process normalized so that
    /// `psi(theta) = theta^alpha`.
    Stable { alpha: f64 },
}

impl ProcessModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProcessModel::CramerLundberg {
                premium,
                intensity,
                claims,
                ..
            } => {
                // c > 0 excludes monotone paths in the bounded-variation case.
                if premium <= 0.0 {
                    return Err(Error::Config("premium rate must be > 0".into()));
                }
                if intensity < 0.0 {
                    return Err(Error::Config("jump intensity must be >= 0".into()));
                }
                claims.validate()
            }
            ProcessModel::CramerLundbergDiffusion {
                premium,
                intensity,
                claims,
                volatility,
                ..
            } => {
                if volatility <= 0.0 {
                    return Err(Error::Config(
                        "diffusion model requires volatility > 0".into(),
                    ));
                }
                if premium < 0.0 || intensity < 0.0 {
                    return Err(Error::Config("premium and intensity must be >= 0".into()));
                }
                claims.validate()
            }
            ProcessModel::Stable { alpha } => {
                if alpha > 1.0 && alpha < 2.0 {
                    Ok(())
                } else {
                    Err(Error::Config("stable index must lie in (1, 2)".into()))
                }
            }
        }
    }

    pub fn orientation(&self) -> Orientation {
        match *self {
            ProcessModel::CramerLundberg { orientation, .. }
            | ProcessModel::CramerLundbergDiffusion { orientation, .. } => orientation,
            ProcessModel::Stable { .. } => Orientation::SpectrallyNegative,
        }
    }

    pub fn is_dual(&self) -> bool {
        self.orientation() == Orientation::SpectrallyPositiveDual
    }

    pub fn premium(&self) -> f64 {
        match *self {
            ProcessModel::CramerLundberg { premium, .. }
            | ProcessModel::CramerLundbergDiffusion { premium, .. } => premium,
            ProcessModel::Stable { .. } => 0.0,
        }
    }

    pub fn intensity(&self) -> f64 {
        match *self {
            ProcessModel::CramerLundberg { intensity, .. }
            | ProcessModel::CramerLundbergDiffusion { intensity, .. } => intensity,
            ProcessModel::Stable { .. } => 0.0,
        }
    }

    pub fn volatility(&self) -> f64 {
        match *self {
            ProcessModel::CramerLundbergDiffusion { volatility, .. } => volatility,
            _ => 0.0,
        }
    }

    pub fn claims(&self) -> Option<ClaimDistribution> {
        match *self {
            ProcessModel::CramerLundberg { claims, .. }
            | ProcessModel::CramerLundbergDiffusion { claims, .. } => Some(claims),
            ProcessModel::Stable { .. } => None,
        }
    }

    pub fn variation_kind(&self) -> VariationKind {
        match *self {
            ProcessModel::CramerLundberg { .. } => VariationKind::Bounded,
            ProcessModel::CramerLundbergDiffusion { .. } | ProcessModel::Stable { .. } => {
                VariationKind::Unbounded
            }
        }
    }

    /// Whether the Levy measure has a completely monotone density, the
    /// assumption behind barrier/band optimality in the spectrally negative
    /// solvers.
    pub fn has_completely_monotone_density(&self) -> bool {
        match *self {
            ProcessModel::Stable { .. } => true,
            ProcessModel::CramerLundberg { claims, .. }
            | ProcessModel::CramerLundbergDiffusion { claims, .. } => match claims {
                ClaimDistribution::Exponential { .. } | ClaimDistribution::Lomax { .. } => true,
                ClaimDistribution::Gamma { shape, .. } => shape <= 1.0,
            },
        }
    }

    /// Laplace exponent `psi(theta)` of the spectrally negative process.
    pub fn laplace_exponent(&self, theta: f64) -> Result<f64> {
        if theta < 0.0 {
            return Err(Error::Domain(format!(
                "laplace exponent requires theta >= 0, got {theta}"
            )));
        }
        let v = match *self {
            ProcessModel::Stable { alpha } => theta.powf(alpha),
            ProcessModel::CramerLundberg {
                premium,
                intensity,
                claims,
                ..
            } => premium * theta - intensity * (1.0 - claims.laplace(theta)),
            ProcessModel::CramerLundbergDiffusion {
                premium,
                intensity,
                claims,
                volatility,
                ..
            } => {
                premium * theta + 0.5 * volatility * volatility * theta * theta
                    - intensity * (1.0 - claims.laplace(theta))
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!(
                "laplace exponent non-finite at theta = {theta}"
            )))
        }
    }

    /// Analytic derivative `psi'(theta)`; at `theta = 0` this is the right
    /// derivative `psi'(0+) = c - lambda E[Z]` (jump kinds).
    pub fn laplace_exponent_derivative(&self, theta: f64) -> Result<f64> {
        if theta < 0.0 {
            return Err(Error::Domain(format!(
                "laplace exponent derivative requires theta >= 0, got {theta}"
            )));
        }
        let v = match *self {
            ProcessModel::Stable { alpha } => alpha * theta.powf(alpha - 1.0),
            ProcessModel::CramerLundberg {
                premium,
                intensity,
                claims,
                ..
            } => premium + intensity * claims.laplace_derivative(theta),
            ProcessModel::CramerLundbergDiffusion {
                premium,
                intensity,
                claims,
                volatility,
                ..
            } => {
                premium
                    + volatility * volatility * theta
                    + intensity * claims.laplace_derivative(theta)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!(
                "laplace exponent derivative non-finite at theta = {theta}"
            )))
        }
    }

    /// Laplace exponent continued to complex `s` with `Re s > 0`.
    pub fn laplace_exponent_complex(&self, s: Complex64, gl: &GaussLaguerre) -> Complex64 {
        match *self {
            ProcessModel::Stable { alpha } => s.powf(alpha),
            ProcessModel::CramerLundberg {
                premium,
                intensity,
                claims,
                ..
            } => premium * s - intensity * (1.0 - claims.laplace_complex(s, gl)),
            ProcessModel::CramerLundbergDiffusion {
                premium,
                intensity,
                claims,
                volatility,
                ..
            } => {
                premium * s + 0.5 * volatility * volatility * s * s
                    - intensity * (1.0 - claims.laplace_complex(s, gl))
            }
        }
    }

    /// Right inverse `Phi(q) = sup{theta >= 0 : psi(theta) = q}` for `q > 0`.
    ///
    /// `psi` is convex with `psi(0) = 0`, so for `q > 0` there is a unique
    /// root on the increasing branch; bracketing plus bisection is enough,
    /// with a few Newton polish steps for the last digits.
    pub fn right_inverse_phi(&self, q: f64) -> Result<f64> {
        if q <= 0.0 {
            return Err(Error::Domain(format!(
                "right inverse requires q > 0, got {q}"
            )));
        }
        if let ProcessModel::Stable { alpha } = *self {
            return Ok(q.powf(1.0 / alpha));
        }
        let mut hi = 1.0;
        let mut guard = 0;
        while self.laplace_exponent(hi)? < q {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::Numerical("Phi(q) bracket expansion failed".into()));
            }
        }
        let mut lo = 0.0;
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if self.laplace_exponent(mid)? < q {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * (1.0 + hi) {
                break;
            }
        }
        let mut root: f64 = 0.5 * (lo + hi);
        for _ in 0..4 {
            let d = self.laplace_exponent_derivative(root)?;
            if d <= 0.0 {
                break;
            }
            let step = (self.laplace_exponent(root)? - q) / d;
            let next = root - step;
            if next > lo && next < hi {
                root = next;
            } else {
                break;
            }
        }
        Ok(root)
    }
}
