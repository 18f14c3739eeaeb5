//! Von Mises sampling parameterized by circular standard deviation.
//!
//! The circular standard deviation of a von Mises law with concentration `κ`
//! is `sqrt(-2 ln R(κ))` with `R = I1(κ) / I0(κ)` the mean resultant length.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QlError, Result};

const LOG_KAPPA_MIN: f64 = -30.0;
const LOG_KAPPA_MAX: f64 = 80.0;
/// Above this concentration the wrapped normal `N(μ, 1/κ)` replaces
/// Best–Fisher rejection sampling.
const WRAPPED_NORMAL_KAPPA: f64 = 1e6;

/// `1 - I1(κ)/I0(κ)`, computed without cancellation for large `κ`.
pub fn one_minus_resultant(kappa: f64) -> f64 {
    if kappa < 50.0 {
        let half = kappa / 2.0;
        let mut i0 = 0.0;
        let mut i1 = 0.0;
        let mut t0 = 1.0; // (κ/2)^{2k} / (k!)^2
        let mut t1 = half; // (κ/2)^{2k+1} / (k! (k+1)!)
        for k in 0..200 {
            i0 += t0;
            i1 += t1;
            let kf = (k + 1) as f64;
            t0 *= half * half / (kf * kf);
            t1 *= half * half / (kf * (kf + 1.0));
            if t0 < 1e-18 * i0 && t1 < 1e-18 * i1 {
                break;
            }
        }
        (i0 - i1) / i0
    } else {
        // Hankel asymptotic series, e^{-κ} sqrt(2πκ) I_ν(κ) = Σ (-1)^k a_k(ν) / κ^k
        let mut p0 = 1.0;
        let mut diff = 0.0;
        let mut t0 = 1.0;
        let mut t1 = 1.0;
        for k in 1..30 {
            let odd = (2 * k - 1) as f64;
            let step = -1.0 / (8.0 * k as f64 * kappa);
            t0 *= step * (-(odd * odd));
            t1 *= step * (4.0 - odd * odd);
            p0 += t0;
            diff += t0 - t1;
            if (t0 - t1).abs() <= 1e-17 * diff.abs() && t0.abs() <= 1e-17 {
                break;
            }
        }
        diff / p0
    }
}

/// Mean resultant length `I1(κ)/I0(κ)`.
pub fn mean_resultant_length(kappa: f64) -> f64 {
    1.0 - one_minus_resultant(kappa)
}

/// Circular standard deviation of a von Mises law with concentration `κ`.
pub fn circular_std_of_kappa(kappa: f64) -> f64 {
    (-2.0 * (-one_minus_resultant(kappa)).ln_1p()).sqrt()
}

/// Concentration whose circular standard deviation equals `circ_std`.
///
/// Targets wider than the law at `κ = e^-30` (about 7.8 rad) return `κ = 0`,
/// the uniform law.
pub fn kappa_from_circular_std(circ_std: f64) -> Result<f64> {
    if !(circ_std.is_finite() && circ_std > 0.0) {
        return Err(QlError::Numeric(format!(
            "circular std must be positive and finite, got {circ_std}"
        )));
    }
    let f = |lk: f64| circular_std_of_kappa(lk.exp()) - circ_std;
    let (mut lo, mut hi) = (LOG_KAPPA_MIN, LOG_KAPPA_MAX);
    if f(lo) <= 0.0 {
        return Ok(0.0);
    }
    if f(hi) > 0.0 {
        return Err(QlError::Numeric(format!(
            "no concentration reaches circular std {circ_std}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            return Ok((0.5 * (lo + hi)).exp());
        }
    }
    Err(QlError::Numeric(format!(
        "concentration solve did not converge for circular std {circ_std}"
    )))
}

/// Von Mises law on the circle.
#[derive(Debug, Clone, Copy)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
    s: f64,
}

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0 && mu.is_finite()) {
            return Err(QlError::Parameter(format!(
                "von Mises needs finite mu and kappa >= 0, got mu = {mu}, kappa = {kappa}"
            )));
        }
        let s = if kappa < 1e-5 {
            1.0 / kappa + kappa
        } else {
            let r = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
            let rho = (r - (2.0 * r).sqrt()) / (2.0 * kappa);
            (1.0 + rho * rho) / (2.0 * rho)
        };
        Ok(Self { mu, kappa, s })
    }

    pub fn from_circular_std(mu: f64, circ_std: f64) -> Result<Self> {
        Self::new(mu, kappa_from_circular_std(circ_std)?)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

impl Distribution<f64> for VonMises {
    /// Returns `mu + x` with `x` in `(-π, π]`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.kappa < 1e-8 {
            return self.mu + PI * (2.0 * rng.gen::<f64>() - 1.0);
        }
        if self.kappa > WRAPPED_NORMAL_KAPPA {
            let z: f64 = rng.sample(StandardNormal);
            return self.mu + wrap(z / self.kappa.sqrt());
        }
        // Best & Fisher (1979)
        let w = loop {
            let u: f64 = rng.gen();
            let z = (PI * u).cos();
            let w = (1.0 + self.s * z) / (self.s + z);
            let y = self.kappa * (self.s - w);
            let v: f64 = rng.gen();
            if y * (2.0 - y) - v >= 0.0 || (y / v).ln() + 1.0 - y >= 0.0 {
                break w;
            }
        };
        let angle = w.clamp(-1.0, 1.0).acos();
        let angle = if rng.gen::<f64>() < 0.5 {
            -angle
        } else {
            angle
        };
        self.mu + angle
    }
}

/// Wrap to `(-π, π]`.
pub fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Sample circular standard deviation `sqrt(-2 ln R̄)` of a set of angles.
pub fn sample_circular_std(angles: &[f64]) -> f64 {
    let n = angles.len() as f64;
    let (s, c) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    let r = (s * s + c * c).sqrt() / n;
    (-2.0 * r.ln()).sqrt()
}
