//! Quantum envelope f(x) and its far-field form factor
//! F(θ, ω_k) = (1/l) ∫_{-l/2}^{l/2} f(x) e^{-i (ω_k/c) x cosθ} dx.
//!
//! The linear-phase model f(x) = e^{i k φ x} has the closed form
//! sinc(Ψ') with Ψ' = (kl/2)(φ − cosθ); general envelopes go through
//! adaptive quadrature. Only |F|² enters downstream, so the sign of Ψ' is
//! immaterial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_complex, QuadConfig};

/// Normalized sinc with the cancellation-safe series switch near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Spatial envelope of the antenna excitation on [-l/2, l/2].
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope {
    /// f(x) = exp(i · rate · x) with |f| = 1; `rate` is the phase shift per
    /// unit length k·φ (k = 1 in normalized units, so rate = φ).
    LinearPhase { rate: f64 },
    /// Sampled envelope, interpolated with a local cubic between samples.
    /// An extension point: exercised by tests, not by the shipped presets.
    Tabulated { samples: Vec<(f64, Complex64)> },
}

impl Envelope {
    pub fn linear_phase(rate: f64) -> Self {
        Envelope::LinearPhase { rate }
    }

    /// Build a tabulated envelope; samples must be strictly increasing in x.
    pub fn tabulated(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidEnvelope(
                "tabulated envelope needs at least 2 samples".into(),
            ));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidEnvelope(
                "tabulated sample positions must be strictly increasing".into(),
            ));
        }
        Ok(Envelope::Tabulated { samples })
    }

    /// Evaluate f(x).
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Envelope::LinearPhase { rate } => Complex64::new(0.0, rate * x).exp(),
            Envelope::Tabulated { samples } => cubic_interp(samples, x),
        }
    }

    fn check_covers(&self, l: f64) -> Result<()> {
        if let Envelope::Tabulated { samples } = self {
            if samples.len() < 9 {
                return Err(Error::InvalidEnvelope(
                    "form factor needs at least 9 tabulated samples".into(),
                ));
            }
            let lo = samples.first().unwrap().0;
            let hi = samples.last().unwrap().0;
            let eps = 1e-12 * l.max(1.0);
            if lo > -l / 2.0 + eps || hi < l / 2.0 - eps {
                return Err(Error::InvalidEnvelope(format!(
                    "samples [{lo}, {hi}] do not cover [-{0}, {0}]",
                    l / 2.0
                )));
            }
        }
        Ok(())
    }
}

/// Local cubic (Hermite with finite-difference tangents); linear at the ends.
fn cubic_interp(samples: &[(f64, Complex64)], x: f64) -> Complex64 {
    let n = samples.len();
    if x <= samples[0].0 {
        return samples[0].1;
    }
    if x >= samples[n - 1].0 {
        return samples[n - 1].1;
    }
    let i = match samples.partition_point(|&(xs, _)| xs <= x) {
        0 => 0,
        p => p - 1,
    };
    let (x0, y0) = samples[i];
    let (x1, y1) = samples[i + 1];
    let h = x1 - x0;
    let t = (x - x0) / h;

    let slope = (y1 - y0) / h;
    let m0 = if i == 0 {
        slope
    } else {
        let (xm, ym) = samples[i - 1];
        (y1 - ym) / (x1 - xm)
    };
    let m1 = if i + 2 >= n {
        slope
    } else {
        let (xp, yp) = samples[i + 2];
        (yp - y0) / (xp - x0)
    };

    let t2 = t * t;
    let t3 = t2 * t;
    y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m0 * (h * (t3 - 2.0 * t2 + t))
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + m1 * (h * (t3 - t2))
}

/// Form factor by adaptive quadrature, for any envelope.
pub fn form_factor(theta: f64, omega_k: f64, env: &Envelope, l: f64) -> Result<Complex64> {
    env.check_covers(l)?;
    if l == 0.0 {
        return Ok(env.eval(0.0));
    }
    let cos_t = theta.cos();
    let cfg = QuadConfig::default();
    let integral = integrate_complex(
        |x| env.eval(x) * Complex64::new(0.0, -omega_k * x * cos_t).exp(),
        -l / 2.0,
        l / 2.0,
        &cfg,
    )?;
    Ok(integral / l)
}

/// Closed form for the linear-phase envelope at the drive frequency:
/// sinc(Ψ') with Ψ' = (kl/2)(φ − cosθ).
pub fn form_factor_linear_phase(theta: f64, kl_half: f64, phi: f64) -> f64 {
    sinc(kl_half * (phi - theta.cos()))
}
