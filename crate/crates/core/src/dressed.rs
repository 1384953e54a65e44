//! Dressed basis of the driven two-level system, the radiative rate Γ(ω),
//! and the relaxation coefficients rotated into that basis.
//!
//! With detuning Δ and Rabi frequency Ω_R the dressed splitting is
//! ν = √(Δ² + Ω_R²)/2, the mixing amplitude g = Ω_R/(Δ + 2ν), and the
//! normalization C = 1/√(1 + g²). Emission then proceeds through three
//! channels at ω and ω ± 2ν, each weighted by the rank-1 coefficient matrix
//! κ = C² [[g, 1], [−g², −g]].

use std::f64::consts::PI;

use serde::Serialize;

use crate::envelope::Envelope;
use crate::error::Result;
use crate::params::{ValidatedParams, DEFAULT_GAMMA_OVER_OMEGA};
use crate::quad::{integrate_real, QuadConfig};

/// Dressed-state eigenquantities and the κ coefficient matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DressedBasis {
    /// Half Rabi splitting ν = √(Δ² + Ω_R²)/2.
    pub nu: f64,
    /// Mixing amplitude g = Ω_R/(Δ + 2ν).
    pub g: f64,
    /// Normalization C = 1/√(1 + g²).
    pub c_norm: f64,
    /// κ = C² [[g, 1], [−g², −g]]; rank 1 by construction.
    pub kappa: [[f64; 2]; 2],
    /// Set when Δ = Ω_R = 0, where g is 0/0; bare states are returned.
    pub degenerate: bool,
}

/// Build the dressed basis from detuning and Rabi frequency.
///
/// The degenerate corner Δ = Ω_R = 0 returns bare states (g = 0, C = 1) with
/// the flag set, so the no-drive limit flows through the pipeline.
pub fn dressed_basis(detuning: f64, rabi: f64) -> DressedBasis {
    let nu = 0.5 * (detuning * detuning + rabi * rabi).sqrt();
    let (g, degenerate) = if nu == 0.0 {
        (0.0, true)
    } else {
        (rabi / (detuning + 2.0 * nu), false)
    };
    let c2 = 1.0 / (1.0 + g * g);
    DressedBasis {
        nu,
        g,
        c_norm: c2.sqrt(),
        kappa: [[c2 * g, c2], [-c2 * g * g, -c2 * g]],
        degenerate,
    }
}

/// Radiative rates at the three emission channels and the basis-rotated
/// relaxation coefficients γ_ij.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelaxationRates {
    pub gamma_omega: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
}

/// Rotate the channel rates into the dressed basis:
///
/// γ₁₂ = C²[(2 − C²) Γ₊ + g²(1 + C²) Γ₋]
/// γ₂₁ = g² C⁴ (Γ₊ − Γ₋)
/// γ₂₂ = [g C²(2 − C²) + g³ C⁴] Γ(ω)
/// γ₁₁ = g C²(1 + 2C²) Γ(ω)
///
/// Note γ₂₁ vanishes when the sideband rates are equal; the commonly quoted
/// resonant value Γ/2 belongs to [`RelaxationRates::resonant_approximation`].
pub fn relaxation_params(
    basis: &DressedBasis,
    gamma_omega: f64,
    gamma_plus: f64,
    gamma_minus: f64,
) -> RelaxationRates {
    let g = basis.g;
    let c2 = basis.c_norm * basis.c_norm;
    let c4 = c2 * c2;
    RelaxationRates {
        gamma_omega,
        gamma_plus,
        gamma_minus,
        g12: c2 * ((2.0 - c2) * gamma_plus + g * g * (1.0 + c2) * gamma_minus),
        g21: g * g * c4 * (gamma_plus - gamma_minus),
        g22: (g * c2 * (2.0 - c2) + g * g * g * c4) * gamma_omega,
        g11: g * c2 * (1.0 + 2.0 * c2) * gamma_omega,
    }
}

impl RelaxationRates {
    /// The exact-resonance approximation with all channel rates set equal:
    /// γ₁₂ = 3Γ/2, γ₂₁ = Γ/2, γ₁₁ = γ₂₂ = Γ. This is the coefficient set the
    /// resonant equations of motion are written with; under literal equality
    /// of the channel rates [`relaxation_params`] gives γ₂₁ = 0 instead, so
    /// both conventions stay available.
    pub fn resonant_approximation(gamma: f64) -> Self {
        Self {
            gamma_omega: gamma,
            gamma_plus: gamma,
            gamma_minus: gamma,
            g11: gamma,
            g12: 1.5 * gamma,
            g21: 0.5 * gamma,
            g22: gamma,
        }
    }
}

/// Bare angular integral ∫₀^π sinθ cos²θ |F(θ, ω_k)|² dθ.
pub fn gamma_integral(omega_k: f64, env: &Envelope, length: f64) -> Result<f64> {
    let cfg = QuadConfig {
        rel_tol: 1e-11,
        ..QuadConfig::default()
    };
    // The integrand is built on the quadrature form factor so that arbitrary
    // envelopes work; the linear-phase case collapses to the closed form.
    match env {
        Envelope::LinearPhase { rate } => {
            let half = 0.5 * length;
            integrate_real(
                |theta| {
                    let f = crate::envelope::sinc(half * (rate - omega_k * theta.cos()));
                    theta.sin() * theta.cos().powi(2) * f * f
                },
                0.0,
                PI,
                &cfg,
            )
        }
        Envelope::Tabulated { .. } => integrate_real(
            |theta| {
                let f = crate::envelope::form_factor(theta, omega_k, env, length)
                    .map(|v| v.norm_sqr())
                    .unwrap_or(f64::NAN);
                theta.sin() * theta.cos().powi(2) * f
            },
            0.0,
            PI,
            &cfg,
        ),
    }
}

/// Spontaneous emission rate Γ(ω_k) = A(ω_k) ∫₀^π sinθ cos²θ |F|² dθ with
/// A(ω_k) = d² ω_k³ / π in normalized units.
pub fn gamma_of_omega(omega_k: f64, env: &Envelope, length: f64, dipole: f64) -> Result<f64> {
    if dipole == 0.0 {
        return Ok(0.0);
    }
    let a = dipole * dipole * omega_k.powi(3) / PI;
    Ok(a * gamma_integral(omega_k, env, length)?)
}

/// How the radiative strength is pinned: by the dipole moment, or by an
/// explicit Γ(ω) at the drive (an override or the crate default), from which
/// an effective strength is inferred so the sideband rates Γ(ω ± 2ν) still
/// shift through both the ω³ prefactor and the form factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RateModel {
    Dipole { dipole: f64 },
    Pinned { gamma_at_drive: f64 },
}

impl RateModel {
    /// Resolution order: explicit override, then dipole, then the default
    /// Γ/ω = 1e-3.
    pub fn from_params(p: &ValidatedParams) -> Self {
        if let Some(g) = p.gamma_override() {
            RateModel::Pinned { gamma_at_drive: g }
        } else if p.dipole() > 0.0 {
            RateModel::Dipole { dipole: p.dipole() }
        } else {
            RateModel::Pinned {
                gamma_at_drive: DEFAULT_GAMMA_OVER_OMEGA * p.omega(),
            }
        }
    }

    /// Γ at an arbitrary frequency for the given antenna geometry.
    pub fn gamma(&self, omega_k: f64, p: &ValidatedParams) -> Result<f64> {
        let env = p.envelope();
        let l = p.length();
        match *self {
            RateModel::Dipole { dipole } => gamma_of_omega(omega_k, &env, l, dipole),
            RateModel::Pinned { gamma_at_drive } => {
                if omega_k == p.omega() {
                    return Ok(gamma_at_drive);
                }
                let at_drive = p.omega().powi(3) * gamma_integral(p.omega(), &env, l)?;
                let at_k = omega_k.powi(3) * gamma_integral(omega_k, &env, l)?;
                Ok(gamma_at_drive * at_k / at_drive)
            }
        }
    }

    /// Γ(ω) at the drive frequency.
    pub fn gamma_at_drive(&self, p: &ValidatedParams) -> Result<f64> {
        self.gamma(p.omega(), p)
    }

    /// The three channel rates (Γ(ω), Γ(ω+2ν), Γ(ω−2ν)) rotated into
    /// relaxation coefficients.
    pub fn relaxation(&self, p: &ValidatedParams, basis: &DressedBasis) -> Result<RelaxationRates> {
        let g0 = self.gamma(p.omega(), p)?;
        let gp = self.gamma(p.omega() + 2.0 * basis.nu, p)?;
        let gm = self.gamma((p.omega() - 2.0 * basis.nu).max(0.0), p)?;
        Ok(relaxation_params(basis, g0, gp, gm))
    }
}
