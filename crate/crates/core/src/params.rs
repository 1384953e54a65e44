//! Physical parameter model, dimensionless normalization and validation.
//!
//! Internal units: the drive frequency ω, the speed of light c, ħ and ε₀ are
//! all 1. Every downstream quantity then depends only on the dimensionless
//! ratios `Ω_R/ω`, `kl/2`, `φ` and `Γ/ω`, which removes four free constants
//! from every result. An optional SI block converts laboratory inputs into
//! this normalization.

use serde::{Deserialize, Serialize};

use crate::envelope::Envelope;
use crate::error::{Error, Result};

/// Fallback radiative rate `Γ/ω` used when neither a dipole moment, a
/// radiative prefactor nor an explicit rate is configured.
pub const DEFAULT_GAMMA_OVER_OMEGA: f64 = 1e-3;

/// Raw antenna configuration, prior to validation.
///
/// Frequencies are in units of the drive frequency (`omega = 1` by default),
/// `kl_half` is the electrical half-length `kl/2` and `phi` the phase shift
/// per unit length of the envelope. The radiative strength may be given as a
/// dipole moment, as the prefactor `A = d² ω³ / (π ε₀ ħ c³)` directly, or by
/// pinning `Γ(ω)` outright with `gamma_override`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntennaParams {
    pub omega0: f64,
    pub omega: f64,
    pub rabi: f64,
    pub dipole: f64,
    pub prefactor_a: Option<f64>,
    pub kl_half: f64,
    pub phi: f64,
    pub gamma_override: Option<f64>,
}

impl Default for AntennaParams {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            omega: 1.0,
            rabi: 0.2,
            dipole: 0.0,
            prefactor_a: None,
            kl_half: 2.0 * std::f64::consts::PI,
            phi: 0.8,
            gamma_override: None,
        }
    }
}

/// Validated, immutable parameters with derived fields populated.
///
/// Read-only after construction; shared freely across threads.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidatedParams {
    omega0: f64,
    omega: f64,
    rabi: f64,
    detuning: f64,
    dipole: f64,
    kl_half: f64,
    phi: f64,
    gamma_override: Option<f64>,
    warnings: Vec<String>,
}

impl ValidatedParams {
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn rabi(&self) -> f64 {
        self.rabi
    }
    /// Detuning Δ = ω₀ − ω, recomputed at validation.
    pub fn detuning(&self) -> f64 {
        self.detuning
    }
    pub fn dipole(&self) -> f64 {
        self.dipole
    }
    pub fn kl_half(&self) -> f64 {
        self.kl_half
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn gamma_override(&self) -> Option<f64> {
        self.gamma_override
    }
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Drive wavenumber k = ω/c (c = 1).
    pub fn wavenumber(&self) -> f64 {
        self.omega
    }

    /// Antenna length l = 2 (kl/2) / k.
    pub fn length(&self) -> f64 {
        2.0 * self.kl_half / self.wavenumber()
    }

    pub fn rabi_over_omega(&self) -> f64 {
        self.rabi / self.omega
    }

    /// The linear-phase envelope f(x) = exp(i k φ x) for these parameters.
    pub fn envelope(&self) -> Envelope {
        Envelope::linear_phase(self.wavenumber() * self.phi)
    }

    /// Reconstruct the raw parameter set (validation is idempotent:
    /// `validate(p.params()) == p` up to warnings).
    pub fn params(&self) -> AntennaParams {
        AntennaParams {
            omega0: self.omega0,
            omega: self.omega,
            rabi: self.rabi,
            dipole: self.dipole,
            prefactor_a: None,
            kl_half: self.kl_half,
            phi: self.phi,
            gamma_override: self.gamma_override,
        }
    }
}

/// Validate raw parameters and populate derived fields.
pub fn validate(params: &AntennaParams) -> Result<ValidatedParams> {
    if params.omega <= 0.0 || params.omega.is_nan() {
        return Err(Error::NonPositiveFrequency {
            name: "omega",
            value: params.omega,
        });
    }
    if params.omega0 <= 0.0 || params.omega0.is_nan() {
        return Err(Error::NonPositiveFrequency {
            name: "omega0",
            value: params.omega0,
        });
    }
    if params.rabi < 0.0 || !params.rabi.is_finite() {
        return Err(Error::NonPositiveFrequency {
            name: "rabi",
            value: params.rabi,
        });
    }
    if params.rabi >= params.omega {
        return Err(Error::UltraStrongCoupling {
            rabi: params.rabi,
            omega: params.omega,
        });
    }
    if params.kl_half < 0.0 || !params.kl_half.is_finite() {
        return Err(Error::NegativeLength {
            name: "kl_half",
            value: params.kl_half,
        });
    }
    if params.dipole < 0.0 {
        return Err(Error::NegativeDipole {
            value: params.dipole,
        });
    }
    if let Some(a) = params.prefactor_a {
        if a < 0.0 {
            return Err(Error::NegativeDipole { value: a });
        }
    }

    let mut warnings = Vec::new();

    // Radiative strength resolution: an explicit prefactor A fixes the
    // dipole through A = d² ω³ / π (normalized units); a pinned Γ wins over
    // both.
    let mut dipole = params.dipole;
    if let Some(a) = params.prefactor_a {
        if params.dipole > 0.0 {
            warnings.push(format!(
                "prefactor_a = {a} supersedes dipole = {}",
                params.dipole
            ));
        }
        dipole = (std::f64::consts::PI * a / params.omega.powi(3)).sqrt();
    }
    if let Some(g) = params.gamma_override {
        if g < 0.0 {
            return Err(Error::NonPositiveFrequency {
                name: "gamma_override",
                value: g,
            });
        }
        if dipole > 0.0 {
            warnings.push(format!(
                "gamma_override = {g} supersedes the dipole-derived rate"
            ));
        }
    }

    Ok(ValidatedParams {
        omega0: params.omega0,
        omega: params.omega,
        rabi: params.rabi,
        detuning: params.omega0 - params.omega,
        dipole,
        kl_half: params.kl_half,
        phi: params.phi,
        gamma_override: params.gamma_override,
        warnings,
    })
}

/// Which closed form is used for the Mollow sideband sinc arguments Ψ±.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PsiMode {
    /// Ψ± = Ψ ± (Ω_R/ω) cosθ, exactly as published.
    PaperLiteral,
    /// Ψ± = Ψ ± (kl/2)(Ω_R/ω) cosθ, the form obtained by carrying the length
    /// scale through the correlation integral; validated against the
    /// brute-force pattern oracle.
    #[default]
    Derived,
}

/// θ prefactor of the far-field intensity. The published account uses both;
/// it rescales the whole pattern and never moves beam angles or ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Obliquity {
    Cos2,
    #[default]
    Sin2,
}

impl Obliquity {
    pub fn factor(self, theta: f64) -> f64 {
        match self {
            Obliquity::Cos2 => theta.cos().powi(2),
            Obliquity::Sin2 => theta.sin().powi(2),
        }
    }
}

/// Constant term of the resonant population equation.
///
/// The published resonant system carries +Γ/2, whose fixed point is ρ₁₁ = 1;
/// substituting the resonant basis into the general population equation
/// gives +Γ/4, whose fixed point is the stated steady state ρ₁₁ = 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ResonantSource {
    PaperLiteral,
    #[default]
    Consistent,
}

/// Resolution switches for the internal inconsistencies of the published
/// formulas. Defaults select the self-consistent variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ModeFlags {
    pub psi_mode: PsiMode,
    pub obliquity: Obliquity,
    pub resonant_source: ResonantSource,
}

const SPEED_OF_LIGHT: f64 = 299_792_458.0; // m/s
const HBAR: f64 = 1.054_571_817e-34; // J s
const EPSILON_0: f64 = 8.854_187_812_8e-12; // F/m

/// Laboratory-unit inputs; converted to the internal normalization with
/// [`SiParams::normalize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiParams {
    /// Transition frequency ω₀ (rad/s).
    pub omega0_rad_per_s: f64,
    /// Drive frequency ω (rad/s).
    pub omega_rad_per_s: f64,
    /// Rabi frequency Ω_R (rad/s).
    pub rabi_rad_per_s: f64,
    /// Antenna length l (m).
    pub length_m: f64,
    /// Phase shift per unit length, already in units of the drive wavenumber.
    pub phi: f64,
    /// Dipole moment d (C·m).
    pub dipole_c_m: Option<f64>,
    /// Explicit radiative rate Γ(ω) (1/s).
    pub gamma_per_s: Option<f64>,
}

impl SiParams {
    /// Convert to dimensionless parameters (ω = c = ħ = ε₀ = 1).
    pub fn normalize(&self) -> AntennaParams {
        let w = self.omega_rad_per_s;
        let prefactor_a = self.dipole_c_m.map(|d| {
            let a_si = d * d * w.powi(3)
                / (std::f64::consts::PI * EPSILON_0 * HBAR * SPEED_OF_LIGHT.powi(3));
            a_si / w
        });
        AntennaParams {
            omega0: self.omega0_rad_per_s / w,
            omega: 1.0,
            rabi: self.rabi_rad_per_s / w,
            dipole: 0.0,
            prefactor_a,
            kl_half: (w / SPEED_OF_LIGHT) * self.length_m / 2.0,
            phi: self.phi,
            gamma_override: self.gamma_per_s.map(|g| g / w),
        }
    }
}

impl ValidatedParams {
    /// Express these parameters back in SI units, given the drive frequency
    /// they correspond to.
    pub fn to_si(&self, omega_rad_per_s: f64) -> SiParams {
        let scale = omega_rad_per_s / self.omega;
        let w_si = self.omega * scale;
        let dipole_c_m = if self.dipole > 0.0 {
            // d_n² ω_n³ / π = A_n; A_si = A_n ω_si; invert the SI prefactor.
            let a_n = self.dipole * self.dipole * self.omega.powi(3) / std::f64::consts::PI;
            let a_si = a_n * scale;
            Some(
                (a_si * std::f64::consts::PI * EPSILON_0 * HBAR * SPEED_OF_LIGHT.powi(3)
                    / w_si.powi(3))
                .sqrt(),
            )
        } else {
            None
        };
        SiParams {
            omega0_rad_per_s: self.omega0 * scale,
            omega_rad_per_s: w_si,
            rabi_rad_per_s: self.rabi * scale,
            length_m: self.length() * SPEED_OF_LIGHT / w_si * self.omega,
            phi: self.phi,
            dipole_c_m,
            gamma_per_s: self.gamma_override.map(|g| g * scale),
        }
    }
}
