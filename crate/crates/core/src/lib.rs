//! Radiation of a driven two-level wire antenna into a free-space photonic
//! reservoir.
//!
//! The emitter is a two-level system with a spatial envelope spread over a
//! wire of electrical half-length `kl/2`, driven by a classical field at the
//! Rabi frequency `Ω_R`. Emission into the surrounding mode continuum is
//! treated as a Lindblad relaxation channel whose rate Γ(ω) follows from an
//! angular quadrature over the envelope form factor. The crate computes:
//!
//! * the dressed (field-shifted) basis and its relaxation coefficients,
//! * density-matrix dynamics in that basis (fixed-step RK4) and the
//!   analytic/linear-solve steady states,
//! * the steady-state two-time correlation, the three-component radiation
//!   pattern ξ(θ) and the angle-resolved power spectrum S(ω; θ), one
//!   component per Mollow line, together with beam-angle and critical
//!   phase-shift analysis.
//!
//! Internally everything is dimensionless: the drive frequency ω, the speed
//! of light c, ħ and ε₀ are all 1, so inputs reduce to the ratios
//! `Ω_R/ω`, `kl/2`, `φ` and `Γ/ω`.
//!
//! Grid evaluations (patterns, spectra, rate sweeps) are data-parallel via
//! rayon when the default `parallel` feature is enabled; disabling it gives
//! a sequential build with identical outputs.

pub use num_complex::Complex64;

pub mod dressed;
pub mod dynamics;
pub mod envelope;
pub mod error;
pub mod params;
pub mod quad;
pub mod radiation;

mod par;

pub use dressed::{
    dressed_basis, gamma_integral, gamma_of_omega, DressedBasis, RateModel, RelaxationRates,
};
pub use dynamics::{
    integrate, rhs_general, rhs_resonant, steady_state, steady_state_report, DensityMatrix,
    IntegrateOptions, RhsVariant, SteadyStateMethod, SteadyStateReport, Trajectory,
};
pub use envelope::{form_factor, form_factor_linear_phase, sinc, Envelope};
pub use error::{Error, Result};
pub use params::{
    validate, AntennaParams, ModeFlags, Obliquity, PsiMode, ResonantSource, SiParams,
    ValidatedParams, DEFAULT_GAMMA_OVER_OMEGA,
};
pub use par::{map_grid, map_grid_seq};
pub use quad::{integrate_complex, integrate_real, QuadConfig};
pub use radiation::{
    correlation_ss, line_analysis, pattern_grid, pattern_grid_seq, psi_arguments, spectrum,
    spectrum_grid, spectrum_grid_seq, xi_pattern, xi_pattern_bruteforce, LineAnalysis, LineBeam,
    PatternPoint, SpectrumPoint,
};
