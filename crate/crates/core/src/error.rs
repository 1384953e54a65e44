//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frequency must be positive: {name} = {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },

    /// The rotating-wave treatment breaks down once the drive is as fast as
    /// the carrier; such inputs are rejected rather than silently mismodeled.
    #[error("ultra-strong coupling rejected: rabi = {rabi} >= omega = {omega}")]
    UltraStrongCoupling { rabi: f64, omega: f64 },

    #[error("length must be non-negative: {name} = {value}")]
    NegativeLength { name: &'static str, value: f64 },

    #[error("dipole moment / radiative prefactor must be non-negative: {value}")]
    NegativeDipole { value: f64 },

    #[error("quadrature did not converge: depth {depth} reached, error estimate {estimate:.3e}")]
    QuadratureNonConvergence { depth: u32, estimate: f64 },

    #[error("invalid envelope: {0}")]
    InvalidEnvelope(String),

    #[error("step dt = {dt} exceeds stability bound {bound} and auto-shrink is disabled")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("initial density matrix is not Hermitian: |rho21 - conj(rho12)| = {defect:.3e}")]
    NonHermitianInitialState { defect: f64 },

    /// The printed closed-form steady state has a pole at `4 nu^2 = gamma^2 / 2`.
    #[error("closed-form steady state is singular at 4 nu^2 = gamma^2/2 (nu = {nu}, gamma = {gamma})")]
    SingularSystem { nu: f64, gamma: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
