//! Density-matrix dynamics in the dressed basis.
//!
//! The state is (ρ₁₁, ρ₁₂, ρ₂₁) with ρ₂₂ = 1 − ρ₁₁ by trace conservation.
//! ρ₂₁ is stored redundantly rather than forced to conj(ρ₁₂): the two
//! coherence equations are mutually conjugate when the relaxation
//! coefficients are real, so Hermiticity becomes a measurable invariant of
//! the integrator instead of an assumption.
//!
//! Integration is fixed-step classical RK4. The system is a 3-dimensional
//! linear ODE with stiffness scale max(2ν, Γ), so a safety-factor step bound
//! is simpler than adaptive control and keeps regression outputs bit-stable.

use num_complex::Complex64;
use serde::Serialize;

use crate::dressed::{DressedBasis, RelaxationRates};
use crate::error::{Error, Result};
use crate::params::ResonantSource;

/// 2×2 density matrix in the dressed basis; ρ₂₂ is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityMatrix {
    pub rho11: f64,
    pub rho12: Complex64,
    pub rho21: Complex64,
}

impl DensityMatrix {
    /// Hermitian state with ρ₂₁ = conj(ρ₁₂).
    pub fn new_hermitian(rho11: f64, rho12: Complex64) -> Self {
        Self {
            rho11,
            rho12,
            rho21: rho12.conj(),
        }
    }

    pub fn diag(rho11: f64) -> Self {
        Self::new_hermitian(rho11, Complex64::new(0.0, 0.0))
    }

    pub fn rho22(&self) -> f64 {
        1.0 - self.rho11
    }

    /// |ρ₂₁ − conj(ρ₁₂)|.
    pub fn hermiticity_defect(&self) -> f64 {
        (self.rho21 - self.rho12.conj()).norm()
    }

    /// det ρ = ρ₁₁ρ₂₂ − |ρ₁₂|²; negative values signal positivity loss.
    pub fn positivity_defect(&self) -> f64 {
        self.rho11 * self.rho22() - self.rho12.norm_sqr()
    }

    fn scaled_add(&self, other: &Self, factor: f64) -> Self {
        Self {
            rho11: self.rho11 + factor * other.rho11,
            rho12: self.rho12 + factor * other.rho12,
            rho21: self.rho21 + factor * other.rho21,
        }
    }
}

/// Right-hand side of the dressed-basis equations of motion, general form:
///
/// ρ̇₁₁ = −½{ 2Γ(ω)C⁴(1 + g⁴)ρ₁₁ − 2Γ(ω)C⁴g⁴ + gC⁴(Γ₊ − Γ₋)(ρ₁₂ + ρ₂₁) }
/// ρ̇₁₂ = −i(2ν − i γ₁₂/2)ρ₁₂ − (γ₂₁/2)ρ₂₁ + γ₂₂/2 + (γ₁₁ − γ₂₂)ρ₁₁/2
/// ρ̇₂₁ = +i(2ν + i γ₁₂/2)ρ₂₁ − (γ₂₁/2)ρ₁₂ + γ₂₂/2 + (γ₁₁ − γ₂₂)ρ₁₁/2
pub fn rhs_general(
    rho: &DensityMatrix,
    basis: &DressedBasis,
    rates: &RelaxationRates,
) -> DensityMatrix {
    let g = basis.g;
    let c2 = basis.c_norm * basis.c_norm;
    let c4 = c2 * c2;
    let g4 = g.powi(4);
    let nu = basis.nu;

    let drho11 = -0.5
        * (2.0 * rates.gamma_omega * c4 * (1.0 + g4) * rho.rho11
            - 2.0 * rates.gamma_omega * c4 * g4
            + g * c4 * (rates.gamma_plus - rates.gamma_minus) * (rho.rho12 + rho.rho21).re);

    let source = 0.5 * rates.g22 + 0.5 * (rates.g11 - rates.g22) * rho.rho11;
    let lam12 = Complex64::new(-0.5 * rates.g12, -2.0 * nu);
    let lam21 = Complex64::new(-0.5 * rates.g12, 2.0 * nu);
    let drho12 = lam12 * rho.rho12 - 0.5 * rates.g21 * rho.rho21 + source;
    let drho21 = lam21 * rho.rho21 - 0.5 * rates.g21 * rho.rho12 + source;

    DensityMatrix {
        rho11: drho11,
        rho12: drho12,
        rho21: drho21,
    }
}

/// Exact-resonance right-hand side:
///
/// ρ̇₁₁ = −(Γ/2)ρ₁₁ + source, with source Γ/2 (`PaperLiteral`, as published,
/// fixed point 1) or Γ/4 (`Consistent`, the value obtained by substituting
/// the resonant basis into the general population equation, fixed point ½).
/// ρ̇₁₂ = −i(2ν − i 3Γ/4)ρ₁₂ − (Γ/4)ρ₂₁ + Γ/2, and ρ̇₂₁ its conjugate image.
pub fn rhs_resonant(
    rho: &DensityMatrix,
    gamma: f64,
    nu: f64,
    source_mode: ResonantSource,
) -> DensityMatrix {
    let source = match source_mode {
        ResonantSource::PaperLiteral => 0.5 * gamma,
        ResonantSource::Consistent => 0.25 * gamma,
    };
    let drho11 = -0.5 * gamma * rho.rho11 + source;
    let lam12 = Complex64::new(-0.75 * gamma, -2.0 * nu);
    let lam21 = Complex64::new(-0.75 * gamma, 2.0 * nu);
    let drho12 = lam12 * rho.rho12 - 0.25 * gamma * rho.rho21 + 0.5 * gamma;
    let drho21 = lam21 * rho.rho21 - 0.25 * gamma * rho.rho12 + 0.5 * gamma;
    DensityMatrix {
        rho11: drho11,
        rho12: drho12,
        rho21: drho21,
    }
}

/// Which equations of motion to integrate.
#[derive(Debug, Clone, Copy)]
pub enum RhsVariant<'a> {
    General {
        basis: &'a DressedBasis,
        rates: &'a RelaxationRates,
    },
    Resonant {
        gamma: f64,
        nu: f64,
        source: ResonantSource,
    },
}

impl RhsVariant<'_> {
    fn eval(&self, rho: &DensityMatrix) -> DensityMatrix {
        match self {
            RhsVariant::General { basis, rates } => rhs_general(rho, basis, rates),
            RhsVariant::Resonant { gamma, nu, source } => {
                rhs_resonant(rho, *gamma, *nu, *source)
            }
        }
    }

    fn name(&self) -> &'static str {
        match self {
            RhsVariant::General { .. } => "general",
            RhsVariant::Resonant { .. } => "resonant",
        }
    }

    /// Stability bound 0.05 · min(1/(2ν), 1/Γ) on the step size.
    fn step_bound(&self) -> f64 {
        let (nu, gamma) = match self {
            RhsVariant::General { basis, rates } => {
                let g_max = rates
                    .gamma_omega
                    .max(rates.g11.abs())
                    .max(rates.g12.abs())
                    .max(rates.g21.abs())
                    .max(rates.g22.abs());
                (basis.nu, g_max)
            }
            RhsVariant::Resonant { gamma, nu, .. } => (*nu, *gamma),
        };
        let mut bound = f64::INFINITY;
        if nu > 0.0 {
            bound = bound.min(1.0 / (2.0 * nu));
        }
        if gamma > 0.0 {
            bound = bound.min(1.0 / gamma);
        }
        0.05 * bound
    }
}

/// Integration options; `dt: None` selects the stability-bound step.
#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    pub dt: Option<f64>,
    /// Shrink an over-large requested step to the bound instead of erroring.
    pub auto_shrink: bool,
    /// Keep every n-th sample (the final state is always kept).
    pub sample_stride: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            dt: None,
            auto_shrink: true,
            sample_stride: 1,
        }
    }
}

/// Ordered (t, ρ) samples of one integration run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<(f64, DensityMatrix)>,
    pub dt: f64,
    pub variant: String,
    pub params_hash: u64,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        &self.samples.last().expect("non-empty trajectory").1
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|(_, r)| r.hermiticity_defect())
            .fold(0.0, f64::max)
    }

    pub fn min_positivity_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|(_, r)| r.positivity_defect())
            .fold(f64::INFINITY, f64::min)
    }
}

fn hash_f64s(values: &[f64]) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for v in values {
        v.to_bits().hash(&mut h);
    }
    h.finish()
}

/// Fixed-step RK4 integration of the chosen equations of motion.
pub fn integrate(
    rho0: &DensityMatrix,
    variant: RhsVariant<'_>,
    t_end: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    let defect = rho0.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::NonHermitianInitialState { defect });
    }

    let bound = variant.step_bound();
    let dt_req = opts.dt.unwrap_or_else(|| {
        if bound.is_finite() {
            bound
        } else {
            t_end / 1000.0
        }
    });
    if dt_req > bound && !opts.auto_shrink {
        return Err(Error::StepTooLarge {
            dt: dt_req,
            bound,
        });
    }
    let dt_eff = dt_req.min(bound);
    let n_steps = (t_end / dt_eff).ceil().max(1.0) as usize;
    let dt = t_end / n_steps as f64;

    let stride = opts.sample_stride.max(1);
    let mut samples = Vec::with_capacity(n_steps / stride + 2);
    let mut rho = *rho0;
    samples.push((0.0, rho));

    for step in 1..=n_steps {
        let k1 = variant.eval(&rho);
        let k2 = variant.eval(&rho.scaled_add(&k1, 0.5 * dt));
        let k3 = variant.eval(&rho.scaled_add(&k2, 0.5 * dt));
        let k4 = variant.eval(&rho.scaled_add(&k3, dt));
        let incr = DensityMatrix {
            rho11: k1.rho11 + 2.0 * (k2.rho11 + k3.rho11) + k4.rho11,
            rho12: k1.rho12 + 2.0 * (k2.rho12 + k3.rho12) + k4.rho12,
            rho21: k1.rho21 + 2.0 * (k2.rho21 + k3.rho21) + k4.rho21,
        };
        rho = rho.scaled_add(&incr, dt / 6.0);
        if step.is_multiple_of(stride) || step == n_steps {
            samples.push((step as f64 * dt, rho));
        }
    }

    let params_hash = match variant {
        RhsVariant::General { basis, rates } => hash_f64s(&[
            basis.nu,
            basis.g,
            rates.gamma_omega,
            rates.gamma_plus,
            rates.gamma_minus,
            dt,
            t_end,
        ]),
        RhsVariant::Resonant { gamma, nu, source } => hash_f64s(&[
            gamma,
            nu,
            match source {
                ResonantSource::PaperLiteral => 1.0,
                ResonantSource::Consistent => 0.0,
            },
            dt,
            t_end,
        ]),
    };

    Ok(Trajectory {
        samples,
        dt,
        variant: variant.name().to_string(),
        params_hash,
    })
}

/// Steady-state evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SteadyStateMethod {
    /// The printed closed form ρ₁₂(∞) = Γ(2iν − Γ/2) / (2(4ν² − Γ²/2)),
    /// kept as a cross-check; its denominator has a pole at 2ν = Γ/√2.
    ClosedForm,
    /// Zero of the consistent resonant system, solved as a 3-unknown real
    /// linear system in (ρ₁₁, Re ρ₁₂, Im ρ₁₂) with ρ₂₁ = conj(ρ₁₂).
    LinearSolve,
}

/// Steady state of the resonant system by the requested method.
pub fn steady_state(gamma: f64, nu: f64, method: SteadyStateMethod) -> Result<DensityMatrix> {
    match method {
        SteadyStateMethod::LinearSolve => Ok(steady_state_linear(gamma, nu)),
        SteadyStateMethod::ClosedForm => {
            let a = 4.0 * nu * nu;
            let b = 0.5 * gamma * gamma;
            if (a - b).abs() <= 1e-12 * (a + b) {
                return Err(Error::SingularSystem { nu, gamma });
            }
            let rho12 = gamma * Complex64::new(-0.5 * gamma, 2.0 * nu) / (2.0 * (a - b));
            Ok(DensityMatrix::new_hermitian(0.5, rho12))
        }
    }
}

#[allow(clippy::needless_range_loop)]
fn steady_state_linear(gamma: f64, nu: f64) -> DensityMatrix {
    if gamma == 0.0 {
        // The population equation degenerates to 0 = 0 and the coherence is
        // forced to zero by the rotation; ρ₁₁ = ½ is the gamma -> 0 limit.
        return DensityMatrix::diag(0.5);
    }
    // Rows: population, Re and Im of the coherence equation.
    let mut m = [
        [-0.5 * gamma, 0.0, 0.0, -0.25 * gamma],
        [0.0, -gamma, 2.0 * nu, -0.5 * gamma],
        [0.0, -2.0 * nu, -0.5 * gamma, 0.0],
    ];
    // Gaussian elimination with partial pivoting on the 3x4 system.
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in (row + 1)..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    DensityMatrix::new_hermitian(x[0], Complex64::new(x[1], x[2]))
}

/// Both steady-state routes side by side with their discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyStateReport {
    pub linear_solve: DensityMatrix,
    pub closed_form: Option<DensityMatrix>,
    pub analytic_singular: bool,
    /// max(|Δρ₁₁|, |Δρ₁₂|) between the two routes, when both exist.
    pub discrepancy: Option<f64>,
}

pub fn steady_state_report(gamma: f64, nu: f64) -> SteadyStateReport {
    let linear = steady_state_linear(gamma, nu);
    match steady_state(gamma, nu, SteadyStateMethod::ClosedForm) {
        Ok(analytic) => {
            let d = (linear.rho11 - analytic.rho11)
                .abs()
                .max((linear.rho12 - analytic.rho12).norm());
            SteadyStateReport {
                linear_solve: linear,
                closed_form: Some(analytic),
                analytic_singular: false,
                discrepancy: Some(d),
            }
        }
        Err(_) => SteadyStateReport {
            linear_solve: linear,
            closed_form: None,
            analytic_singular: true,
            discrepancy: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dressed::{dressed_basis, relaxation_params, RelaxationRates};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn steady_state_is_fixed_point_of_rhs() {
        let gamma = 0.02;
        let nu = 0.1;
        let ss = steady_state(gamma, nu, SteadyStateMethod::LinearSolve).unwrap();
        let d = rhs_resonant(&ss, gamma, nu, ResonantSource::Consistent);
        assert!(d.rho11.abs() <= 1e-12);
        assert!(d.rho12.norm() <= 1e-12);
        assert!(d.rho21.norm() <= 1e-12);

        // The general equations with the resonant coefficient set share the
        // same fixed point.
        let basis = dressed_basis(0.0, 2.0 * nu);
        let rates = RelaxationRates::resonant_approximation(gamma);
        let dg = rhs_general(&ss, &basis, &rates);
        assert!(dg.rho11.abs() <= 1e-12);
        assert!(dg.rho12.norm() <= 1e-12);
    }

    #[test]
    fn no_drive_population_decays_exponentially() {
        // g = 0: the population equation reduces to pure decay at Γ, with
        // the closed solution ρ₁₁(t) = e^{−Γt}.
        let gamma = 0.05;
        let basis = dressed_basis(0.2, 0.0);
        let rates = relaxation_params(&basis, gamma, gamma, gamma);
        let rho0 = DensityMatrix::diag(1.0);
        let traj = integrate(
            &rho0,
            RhsVariant::General {
                basis: &basis,
                rates: &rates,
            },
            60.0,
            &IntegrateOptions::default(),
        )
        .unwrap();
        for &(t, r) in traj.samples.iter().step_by(50) {
            assert_relative_eq!(r.rho11, (-gamma * t).exp(), epsilon = 1e-9);
        }
    }

    #[test]
    fn resonant_population_rhs_has_quarter_source() {
        // Substituting g = 1, C⁴ = 1/4 and equal rates into the general
        // population equation gives ρ̇₁₁ = −(Γ/2)ρ₁₁ + Γ/4.
        let gamma = 0.8;
        let basis = dressed_basis(0.0, 0.3);
        let rates = relaxation_params(&basis, gamma, gamma, gamma);
        for rho11 in [0.0, 0.3, 1.0] {
            let rho = DensityMatrix::diag(rho11);
            let d = rhs_general(&rho, &basis, &rates);
            assert_relative_eq!(d.rho11, -0.5 * gamma * rho11 + 0.25 * gamma, epsilon = 1e-14);
            let dr = rhs_resonant(&rho, gamma, basis.nu, ResonantSource::Consistent);
            assert_relative_eq!(dr.rho11, d.rho11, epsilon = 1e-14);
        }
    }

    #[test]
    fn fixed_points_of_both_source_conventions() {
        // Consistent: ρ₁₁(∞) = 1/2. As published: ρ₁₁(∞) = 1.
        let gamma = 0.4;
        for (mode, fp) in [
            (ResonantSource::Consistent, 0.5),
            (ResonantSource::PaperLiteral, 1.0),
        ] {
            let rho = DensityMatrix::diag(fp);
            let d = rhs_resonant(&rho, gamma, 0.1, mode);
            assert_relative_eq!(d.rho11, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn closed_system_rotates_coherence_only() {
        // Γ = 0: ρ₁₁ constant, coherences rotate at ±2ν with constant
        // magnitude.
        let nu = 0.3;
        let rho0 = DensityMatrix::new_hermitian(0.7, Complex64::new(0.2, -0.1));
        let traj = integrate(
            &rho0,
            RhsVariant::Resonant {
                gamma: 0.0,
                nu,
                source: ResonantSource::Consistent,
            },
            20.0,
            &IntegrateOptions {
                dt: Some(0.01),
                ..Default::default()
            },
        )
        .unwrap();
        let end = traj.final_state();
        assert_relative_eq!(end.rho11, 0.7, epsilon = 1e-12);
        assert_relative_eq!(end.rho12.norm(), rho0.rho12.norm(), epsilon = 1e-9);
        let expected = rho0.rho12 * Complex64::new(0.0, -2.0 * nu * 20.0).exp();
        assert!((end.rho12 - expected).norm() <= 1e-8);
    }

    #[test]
    fn long_run_reaches_half_population() {
        let gamma = 0.01;
        let rho0 = DensityMatrix::diag(1.0);
        let traj = integrate(
            &rho0,
            RhsVariant::Resonant {
                gamma,
                nu: 0.1,
                source: ResonantSource::Consistent,
            },
            8000.0,
            &IntegrateOptions {
                sample_stride: 100,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((traj.final_state().rho11 - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn steady_start_stays_put() {
        let gamma = 0.02;
        let nu = 0.1;
        let ss = steady_state(gamma, nu, SteadyStateMethod::LinearSolve).unwrap();
        let traj = integrate(
            &ss,
            RhsVariant::Resonant {
                gamma,
                nu,
                source: ResonantSource::Consistent,
            },
            200.0,
            &IntegrateOptions::default(),
        )
        .unwrap();
        for (_, r) in &traj.samples {
            assert!((r.rho11 - ss.rho11).abs() <= 1e-9);
            assert!((r.rho12 - ss.rho12).norm() <= 1e-9);
        }
    }

    #[test]
    fn rk4_order_via_richardson() {
        // Error against a dt/10 reference shrinks ~16x when dt halves.
        let gamma = 0.2;
        let nu = 0.25;
        let rho0 = DensityMatrix::diag(1.0);
        let t_end = 10.0;
        let run = |dt: f64| {
            let traj = integrate(
                &rho0,
                RhsVariant::Resonant {
                    gamma,
                    nu,
                    source: ResonantSource::Consistent,
                },
                t_end,
                &IntegrateOptions {
                    dt: Some(dt),
                    sample_stride: usize::MAX,
                    ..Default::default()
                },
            )
            .unwrap();
            *traj.final_state()
        };
        let dt0 = 0.1; // at the stability bound
        let reference = run(dt0 / 10.0);
        let err = |r: DensityMatrix| {
            (r.rho11 - reference.rho11)
                .abs()
                .max((r.rho12 - reference.rho12).norm())
        };
        let e1 = err(run(dt0));
        let e2 = err(run(dt0 / 2.0));
        let ratio = e1 / e2;
        assert!(
            (13.0..=19.0).contains(&ratio),
            "expected ~16x error reduction, got {ratio:.2} (e1 = {e1:.3e}, e2 = {e2:.3e})"
        );
    }

    #[test]
    fn non_hermitian_start_is_rejected() {
        let bad = DensityMatrix {
            rho11: 0.5,
            rho12: Complex64::new(0.1, 0.0),
            rho21: Complex64::new(0.3, 0.0),
        };
        let r = integrate(
            &bad,
            RhsVariant::Resonant {
                gamma: 0.1,
                nu: 0.1,
                source: ResonantSource::Consistent,
            },
            1.0,
            &IntegrateOptions::default(),
        );
        assert!(matches!(r, Err(Error::NonHermitianInitialState { .. })));
    }

    #[test]
    fn oversized_step_errors_without_auto_shrink() {
        let rho0 = DensityMatrix::diag(1.0);
        let opts = IntegrateOptions {
            dt: Some(10.0),
            auto_shrink: false,
            sample_stride: 1,
        };
        let r = integrate(
            &rho0,
            RhsVariant::Resonant {
                gamma: 0.1,
                nu: 0.25,
                source: ResonantSource::Consistent,
            },
            5.0,
            &opts,
        );
        assert!(matches!(r, Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn trajectory_starts_at_initial_condition_and_increases() {
        let rho0 = DensityMatrix::diag(0.3);
        let traj = integrate(
            &rho0,
            RhsVariant::Resonant {
                gamma: 0.05,
                nu: 0.1,
                source: ResonantSource::Consistent,
            },
            10.0,
            &IntegrateOptions {
                sample_stride: 7,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(traj.samples[0].0, 0.0);
        assert_eq!(traj.samples[0].1, rho0);
        assert!(traj.samples.windows(2).all(|w| w[1].0 > w[0].0));
        assert_relative_eq!(traj.samples.last().unwrap().0, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn steady_state_no_relaxation() {
        for method in [SteadyStateMethod::LinearSolve, SteadyStateMethod::ClosedForm] {
            let ss = steady_state(0.0, 0.1, method).unwrap();
            assert_eq!(ss.rho11, 0.5);
            assert_eq!(ss.rho12.norm(), 0.0);
        }
    }

    #[test]
    fn steady_state_frozen_regression_values() {
        // Γ = 0.01, ν = 0.1: linear-solve closed values
        // u = Γ²/(2(8ν² + Γ²)), v = −2νΓ/(8ν² + Γ²), frozen independently.
        let ss = steady_state(0.01, 0.1, SteadyStateMethod::LinearSolve).unwrap();
        assert_relative_eq!(ss.rho11, 0.5, epsilon = 1e-14);
        assert_relative_eq!(ss.rho12.re, 6.242_197_253_433_209e-4, max_relative = 1e-12);
        assert_relative_eq!(ss.rho12.im, -2.496_878_901_373_283_4e-2, max_relative = 1e-12);

        // Printed closed form, evaluated alongside: differs in sign and
        // denominator; reported, not asserted equal.
        let closed = steady_state(0.01, 0.1, SteadyStateMethod::ClosedForm).unwrap();
        assert_relative_eq!(closed.rho12.re, -6.257_822_277_847_309e-4, max_relative = 1e-12);
        assert_relative_eq!(closed.rho12.im, 2.503_128_911_138_923_7e-2, max_relative = 1e-12);
        let report = steady_state_report(0.01, 0.1);
        assert!(report.discrepancy.unwrap() > 1e-3);
    }

    #[test]
    fn weak_damping_magnitudes_agree() {
        // ν >> Γ: |ρ₁₂| = O(Γ/ν) small and the two routes agree in magnitude
        // to O((Γ/ν)²).
        let gamma = 1e-4;
        let nu = 0.1;
        let lin = steady_state(gamma, nu, SteadyStateMethod::LinearSolve).unwrap();
        let closed = steady_state(gamma, nu, SteadyStateMethod::ClosedForm).unwrap();
        let scale = gamma / nu;
        assert!(lin.rho12.norm() < scale);
        assert!((lin.rho12.norm() - closed.rho12.norm()).abs() < scale * scale);
    }

    #[test]
    fn analytic_form_pole_is_reported() {
        let nu = 0.05;
        let gamma = 2.0 * nu * std::f64::consts::SQRT_2; // 4ν² = Γ²/2
        let r = steady_state(gamma, nu, SteadyStateMethod::ClosedForm);
        assert!(matches!(r, Err(Error::SingularSystem { .. })));
        let report = steady_state_report(gamma, nu);
        assert!(report.analytic_singular);
        assert!(report.closed_form.is_none());
    }

    #[test]
    fn diagonal_relaxes_monotonically_at_half_gamma() {
        // |ρ₁₁(t) − ½| = ½ e^{−Γt/2} in consistent mode; fit the decay rate.
        let gamma = 0.02;
        let traj = integrate(
            &DensityMatrix::diag(1.0),
            RhsVariant::Resonant {
                gamma,
                nu: 0.1,
                source: ResonantSource::Consistent,
            },
            200.0,
            &IntegrateOptions::default(),
        )
        .unwrap();
        let (t0, r0) = traj.samples[10];
        let (t1, r1) = traj.samples[traj.samples.len() - 1];
        let fitted = ((r0.rho11 - 0.5).ln() - (r1.rho11 - 0.5).ln()) / (t1 - t0);
        assert_relative_eq!(fitted, 0.5 * gamma, max_relative = 0.02);
    }

    #[test]
    fn initial_state_independence() {
        let gamma = 0.01;
        let nu = 0.1;
        let run = |rho0: DensityMatrix| {
            integrate(
                &rho0,
                RhsVariant::Resonant {
                    gamma,
                    nu,
                    source: ResonantSource::Consistent,
                },
                40.0 / gamma,
                &IntegrateOptions {
                    sample_stride: 1000,
                    ..Default::default()
                },
            )
            .unwrap()
        };
        let a = run(DensityMatrix::diag(1.0));
        let b = run(DensityMatrix::diag(0.0));
        let fa = a.final_state();
        let fb = b.final_state();
        assert!((fa.rho11 - fb.rho11).abs() <= 1e-6);
        assert!((fa.rho12 - fb.rho12).norm() <= 1e-6);
    }

    #[test]
    fn positivity_limits_of_the_general_coefficients() {
        // Away from exact resonance the rotated equations are not completely
        // positive: for some boundary states det(ρ) transiently dips below
        // zero at the 1e-4..1e-2 scale, far above integrator rounding
        // (~1e-16). At Δ = 0 they coincide with the resonance-fluorescence
        // system and stay positive. The invariant tests below therefore pin
        // positivity at resonance and for the resonant variant only.
        let boundary_state = |rho11: f64, c: Complex64| {
            let max_c = (rho11 * (1.0 - rho11)).sqrt();
            DensityMatrix::new_hermitian(rho11, c * (max_c / c.norm()))
        };
        let run = |rho0: &DensityMatrix, detuning: f64, gp: f64, gm: f64| {
            let basis = dressed_basis(detuning, 0.05);
            let rates = relaxation_params(&basis, 0.02, gp, gm);
            integrate(
                rho0,
                RhsVariant::General {
                    basis: &basis,
                    rates: &rates,
                },
                300.0,
                &IntegrateOptions {
                    sample_stride: 10,
                    ..Default::default()
                },
            )
            .unwrap()
        };

        // Positive detuning, equal rates: a state that dips.
        let s1 = boundary_state(0.1308, Complex64::new(-0.3119, 0.2282));
        let pos_det = run(&s1, 0.0651, 0.02, 0.02);
        assert!(pos_det.min_positivity_defect() < -1e-6);
        assert!(pos_det.min_positivity_defect() > -0.1);
        assert!(pos_det.max_hermiticity_defect() <= 1e-9);

        // Negative detuning (g > 1), equal rates: dips as well.
        let s2 = boundary_state(0.917, Complex64::new(0.27, 0.1));
        let neg_det = run(&s2, -0.0533, 0.02, 0.02);
        assert!(neg_det.min_positivity_defect() < -1e-6);
        assert!(neg_det.min_positivity_defect() > -0.1);

        // Unequal sideband rates: dip at the rate-asymmetry scale.
        let asym = run(&s2, -0.198, 0.022, 0.018);
        assert!(asym.min_positivity_defect() < -1e-6);
        assert!(asym.min_positivity_defect() > -1e-2);

        // Even at resonance the literal coefficients (γ₂₁ = 0 when the
        // channel rates are equal) differ from the textbook system and can
        // leave the state cone; the resonant-approximation set (γ₂₁ = Γ/2)
        // restores complete positivity for the same state.
        let s3 = boundary_state(0.187, Complex64::new(0.3529, 0.2691));
        let literal_res = run(&s3, 0.0, 0.02, 0.02);
        assert!(literal_res.min_positivity_defect() < -1e-6);
        let basis0 = dressed_basis(0.0, 0.05);
        let approx = RelaxationRates::resonant_approximation(0.02);
        let cp = integrate(
            &s3,
            RhsVariant::General {
                basis: &basis0,
                rates: &approx,
            },
            300.0,
            &IntegrateOptions {
                sample_stride: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(cp.min_positivity_defect() >= -1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        // Hermiticity and positivity hold along trajectories from random
        // Hermitian starts: for the resonant variant always, and for the
        // general equations at exact resonance with the resonance-
        // fluorescence coefficient set (the completely positive one).
        // Hermiticity alone is structural and holds off resonance too.
        #[test]
        fn trajectory_invariants(
            rho11 in 0.0..1.0f64,
            re in -0.4..0.4f64,
            im in -0.4..0.4f64,
            detuning in -0.3..0.3f64,
            rabi in 0.05..0.5f64,
        ) {
            // Clip the coherence into the physical cone.
            let max_c = (rho11 * (1.0 - rho11)).sqrt();
            let c = Complex64::new(re, im);
            let c = if c.norm() > max_c { c * (max_c / c.norm()) } else { c };
            let rho0 = DensityMatrix::new_hermitian(rho11, c);

            let basis = dressed_basis(0.0, rabi);
            let rates = RelaxationRates::resonant_approximation(0.02);
            let traj = integrate(
                &rho0,
                RhsVariant::General { basis: &basis, rates: &rates },
                300.0,
                &IntegrateOptions { sample_stride: 10, ..Default::default() },
            ).unwrap();
            prop_assert!(traj.max_hermiticity_defect() <= 1e-9);
            prop_assert!(traj.min_positivity_defect() >= -1e-9);
            let end = traj.final_state();
            prop_assert!(end.rho11 >= -1e-9 && end.rho11 <= 1.0 + 1e-9);

            let traj_res = integrate(
                &rho0,
                RhsVariant::Resonant { gamma: 0.02, nu: basis.nu, source: ResonantSource::Consistent },
                300.0,
                &IntegrateOptions { sample_stride: 10, ..Default::default() },
            ).unwrap();
            prop_assert!(traj_res.max_hermiticity_defect() <= 1e-9);
            prop_assert!(traj_res.min_positivity_defect() >= -1e-9);

            let basis_off = dressed_basis(detuning, rabi);
            let rates_off = relaxation_params(&basis_off, 0.02, 0.022, 0.018);
            let traj_off = integrate(
                &rho0,
                RhsVariant::General { basis: &basis_off, rates: &rates_off },
                100.0,
                &IntegrateOptions { sample_stride: 10, ..Default::default() },
            ).unwrap();
            prop_assert!(traj_off.max_hermiticity_defect() <= 1e-9);
        }
    }
}
