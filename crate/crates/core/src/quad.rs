//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 15-point Kronrod rule with its embedded 7-point Gauss rule provides the
//! local error estimate; intervals failing the tolerance are bisected with
//! the budget split evenly between halves. This handles the oscillatory
//! envelope integrands up to `kl/2 = 15π` and beyond, where fixed grids would
//! need problem-specific tuning.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and the bisection depth limit for adaptive refinement.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    /// Target error relative to the integral scale.
    pub rel_tol: f64,
    /// Absolute error floor; refinement never chases below this.
    pub abs_tol: f64,
    /// Maximum bisection depth before giving up.
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_depth: 30,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

// Kronrod-15 abscissae (positive half, descending; last entry is the center)
// and weights, with the embedded Gauss-7 weights. Standard QUADPACK values.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Kronrod-15 panel: returns (integral, |K15 - G7| error estimate,
/// integral of |f|).
fn kronrod15<F>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];

    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let sum = f1 + f2;
        res_k += sum * wk;
        res_abs += (f1.norm() + f2.norm()) * wk;
        if j % 2 == 1 {
            res_g += sum * WG[j / 2];
        }
    }

    (res_k * half, ((res_k - res_g) * half).norm(), res_abs * half.abs())
}

fn refine<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32, max_depth: u32) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let (value, err, _) = kronrod15(f, a, b);
    if err <= tol {
        return Ok(value);
    }
    let mid = 0.5 * (a + b);
    // f64 resolution exhausted; accept the panel as-is.
    if mid <= a.min(b) || mid >= a.max(b) {
        return Ok(value);
    }
    if depth >= max_depth {
        return Err(Error::QuadratureNonConvergence {
            depth,
            estimate: err,
        });
    }
    let left = refine(f, a, mid, 0.5 * tol, depth + 1, max_depth)?;
    let right = refine(f, mid, b, 0.5 * tol, depth + 1, max_depth)?;
    Ok(left + right)
}

/// Integrate a complex-valued function over `[a, b]`.
///
/// The error budget is `max(abs_tol, rel_tol * scale)` where the scale comes
/// from a first whole-interval panel, floored at a small fraction of ∫|f| so
/// that strongly cancelling integrals are still resolved in absolute terms.
pub fn integrate_complex<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (first, _, res_abs) = kronrod15(&f, a, b);
    let scale = first.norm().max(1e-3 * res_abs);
    let tol = cfg.abs_tol.max(cfg.rel_tol * scale);
    refine(&f, a, b, tol, 0, cfg.max_depth)
}

/// Integrate a real-valued function over `[a, b]`.
pub fn integrate_real<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, cfg).map(|v| v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let cfg = QuadConfig::default();
        let v = integrate_real(|x| x * x, 0.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn dipole_angular_integral() {
        // ∫_0^π sinθ cos²θ dθ = 2/3
        let cfg = QuadConfig::default();
        let v = integrate_real(|t| t.sin() * t.cos().powi(2), 0.0, PI, &cfg).unwrap();
        assert_relative_eq!(v, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_exponential() {
        // ∫_{-L}^{L} e^{iax} dx = 2 sin(aL)/a, many periods across the range
        let cfg = QuadConfig::default();
        let a = 37.0;
        let l = 10.0;
        let v = integrate_complex(|x| Complex64::new(0.0, a * x).exp(), -l, l, &cfg).unwrap();
        let exact = 2.0 * (a * l).sin() / a;
        assert_relative_eq!(v.re, exact, epsilon = 1e-9, max_relative = 1e-9);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn empty_interval_is_zero() {
        let cfg = QuadConfig::default();
        assert_eq!(integrate_real(|x| x, 3.0, 3.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn depth_limit_reports_non_convergence() {
        // A discontinuity that the error estimator never accepts at a depth
        // this shallow.
        let cfg = QuadConfig {
            rel_tol: 1e-16,
            abs_tol: 1e-300,
            max_depth: 4,
        };
        let err = integrate_real(|x| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, crate::Error::QuadratureNonConvergence { .. }));
    }
}
