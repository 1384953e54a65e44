//! Run configuration: a TOML file with every key optional, overridden by
//! command-line flags, resolved into a [`RunConfig`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qantenna::{AntennaParams, ModeFlags, SiParams};

use crate::commands::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// θ grid in degrees over [start, stop), fixed step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThetaGrid {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        Self {
            start_deg: 0.0,
            stop_deg: 90.0,
            step_deg: 0.25,
        }
    }
}

impl ThetaGrid {
    pub fn values_deg(&self) -> Result<Vec<f64>, CliError> {
        if self.step_deg <= 0.0 || self.step_deg.is_nan() {
            return Err(CliError::Config(format!(
                "theta step must be positive, got {}",
                self.step_deg
            )));
        }
        if self.stop_deg <= self.start_deg || self.stop_deg.is_nan() || self.start_deg.is_nan() {
            return Err(CliError::Config(format!(
                "theta grid is empty: start {} >= stop {}",
                self.start_deg, self.stop_deg
            )));
        }
        let n = ((self.stop_deg - self.start_deg) / self.step_deg - 1e-9).floor() as usize + 1;
        Ok((0..n)
            .map(|i| self.start_deg + i as f64 * self.step_deg)
            .collect())
    }
}

/// ω grid: `points` samples over center ± half_span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OmegaGrid {
    /// Defaults to ω₀ when unset.
    pub center: Option<f64>,
    /// Defaults to 2·Ω_R + 0.01 when unset.
    pub half_span: Option<f64>,
    pub points: Option<usize>,
}

impl OmegaGrid {
    pub fn values(&self, omega0: f64, rabi: f64) -> Result<Vec<f64>, CliError> {
        let center = self.center.unwrap_or(omega0);
        let half_span = self.half_span.unwrap_or(2.0 * rabi + 0.01);
        let points = self.points.unwrap_or(2001);
        if points == 0 {
            return Err(CliError::Config("omega grid needs at least 1 point".into()));
        }
        if half_span < 0.0 {
            return Err(CliError::Config(format!(
                "omega half_span must be non-negative, got {half_span}"
            )));
        }
        if points == 1 {
            return Ok(vec![center]);
        }
        let step = 2.0 * half_span / (points - 1) as f64;
        Ok((0..points)
            .map(|i| center - half_span + i as f64 * step)
            .collect())
    }
}

/// Initial state and horizon of a dynamics run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsConfig {
    pub rho11_0: f64,
    pub re_rho12_0: f64,
    pub im_rho12_0: f64,
    /// Defaults to 40/Γ when unset.
    pub t_end: Option<f64>,
    /// Defaults to the stability bound when unset.
    pub dt: Option<f64>,
    pub sample_stride: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            rho11_0: 1.0,
            re_rho12_0: 0.0,
            im_rho12_0: 0.0,
            t_end: None,
            dt: None,
            sample_stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Overall prefactor K of the spectrum (all physical constants collapsed).
    pub prefactor: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { prefactor: 1.0 }
    }
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Rabi,
    Phi,
    KlHalf,
    Omega0,
    GammaOverride,
    Dipole,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Rabi => "rabi",
            SweepParameter::Phi => "phi",
            SweepParameter::KlHalf => "kl_half",
            SweepParameter::Omega0 => "omega0",
            SweepParameter::GammaOverride => "gamma_override",
            SweepParameter::Dipole => "dipole",
        }
    }

    pub fn apply(self, params: &mut AntennaParams, value: f64) {
        match self {
            SweepParameter::Rabi => params.rabi = value,
            SweepParameter::Phi => params.phi = value,
            SweepParameter::KlHalf => params.kl_half = value,
            SweepParameter::Omega0 => params.omega0 = value,
            SweepParameter::GammaOverride => params.gamma_override = Some(value),
            SweepParameter::Dipole => params.dipole = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub command: String,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// The published figure parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum PresetId {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl PresetId {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "fig2a" => Ok(PresetId::Fig2a),
            "fig2b" => Ok(PresetId::Fig2b),
            "fig3a" => Ok(PresetId::Fig3a),
            "fig3b" => Ok(PresetId::Fig3b),
            "fig4a" => Ok(PresetId::Fig4a),
            "fig4b" => Ok(PresetId::Fig4b),
            other => Err(CliError::Config(format!("unknown preset: {other}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PresetId::Fig2a => "fig2a",
            PresetId::Fig2b => "fig2b",
            PresetId::Fig3a => "fig3a",
            PresetId::Fig3b => "fig3b",
            PresetId::Fig4a => "fig4a",
            PresetId::Fig4b => "fig4b",
        }
    }

    pub const ALL: [PresetId; 6] = [
        PresetId::Fig2a,
        PresetId::Fig2b,
        PresetId::Fig3a,
        PresetId::Fig3b,
        PresetId::Fig4a,
        PresetId::Fig4b,
    ];
}

/// Antenna parameters of a figure preset (resonant drive, normalized units).
pub fn preset_params(id: PresetId) -> AntennaParams {
    use std::f64::consts::PI;
    let (kl_half, phi, rabi) = match id {
        PresetId::Fig2a => (2.0 * PI, 0.8, 0.001),
        PresetId::Fig2b => (2.0 * PI, 0.8, 0.2),
        PresetId::Fig3a => (4.0 * PI, 1.0, 0.2),
        PresetId::Fig3b => (4.0 * PI, 1.2, 0.2),
        PresetId::Fig4a => (15.0 * PI, 0.8, 0.2),
        PresetId::Fig4b => (15.0 * PI, 1.2, 0.2),
    };
    AntennaParams {
        omega0: 1.0,
        omega: 1.0,
        rabi,
        kl_half,
        phi,
        dipole: 0.0,
        prefactor_a: None,
        gamma_override: None,
    }
}

/// On-disk configuration; every key optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub params: Option<AntennaParams>,
    pub si: Option<SiParams>,
    pub flags: Option<ModeFlags>,
    pub theta: Option<ThetaGrid>,
    pub omega: Option<OmegaGrid>,
    pub output: Option<OutputSection>,
    pub dynamics: Option<DynamicsConfig>,
    pub spectrum: Option<SpectrumConfig>,
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: AntennaParams,
    pub flags: ModeFlags,
    pub theta: ThetaGrid,
    pub omega: OmegaGrid,
    pub dynamics: DynamicsConfig,
    pub spectrum: SpectrumConfig,
    pub sweep: Option<SweepConfig>,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: AntennaParams::default(),
            flags: ModeFlags::default(),
            theta: ThetaGrid::default(),
            omega: OmegaGrid::default(),
            dynamics: DynamicsConfig::default(),
            spectrum: SpectrumConfig::default(),
            sweep: None,
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    /// Load a TOML file and fold it over the defaults. An `[si]` block, when
    /// present, supersedes `[params]` after normalization.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let file: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        if let Some(p) = file.params {
            cfg.params = p;
        }
        if let Some(si) = file.si {
            cfg.params = si.normalize();
        }
        if let Some(f) = file.flags {
            cfg.flags = f;
        }
        if let Some(t) = file.theta {
            cfg.theta = t;
        }
        if let Some(w) = file.omega {
            cfg.omega = w;
        }
        if let Some(d) = file.dynamics {
            cfg.dynamics = d;
        }
        if let Some(s) = file.spectrum {
            cfg.spectrum = s;
        }
        cfg.sweep = file.sweep;
        if let Some(out) = file.output {
            if let Some(dir) = out.dir {
                cfg.out_dir = dir;
            }
            if let Some(fmt) = out.format {
                cfg.format = fmt;
            }
        }
        Ok(cfg)
    }
}
