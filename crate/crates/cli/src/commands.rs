//! Command execution: compute, then write deterministic tables.

use std::path::{Path, PathBuf};

use serde_json::json;

use qantenna::{
    dressed_basis, gamma_integral, integrate, line_analysis, pattern_grid, spectrum_grid,
    steady_state_report, validate, DensityMatrix, IntegrateOptions, RateModel, RhsVariant,
    Trajectory, ValidatedParams,
};

use crate::config::{OutputFormat, PresetId, RunConfig, SweepParameter};
use crate::output::{db_clamped, write_csv, write_json, Table};

#[derive(Debug)]
pub enum CliError {
    /// Bad usage or configuration (exit code 1).
    Config(String),
    /// Filesystem problem (exit code 1).
    Io(std::io::Error),
    /// A computation failed to converge or hit a singular case (exit code 2).
    Numerical(qantenna::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Numerical(e) => write!(f, "numerical error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qantenna::Error> for CliError {
    fn from(e: qantenna::Error) -> Self {
        use qantenna::Error::*;
        match e {
            NonPositiveFrequency { .. } | UltraStrongCoupling { .. } | NegativeLength { .. }
            | NegativeDipole { .. } | InvalidEnvelope(_) => CliError::Config(e.to_string()),
            QuadratureNonConvergence { .. } | StepTooLarge { .. }
            | NonHermitianInitialState { .. } | SingularSystem { .. } => CliError::Numerical(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Pattern,
    Spectrum,
    Dynamics,
    Gamma,
    Sweep,
    Preset(PresetId),
}

impl Command {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "pattern" => Ok(Command::Pattern),
            "spectrum" => Ok(Command::Spectrum),
            "dynamics" => Ok(Command::Dynamics),
            "gamma" => Ok(Command::Gamma),
            other => Err(CliError::Config(format!(
                "sweep cannot repeat command '{other}' (one of: pattern, spectrum, dynamics, gamma)"
            ))),
        }
    }
}

fn config_json(cfg: &RunConfig, vp: &ValidatedParams) -> serde_json::Value {
    json!({
        "params": cfg.params,
        "resolved": vp,
        "flags": cfg.flags,
        "theta": cfg.theta,
        "omega": cfg.omega,
        "dynamics": cfg.dynamics,
        "spectrum": cfg.spectrum,
    })
}

fn base_meta(cmd: &str, cfg: &RunConfig, vp: &ValidatedParams) -> Vec<String> {
    let mut meta = vec![
        format!("qantenna {cmd}"),
        format!("params = {}", serde_json::to_string(&cfg.params).unwrap()),
        format!("flags = {}", serde_json::to_string(&cfg.flags).unwrap()),
    ];
    for w in vp.warnings() {
        meta.push(format!("warning: {w}"));
    }
    meta
}

fn write_table(
    cfg: &RunConfig,
    vp: &ValidatedParams,
    dir: &Path,
    stem: &str,
    table: &Table,
) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{stem}.{}", cfg.format.extension()));
    match cfg.format {
        OutputFormat::Csv => write_csv(&path, table)?,
        OutputFormat::Json => write_json(&path, table, config_json(cfg, vp))?,
    }
    Ok(path)
}

/// Execute a command, writing files prefixed with `prefix` into the output
/// directory; returns the written paths.
fn execute(cfg: &RunConfig, cmd: Command, prefix: &str) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let vp = validate(&cfg.params)?;
    match cmd {
        Command::Pattern => run_pattern(cfg, &vp, prefix),
        Command::Spectrum => run_spectrum(cfg, &vp, prefix),
        Command::Dynamics => run_dynamics(cfg, &vp, prefix),
        Command::Gamma => run_gamma(cfg, &vp, prefix),
        Command::Preset(id) => run_preset_inner(cfg, id, prefix),
        Command::Sweep => run_sweep(cfg),
    }
}

/// Run one command with the given configuration.
pub fn run_command(cfg: &RunConfig, cmd: Command) -> Result<Vec<PathBuf>, CliError> {
    execute(cfg, cmd, "")
}

/// Run a figure preset: the preset parameters override whatever `cfg.params`
/// holds; flags, grids and output settings are taken from `cfg`.
pub fn run_preset(cfg: &RunConfig, id: PresetId) -> Result<Vec<PathBuf>, CliError> {
    let mut preset_cfg = cfg.clone();
    preset_cfg.params = crate::config::preset_params(id);
    execute(&preset_cfg, Command::Preset(id), "")
}

fn theta_radians(cfg: &RunConfig) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let deg = cfg.theta.values_deg()?;
    let rad = deg.iter().map(|d| d.to_radians()).collect();
    Ok((deg, rad))
}

fn run_pattern(
    cfg: &RunConfig,
    vp: &ValidatedParams,
    prefix: &str,
) -> Result<Vec<PathBuf>, CliError> {
    let (deg, rad) = theta_radians(cfg)?;
    let points = pattern_grid(vp, cfg.flags.psi_mode, &rad);
    let mut table = Table::new(&["theta_deg", "xi_total", "xi_central", "xi_plus", "xi_minus"]);
    table.meta = base_meta("pattern", cfg, vp);
    table.push_meta(format!(
        "theta = {}",
        serde_json::to_string(&cfg.theta).unwrap()
    ));
    for (d, p) in deg.iter().zip(&points) {
        table.push_row(vec![*d, p.xi_total, p.xi_central, p.xi_plus, p.xi_minus]);
    }
    Ok(vec![write_table(
        cfg,
        vp,
        &cfg.out_dir,
        &format!("{prefix}pattern"),
        &table,
    )?])
}

fn run_spectrum(
    cfg: &RunConfig,
    vp: &ValidatedParams,
    prefix: &str,
) -> Result<Vec<PathBuf>, CliError> {
    let (deg, rad) = theta_radians(cfg)?;
    let omegas = cfg.omega.values(vp.omega0(), vp.rabi())?;
    let model = RateModel::from_params(vp);
    let gamma = model.gamma_at_drive(vp)?;
    let points = spectrum_grid(vp, &cfg.flags, gamma, cfg.spectrum.prefactor, &omegas, &rad);

    let mut table = Table::new(&["omega", "theta_deg", "s_total", "s_central", "s_plus", "s_minus"]);
    table.meta = base_meta("spectrum", cfg, vp);
    table.push_meta(format!("gamma = {}", crate::output::fmt_float(gamma)));
    table.push_meta(format!(
        "prefactor = {}",
        crate::output::fmt_float(cfg.spectrum.prefactor)
    ));
    table.push_meta(format!(
        "theta = {}",
        serde_json::to_string(&cfg.theta).unwrap()
    ));
    table.push_meta(format!(
        "omega_grid = {}",
        serde_json::to_string(&cfg.omega).unwrap()
    ));
    let mut idx = 0;
    for d in &deg {
        for _ in &omegas {
            let p = &points[idx];
            table.push_row(vec![p.omega, *d, p.s_value, p.s_central, p.s_plus, p.s_minus]);
            idx += 1;
        }
    }
    Ok(vec![write_table(
        cfg,
        vp,
        &cfg.out_dir,
        &format!("{prefix}spectrum"),
        &table,
    )?])
}

fn trajectory_table(cfg: &RunConfig, vp: &ValidatedParams, traj: &Trajectory) -> Table {
    let mut table = Table::new(&["t", "rho11", "re_rho12", "im_rho12", "re_rho21", "im_rho21"]);
    table.meta = base_meta("dynamics", cfg, vp);
    table.push_meta(format!("variant = {}", traj.variant));
    table.push_meta(format!("dt = {}", crate::output::fmt_float(traj.dt)));
    table.push_meta(format!("params_hash = {:#018x}", traj.params_hash));
    for &(t, r) in &traj.samples {
        table.push_row(vec![t, r.rho11, r.rho12.re, r.rho12.im, r.rho21.re, r.rho21.im]);
    }
    table
}

fn run_dynamics(
    cfg: &RunConfig,
    vp: &ValidatedParams,
    prefix: &str,
) -> Result<Vec<PathBuf>, CliError> {
    let model = RateModel::from_params(vp);
    let gamma = model.gamma_at_drive(vp)?;
    let basis = dressed_basis(vp.detuning(), vp.rabi());

    let t_end = match cfg.dynamics.t_end {
        Some(t) => t,
        None if gamma > 0.0 => 40.0 / gamma,
        None => {
            return Err(CliError::Config(
                "dynamics.t_end is required when the radiative rate is zero".into(),
            ))
        }
    };
    let rho0 = DensityMatrix::new_hermitian(
        cfg.dynamics.rho11_0,
        qantenna::Complex64::new(cfg.dynamics.re_rho12_0, cfg.dynamics.im_rho12_0),
    );
    let opts = IntegrateOptions {
        dt: cfg.dynamics.dt,
        auto_shrink: true,
        sample_stride: cfg.dynamics.sample_stride.max(1),
    };

    let rates;
    let variant = if vp.detuning() == 0.0 {
        RhsVariant::Resonant {
            gamma,
            nu: basis.nu,
            source: cfg.flags.resonant_source,
        }
    } else {
        rates = model.relaxation(vp, &basis)?;
        RhsVariant::General {
            basis: &basis,
            rates: &rates,
        }
    };
    let traj = integrate(&rho0, variant, t_end, &opts)?;

    let mut files = Vec::new();
    let table = trajectory_table(cfg, vp, &traj);
    files.push(write_table(
        cfg,
        vp,
        &cfg.out_dir,
        &format!("{prefix}trajectory"),
        &table,
    )?);

    // Steady-state summary: both routes, their discrepancy, and whether the
    // integrated end state reached the printed diagonal-1/2 steady state.
    let report = steady_state_report(gamma, basis.nu);
    let end = traj.final_state();
    let matches_half = ((end.rho11 - 0.5).abs() <= 1e-6) as i32 as f64;
    let (closed_rho11, closed_re, closed_im) = match &report.closed_form {
        Some(m) => (m.rho11, m.rho12.re, m.rho12.im),
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    let mut summary = Table::new(&[
        "rho11_final",
        "re_rho12_final",
        "im_rho12_final",
        "rho11_linear",
        "re_rho12_linear",
        "im_rho12_linear",
        "rho11_closed",
        "re_rho12_closed",
        "im_rho12_closed",
        "methods_discrepancy",
        "closed_form_singular",
        "matches_printed_steady_state",
    ]);
    summary.meta = base_meta("dynamics steady-state summary", cfg, vp);
    if matches_half == 0.0 {
        summary.push_meta(
            "steady-state mismatch: final rho11 differs from the printed value 1/2",
        );
    }
    summary.push_row(vec![
        end.rho11,
        end.rho12.re,
        end.rho12.im,
        report.linear_solve.rho11,
        report.linear_solve.rho12.re,
        report.linear_solve.rho12.im,
        closed_rho11,
        closed_re,
        closed_im,
        report.discrepancy.unwrap_or(f64::NAN),
        report.analytic_singular as i32 as f64,
        matches_half,
    ]);
    files.push(write_table(
        cfg,
        vp,
        &cfg.out_dir,
        &format!("{prefix}steady_state"),
        &summary,
    )?);
    Ok(files)
}

fn run_gamma(
    cfg: &RunConfig,
    vp: &ValidatedParams,
    prefix: &str,
) -> Result<Vec<PathBuf>, CliError> {
    let omegas = cfg.omega.values(vp.omega0(), vp.rabi())?;
    let model = RateModel::from_params(vp);
    // Effective squared dipole, for the point-emitter analytic reference
    // Γ_ref = (2/3) d² ω³ / π.
    let d_sq = match model {
        RateModel::Dipole { dipole } => dipole * dipole,
        RateModel::Pinned { gamma_at_drive } => {
            let i0 = gamma_integral(vp.omega(), &vp.envelope(), vp.length())
                .map_err(CliError::from)?;
            std::f64::consts::PI * gamma_at_drive / (vp.omega().powi(3) * i0)
        }
    };

    let gammas: Vec<Result<f64, qantenna::Error>> =
        qantenna::map_grid(&omegas, |&w| model.gamma(w, vp));

    let mut table = Table::new(&["omega", "gamma", "gamma_point_ref"]);
    table.meta = base_meta("gamma", cfg, vp);
    table.push_meta(format!(
        "omega_grid = {}",
        serde_json::to_string(&cfg.omega).unwrap()
    ));
    for (w, g) in omegas.iter().zip(gammas) {
        let g = g.map_err(CliError::from)?;
        let point_ref = (2.0 / 3.0) * d_sq * w.powi(3) / std::f64::consts::PI;
        table.push_row(vec![*w, g, point_ref]);
    }
    Ok(vec![write_table(
        cfg,
        vp,
        &cfg.out_dir,
        &format!("{prefix}gamma"),
        &table,
    )?])
}

fn run_preset_inner(
    cfg: &RunConfig,
    id: PresetId,
    prefix: &str,
) -> Result<Vec<PathBuf>, CliError> {
    let vp = validate(&cfg.params)?;
    let (deg, rad) = theta_radians(cfg)?;
    let points = pattern_grid(&vp, cfg.flags.psi_mode, &rad);

    let mut linear = Table::new(&["theta_deg", "xi_total", "xi_central", "xi_plus", "xi_minus"]);
    linear.meta = base_meta(&format!("preset {}", id.name()), cfg, &vp);
    for (d, p) in deg.iter().zip(&points) {
        linear.push_row(vec![*d, p.xi_total, p.xi_central, p.xi_plus, p.xi_minus]);
    }

    // Polar plot data: dB relative to the pattern maximum, clamped at -60 dB.
    let reference = points.iter().map(|p| p.xi_total).fold(0.0, f64::max);
    let mut polar = Table::new(&["theta_deg", "db_total", "db_central", "db_plus", "db_minus"]);
    polar.meta = base_meta(&format!("preset {} (log scale)", id.name()), cfg, &vp);
    polar.push_meta(format!(
        "reference = {} (0 dB); floor = -60 dB",
        crate::output::fmt_float(reference)
    ));
    for (d, p) in deg.iter().zip(&points) {
        polar.push_row(vec![
            *d,
            db_clamped(p.xi_total, reference),
            db_clamped(p.xi_central, reference),
            db_clamped(p.xi_plus, reference),
            db_clamped(p.xi_minus, reference),
        ]);
    }

    // Beam-angle summary goes into the linear table's metadata.
    let la = line_analysis(&vp, cfg.flags.psi_mode, &rad);
    for (name, beam) in [("central", la.central), ("plus", la.plus), ("minus", la.minus)] {
        match beam.beam_angle_deg {
            Some(a) => linear.push_meta(format!(
                "{name} line: beam angle {:.4} deg, phi_cr = {:.6}, lobes = {}",
                a, beam.phi_cr, beam.lobe_count
            )),
            None => linear.push_meta(format!(
                "{name} line: main lobe invisible (phi_cr = {:.6}), lobes = {}",
                beam.phi_cr, beam.lobe_count
            )),
        }
    }

    let name = id.name();
    Ok(vec![
        write_table(cfg, &vp, &cfg.out_dir, &format!("{prefix}{name}_pattern"), &linear)?,
        write_table(cfg, &vp, &cfg.out_dir, &format!("{prefix}{name}_polar"), &polar)?,
    ])
}

fn sweep_point(
    cfg: &RunConfig,
    cmd: Command,
    parameter: SweepParameter,
    index: usize,
    value: f64,
) -> Result<Vec<PathBuf>, CliError> {
    let mut point_cfg = cfg.clone();
    parameter.apply(&mut point_cfg.params, value);
    let prefix = format!("{}_{index:03}_", parameter.name());
    execute(&point_cfg, cmd, &prefix)
}

fn run_sweep(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep requested but no [sweep] section given".into()))?;
    if sweep.values.is_empty() {
        return Err(CliError::Config("sweep.values is empty".into()));
    }
    let cmd = Command::parse(&sweep.command)?;

    let indexed: Vec<(usize, f64)> = sweep.values.iter().copied().enumerate().collect();

    #[cfg(feature = "parallel")]
    let results: Vec<Result<Vec<PathBuf>, CliError>> = {
        use rayon::prelude::*;
        indexed
            .par_iter()
            .map(|&(i, v)| sweep_point(cfg, cmd, sweep.parameter, i, v))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<Vec<PathBuf>, CliError>> = indexed
        .iter()
        .map(|&(i, v)| sweep_point(cfg, cmd, sweep.parameter, i, v))
        .collect();

    let mut files = Vec::new();
    let mut points = Vec::new();
    for (&(i, v), res) in indexed.iter().zip(results) {
        let written = res?;
        points.push(json!({
            "index": i,
            "value": v,
            "files": written
                .iter()
                .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
                .collect::<Vec<_>>(),
        }));
        files.extend(written);
    }

    let manifest = json!({
        "command": sweep.command,
        "parameter": sweep.parameter.name(),
        "values": sweep.values,
        "params": cfg.params,
        "flags": cfg.flags,
        "points": points,
    });
    let manifest_path = cfg.out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest json");
    text.push('\n');
    std::fs::write(&manifest_path, text)?;
    files.push(manifest_path);
    Ok(files)
}
