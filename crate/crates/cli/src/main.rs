use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qantenna::{Obliquity, PsiMode, ResonantSource};
use qantenna_cli::{exit_code, run_command, run_preset, CliError, Command, OutputFormat, PresetId, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PsiModeArg {
    Derived,
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObliquityArg {
    Sin2,
    Cos2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ResonantSourceArg {
    Consistent,
    PaperLiteral,
}

/// Driven two-level wire antenna simulator: radiation patterns, Mollow
/// spectra, master-equation dynamics, radiative rates, sweeps and figure
/// presets. All outputs are deterministic data files.
#[derive(Debug, Parser)]
#[command(name = "qantenna", version)]
struct Cli {
    /// TOML configuration file; command-line flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for data tables.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Sideband sinc-argument convention.
    #[arg(long, global = true, value_enum)]
    psi_mode: Option<PsiModeArg>,

    /// θ prefactor of the spectrum.
    #[arg(long, global = true, value_enum)]
    obliquity: Option<ObliquityArg>,

    /// Constant term of the resonant population equation.
    #[arg(long, global = true, value_enum)]
    resonant_source: Option<ResonantSourceArg>,

    /// Figure preset id (for the preset subcommand).
    #[arg(long, global = true, value_enum)]
    preset: Option<PresetId>,

    #[command(subcommand)]
    command: CommandArg,
}

#[derive(Debug, Subcommand)]
enum CommandArg {
    /// Three-component radiation pattern over the θ grid.
    Pattern,
    /// Angle-resolved power spectrum over the ω×θ grid.
    Spectrum,
    /// Density-matrix trajectory and steady-state summary.
    Dynamics,
    /// Radiative rate Γ(ω) over a frequency grid.
    Gamma,
    /// Repeat a command over a declared parameter list ([sweep] in config).
    Sweep,
    /// Run a published-figure preset (pattern + log-scale polar file).
    Preset {
        /// Preset id; may also be given via --preset.
        #[arg(value_enum)]
        id: Option<PresetId>,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(fmt) = cli.format {
        cfg.format = fmt;
    }
    if let Some(m) = cli.psi_mode {
        cfg.flags.psi_mode = match m {
            PsiModeArg::Derived => PsiMode::Derived,
            PsiModeArg::PaperLiteral => PsiMode::PaperLiteral,
        };
    }
    if let Some(o) = cli.obliquity {
        cfg.flags.obliquity = match o {
            ObliquityArg::Sin2 => Obliquity::Sin2,
            ObliquityArg::Cos2 => Obliquity::Cos2,
        };
    }
    if let Some(r) = cli.resonant_source {
        cfg.flags.resonant_source = match r {
            ResonantSourceArg::Consistent => ResonantSource::Consistent,
            ResonantSourceArg::PaperLiteral => ResonantSource::PaperLiteral,
        };
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let cfg = build_config(cli)?;
    // A preset id pins the command to `preset`.
    if cli.preset.is_some() && !matches!(cli.command, CommandArg::Preset { .. }) {
        return Err(CliError::Config(
            "--preset implies the preset command".into(),
        ));
    }
    match &cli.command {
        CommandArg::Pattern => run_command(&cfg, Command::Pattern),
        CommandArg::Spectrum => run_command(&cfg, Command::Spectrum),
        CommandArg::Dynamics => run_command(&cfg, Command::Dynamics),
        CommandArg::Gamma => run_command(&cfg, Command::Gamma),
        CommandArg::Sweep => run_command(&cfg, Command::Sweep),
        CommandArg::Preset { id } => {
            let id = id.or(cli.preset).ok_or_else(|| {
                CliError::Config("preset id required (positional or --preset)".into())
            })?;
            run_preset(&cfg, id)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors are exit code 1 by convention (clap defaults to 2).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
