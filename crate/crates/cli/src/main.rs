use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use paratensor::levi_civita::RicciMode;
use paratensor::manifest::{Loaded, Manifest, PotentialSpec};
use paratensor::pipeline::{run, Command, RunOptions};
use paratensor::Rational;

#[derive(Parser)]
#[command(name = "paratensor", version, about = "Verify (epsilon)-almost paracontact structures and eta-Ricci solitons")]
struct Cli {
    #[command(subcommand)]
    command: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Structure axioms, metric compatibility, epsilon and signature.
    Validate(Target),
    /// Connection and curvature tables with the symbolic property suite.
    Curvature(Target),
    /// Para-Sasakian conditions and their curvature identities.
    Sasakian(Target),
    /// Fit S = a g + b g(phi.,.) + c eta(x)eta.
    EinsteinFit(Target),
    /// Check or solve the eta-Ricci soliton equation.
    Soliton {
        #[command(subcommand)]
        action: SolitonAction,
    },
    /// Torse-forming classification of xi.
    Torse(Target),
    /// Potential fields collinear with xi.
    Collinear(Target),
    /// Parallel symmetric (0,2) tensors.
    Parallel(Target),
    /// Finite-difference comparison of the symbolic results.
    Oracle(Target),
    /// Every analysis in one report.
    Report {
        #[arg(long, required = true)]
        all: bool,
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Subcommand)]
enum SolitonAction {
    Check(Target),
    Solve(Target),
}

#[derive(Args)]
struct Target {
    /// Manifest path; a missing `.json` extension is tried as well.
    manifest: PathBuf,
    #[arg(long, value_parser = parse_mode)]
    ricci_mode: Option<RicciMode>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Finite-difference step for the oracle.
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
    /// Relative tolerance for the oracle.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Comma-separated rationals replacing the manifest base point.
    #[arg(long)]
    base_point: Option<String>,
    /// `xi`, `k*xi`, or comma-separated components.
    #[arg(long)]
    potential: Option<String>,
}

fn parse_mode(s: &str) -> Result<RicciMode, String> {
    s.parse()
}

fn resolve(path: &Path) -> PathBuf {
    if !path.exists() && path.extension().is_none() {
        let with_ext = path.with_extension("json");
        if with_ext.exists() {
            return with_ext;
        }
    }
    path.to_path_buf()
}

fn load(target: &Target) -> Result<Loaded, String> {
    let mut manifest = Manifest::read(&resolve(&target.manifest)).map_err(|e| e.to_string())?;
    if let Some(p) = &target.potential {
        manifest.potential = Some(if p.contains(',') {
            PotentialSpec::Components(p.split(',').map(|s| s.trim().to_string()).collect())
        } else {
            PotentialSpec::Named(p.clone())
        });
    }
    let base_point = target
        .base_point
        .as_ref()
        .map(|text| {
            text.split(',')
                .map(|s| symexpr::parse_rational(s.trim()).map_err(|_| format!("--base-point: '{s}' is not a rational")))
                .collect::<Result<Vec<Rational>, String>>()
        })
        .transpose()?;
    Loaded::from_manifest(manifest, base_point).map_err(|e| e.to_string())
}

fn execute(command: Command, target: &Target) -> Result<ExitCode, String> {
    let loaded = load(target)?;
    let opts = RunOptions {
        ricci_mode: target.ricci_mode,
        seed: target.seed,
        h: target.h,
        tolerance: target.tolerance,
    };
    let report = run(command, &loaded, &opts).map_err(|e| e.to_string())?;
    if target.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.render_table());
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, target) = match &cli.command {
        Verb::Validate(t) => (Command::Validate, t),
        Verb::Curvature(t) => (Command::Curvature, t),
        Verb::Sasakian(t) => (Command::Sasakian, t),
        Verb::EinsteinFit(t) => (Command::EinsteinFit, t),
        Verb::Soliton {
            action: SolitonAction::Check(t),
        } => (Command::SolitonCheck, t),
        Verb::Soliton {
            action: SolitonAction::Solve(t),
        } => (Command::SolitonSolve, t),
        Verb::Torse(t) => (Command::Torse, t),
        Verb::Collinear(t) => (Command::Collinear, t),
        Verb::Parallel(t) => (Command::Parallel, t),
        Verb::Oracle(t) => (Command::Oracle, t),
        Verb::Report { target, .. } => (Command::All, target),
    };
    match execute(command, target) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
