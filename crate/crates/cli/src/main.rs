//! `qdiff`: solve quaternionic quadratics and ODEs, run scattering sweeps and
//! bound-state searches, and print deterministic CSV or JSON.

mod commands;
mod parse;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::parse::{parse_points, parse_quaternion, parse_sweep, Points, SweepSpec};
use qdiff_core::Quaternion;

#[derive(Parser, Debug)]
#[command(name = "qdiff", version, about = "Quaternionic differential equations and scattering")]
pub struct Cli {
    /// Reduced Planck constant.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    /// Particle mass.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub mass: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve p^2 + a p + b = 0; coefficients are a0 a1 a2 a3 b0 b1 b2 b3.
    Quad {
        #[arg(num_args = 8, value_name = "COEFF", allow_negative_numbers = true, required = true)]
        coefficients: Vec<f64>,
    },
    /// Solve an initial value problem and sample phi(x) as JSON.
    Ode(OdeArgs),
    /// Right eigenstructure of a 2x2 quaternionic matrix given row-major as 16 reals.
    Eig {
        #[arg(num_args = 16, value_name = "ENTRY", allow_negative_numbers = true, required = true)]
        entries: Vec<f64>,
    },
    /// Scattering off a quaternionic step or barrier as CSV.
    Scatter(ScatterArgs),
    /// Parameter sweep of step or barrier scattering.
    Sweep(SweepArgs),
    /// Bound states of a finite quaternionic well as JSON.
    Bound(BoundArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OdeKind {
    /// phi'' + a phi' + b phi = 0 with left-acting quaternions.
    H,
    /// phi'' + (a + ai R_i) phi' + (b + bi R_i) phi = 0.
    C,
}

#[derive(Args, Debug)]
pub struct OdeArgs {
    pub kind: OdeKind,
    /// Coefficient of phi' as `q0,q1,q2,q3`.
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true, default_value = "0,0,0,0")]
    pub a: Quaternion,
    /// Coefficient of phi.
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true, default_value = "0,0,0,0")]
    pub b: Quaternion,
    /// Right-i part of the phi' coefficient (kind c only).
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true, default_value = "0,0,0,0")]
    pub ai: Quaternion,
    /// Right-i part of the phi coefficient (kind c only).
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true, default_value = "0,0,0,0")]
    pub bi: Quaternion,
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
    pub phi0: Quaternion,
    #[arg(long, value_parser = parse_quaternion, allow_hyphen_values = true)]
    pub dphi0: Quaternion,
    /// Evaluation points, comma separated.
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true, default_value = "0,0.25,0.5,1")]
    pub x: Points,
    /// Append the sup-norm disagreement with an RK4 integration from 0.
    #[arg(long)]
    pub oracle: bool,
    /// RK4 steps for --oracle.
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScatterKind {
    Step,
    Barrier,
}

#[derive(Args, Debug, Clone)]
pub struct PotentialArgs {
    /// Energy.
    #[arg(long = "energy", visible_alias = "E", default_value_t = 2.0, allow_hyphen_values = true)]
    pub energy: f64,
    /// Real potential height.
    #[arg(long = "potential", visible_alias = "V", default_value_t = 1.0, allow_hyphen_values = true)]
    pub potential: f64,
    /// Modulus of the complex potential W.
    #[arg(long, default_value_t = 0.0)]
    pub wabs: f64,
    /// Argument of W in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub warg: f64,
    /// Barrier width.
    #[arg(long = "width", visible_alias = "a", default_value_t = 1.0)]
    pub width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct ScatterArgs {
    pub kind: ScatterKind,
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Sweep one parameter: `NAME:START:STOP:COUNT` with NAME in E, V, Wabs, a.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Option<SweepSpec>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub kind: ScatterKind,
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Swept parameter: E, V, Wabs or a.
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_hyphen_values = true)]
    pub start: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub stop: f64,
    #[arg(long)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Well depth.
    #[arg(long = "depth", visible_alias = "V", allow_hyphen_values = true)]
    pub depth: f64,
    /// Well width.
    #[arg(long = "width", visible_alias = "a", allow_hyphen_values = true)]
    pub width: f64,
    #[arg(long, default_value_t = 0.0)]
    pub wabs: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub warg: f64,
    /// Energy grid used to bracket minima.
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match commands::run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
