use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use svo_games::coords::Family;
use svo_games::error::SvoError;
use svo_games::scenario::{
    cmd_blowup, cmd_bounds, cmd_curve, cmd_equilibria, cmd_surface, cmd_trajectory, parse_list, parse_theta, CmdOutput,
    Format, Scenario,
};

#[derive(Parser)]
#[command(name = "svo-games", version, about = "SVO-Nash equilibrium analysis of two-player quadratic games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override, e.g. `spec=1e-10`. Repeatable.
    #[arg(long = "tol-override", value_name = "KEY=VAL")]
    tol_override: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
}

impl From<Fmt> for Format {
    fn from(f: Fmt) -> Self {
        match f {
            Fmt::Json => Format::Json,
            Fmt::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classical equilibria, assumption checks and cutoffs.
    Equilibria {
        #[command(flatten)]
        common: Common,
    },
    /// Sample one expansion curve.
    Curve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: Family,
        #[arg(long)]
        param: f64,
        /// Comma-separated t values; defaults to the scenario grid.
        #[arg(long = "t-grid")]
        t_grid: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Fmt,
    },
    /// Blow-up locus over a parameter grid.
    Blowup {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: Family,
        /// Parameter value. Repeatable; defaults to the scenario grid.
        #[arg(long)]
        param: Vec<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Fmt,
    },
    /// Four-ellipsoid enclosure of the SVO-Nash point at theta.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "F,F")]
        theta: String,
    },
    /// State trajectory of an LTV scenario (Nash unless --theta is given).
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "F,F")]
        theta: Option<String>,
    },
    /// Direct solves over the interior theta grid.
    Surface {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<Scenario, SvoError> {
    let text = std::fs::read_to_string(&common.scenario)
        .map_err(|e| SvoError::Scenario(format!("{}: {e}", common.scenario.display())))?;
    Scenario::from_json(&text, &common.tol_override)
}

fn run(cmd: &Command) -> Result<CmdOutput, SvoError> {
    match cmd {
        Command::Equilibria { common } => cmd_equilibria(&load(common)?),
        Command::Curve { common, family, param, t_grid, format } => {
            let grid = t_grid.as_deref().map(parse_list).transpose()?;
            cmd_curve(&load(common)?, *family, *param, grid, (*format).into())
        }
        Command::Blowup { common, family, param, format } => {
            let params = (!param.is_empty()).then(|| param.clone());
            cmd_blowup(&load(common)?, *family, params, (*format).into())
        }
        Command::Bounds { common, theta } => cmd_bounds(&load(common)?, parse_theta(theta)?),
        Command::Trajectory { common, theta } => {
            let theta = theta.as_deref().map(parse_theta).transpose()?;
            cmd_trajectory(&load(common)?, theta)
        }
        Command::Surface { common } => cmd_surface(&load(common)?),
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Equilibria { common }
        | Command::Curve { common, .. }
        | Command::Blowup { common, .. }
        | Command::Bounds { common, .. }
        | Command::Trajectory { common, .. }
        | Command::Surface { common } => common,
    }
}

fn fail(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("SVO_GAMES_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = match run(&cli.command) {
        Ok(out) => out,
        Err(e) => return fail(e.kind(), e.to_string()),
    };
    match &common(&cli.command).out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                return fail("Io", format!("{}: {e}", path.display()));
            }
        }
        None => print!("{}", out.text),
    }
    ExitCode::from(out.status as u8)
}
