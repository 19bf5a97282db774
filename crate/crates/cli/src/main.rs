mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{slab_count, Cli, Command, Reference, DEFAULT_GRID_POINTS, DEFAULT_ORACLE_LEVELS, DEFAULT_POINTS};
use commands::OracleRequest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NotFound(String),
    #[error(transparent)]
    Solver(#[from] slabwell::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use slabwell::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::NotFound(_) => 3,
            CliError::Solver(e) => match e {
                E::Parse { .. } | E::Validation { .. } | E::Domain(_) | E::Io { .. } => 2,
                E::InvalidBracket { .. } | E::StaleEnergy { .. } | E::Numerical(_) => 4,
            },
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { common, levels, references } => {
            let file = common.file_config()?;
            let cfg = common.resolve(&file)?;
            let references = Reference::parse_all(&references, &file)?;
            let levels = levels.or(file.levels);
            if levels == Some(0) {
                return Err(CliError::Usage("--levels must be >= 1".into()));
            }
            commands::cmd_solve(&cfg, levels, &references)
        }
        Command::Wavefunction { common, level, points } => {
            let file = common.file_config()?;
            let cfg = common.resolve(&file)?;
            let level = level
                .or(file.level)
                .ok_or_else(|| CliError::Usage("--level is required".into()))?;
            let points = points.or(file.points).unwrap_or(DEFAULT_POINTS);
            if points < 2 {
                return Err(CliError::Usage(format!("--points must be >= 2, got {points}")));
            }
            commands::cmd_wavefunction(&cfg, level, points)
        }
        Command::Convergence { common, n_values, levels } => {
            let file = common.file_config()?;
            let cfg = common.resolve(&file)?;
            let n_values = n_values
                .or_else(|| file.n_values.clone())
                .ok_or_else(|| CliError::Usage("--n-values is required".into()))?
                .into_iter()
                .map(|n| slab_count(n, "--n-values"))
                .collect::<Result<Vec<_>, _>>()?;
            let levels = levels.or(file.levels);
            if levels == Some(0) {
                return Err(CliError::Usage("--levels must be >= 1".into()));
            }
            commands::cmd_convergence(&cfg, &n_values, levels)
        }
        Command::Oracle {
            common,
            levels,
            grid_points,
            richardson,
            compare,
            references,
        } => {
            let file = common.file_config()?;
            let cfg = common.resolve(&file)?;
            let references = Reference::parse_all(&references, &file)?;
            let request = OracleRequest {
                levels: levels.or(file.levels).unwrap_or(DEFAULT_ORACLE_LEVELS),
                grid_points: grid_points.or(file.grid_points).unwrap_or(DEFAULT_GRID_POINTS),
                richardson: richardson || file.richardson.unwrap_or(false),
                compare: compare || file.compare.unwrap_or(false),
                references: &references,
            };
            commands::cmd_oracle(&cfg, &request)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
