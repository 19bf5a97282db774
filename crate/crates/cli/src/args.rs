use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "slabwell", version, about = "Bound states of 1D potentials between infinite walls")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan an energy window and refine every level found.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Keep the lowest this many levels; without `--scan`, widen the window until found.
        #[arg(long)]
        levels: Option<usize>,
        /// Literature value to report next to a level, e.g. `1:Alhendi=4.58734092`.
        #[arg(long = "reference", value_name = "LEVEL:LABEL=VALUE")]
        references: Vec<String>,
    },
    /// Rebuild and sample the eigenfunction of one level.
    Wavefunction {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        level: Option<usize>,
        /// Output samples, walls included (rounded up to an odd count).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Tabulate the lowest levels against the slab count.
    Convergence {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "n-values", value_delimiter = ',', num_args = 1..)]
        n_values: Option<Vec<i64>>,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Finite-difference reference spectrum, optionally side by side with the solver.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
        /// Add a run at doubled resolution and extrapolate.
        #[arg(long)]
        richardson: bool,
        /// Add solver energies and their deltas.
        #[arg(long)]
        compare: bool,
        #[arg(long = "reference", value_name = "LEVEL:LABEL=VALUE")]
        references: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Potential, e.g. `harmonic`, `poly:1*x^2+1*x^4`, `morse:400,1`, `table:path.csv`.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub walls: Option<Vec<f64>>,
    /// Number of interior slab boundaries; the interval is cut into n+1 slabs.
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    #[arg(long, num_args = 2, value_names = ["EMIN", "EMAX"], allow_negative_numbers = true)]
    pub scan: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub de: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub potential: Option<String>,
    pub walls: Option<[f64; 2]>,
    pub n: Option<i64>,
    pub scan: Option<[f64; 2]>,
    pub de: Option<f64>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub level: Option<usize>,
    pub points: Option<usize>,
    pub n_values: Option<Vec<i64>>,
    pub levels: Option<usize>,
    pub grid_points: Option<usize>,
    pub richardson: Option<bool>,
    pub compare: Option<bool>,
    #[serde(default)]
    pub references: Vec<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
    }
}

/// Settings shared by every command after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: String,
    pub walls: (f64, f64),
    pub n: usize,
    pub scan: Option<(f64, f64)>,
    pub de: f64,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_N: usize = 2000;
pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_GRID_POINTS: usize = 4001;
pub const DEFAULT_ORACLE_LEVELS: usize = 4;

impl CommonArgs {
    pub fn file_config(&self) -> Result<FileConfig, CliError> {
        match &self.config {
            Some(path) => FileConfig::load(path),
            None => Ok(FileConfig::default()),
        }
    }

    pub fn resolve(&self, file: &FileConfig) -> Result<RunConfig, CliError> {
        let potential = self
            .potential
            .clone()
            .or_else(|| file.potential.clone())
            .ok_or_else(|| CliError::Usage("--potential is required".into()))?;
        let walls = match (&self.walls, file.walls) {
            (Some(w), _) => (w[0], w[1]),
            (None, Some([a, b])) => (a, b),
            (None, None) => return Err(CliError::Usage("--walls is required".into())),
        };
        if !(walls.0.is_finite() && walls.1.is_finite() && walls.0 < walls.1) {
            return Err(CliError::Usage(format!(
                "--walls: need finite a < b, got {} {}",
                walls.0, walls.1
            )));
        }
        let n = slab_count(self.n.or(file.n).unwrap_or(DEFAULT_N as i64), "--n")?;
        let scan = match (&self.scan, file.scan) {
            (Some(s), _) => Some((s[0], s[1])),
            (None, Some([lo, hi])) => Some((lo, hi)),
            (None, None) => None,
        };
        if let Some((lo, hi)) = scan {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Usage(format!("--scan: need finite Emin < Emax, got {lo} {hi}")));
            }
        }
        let de = self.de.or(file.de).unwrap_or(slabwell::spectrum::DEFAULT_DE);
        if !(de.is_finite() && de > 0.0) {
            return Err(CliError::Usage(format!("--de must be > 0, got {de}")));
        }
        let tol = self.tol.or(file.tol).unwrap_or(slabwell::spectrum::DEFAULT_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be > 0, got {tol}")));
        }
        Ok(RunConfig {
            potential,
            walls,
            n,
            scan,
            de,
            tol,
            format: self.format.or(file.format).unwrap_or(Format::Csv),
            out: self.out.clone().or_else(|| file.out.clone()),
        })
    }
}

pub fn slab_count(n: i64, flag: &str) -> Result<usize, CliError> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("{flag} must be >= 0, got {n}")))
}

/// A `LEVEL:LABEL=VALUE` literature value.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub index: usize,
    pub label: String,
    pub value: f64,
}

impl Reference {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("--reference: expected LEVEL:LABEL=VALUE, got {text:?}"));
        let (index, rest) = text.split_once(':').ok_or_else(bad)?;
        let (label, value) = rest.rsplit_once('=').ok_or_else(bad)?;
        let index = index.trim().parse().map_err(|_| bad())?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        if label.trim().is_empty() || !value.is_finite() {
            return Err(bad());
        }
        Ok(Self {
            index,
            label: label.trim().to_string(),
            value,
        })
    }

    pub fn parse_all(flags: &[String], file: &FileConfig) -> Result<Vec<Self>, CliError> {
        let source = if flags.is_empty() { &file.references } else { flags };
        source.iter().map(|s| Self::parse(s)).collect()
    }
}
