//! Artifact writers. CSV numbers carry 12 significant digits; JSON reports
//! share the top-level layout `{config_echo, results, pass}`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const RATE_COLUMNS: [&str; 3] = ["E_meV", "d_nm", "rate_per_ps"];
pub const DISTANCE_COLUMNS: [&str; 5] = [
    "a_nm",
    "mass_multiplier",
    "tau1_inv_per_ps",
    "tau1_inv_uncorrelated_per_ps",
    "tauU_inv_per_ps",
];
pub const EVOLVE_COLUMNS: [&str; 6] = ["case_label", "t_ps", "fidelity", "linear_entropy", "trace_err", "min_eig"];

pub fn number(x: f64) -> String {
    format!("{x:.11e}")
}

/// A CSV cell: a label or a number.
pub enum Cell {
    Text(String),
    Num(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => number(*x),
        }
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct ConfigEcho<'a> {
    pub seed: u64,
    #[serde(flatten)]
    pub config: &'a RunConfig,
}

#[derive(Serialize)]
struct Report<'a, R: Serialize> {
    config_echo: ConfigEcho<'a>,
    results: &'a R,
    pass: bool,
}

pub fn write_report<R: Serialize>(
    path: &Path,
    echo: ConfigEcho<'_>,
    results: &R,
    pass: bool,
) -> Result<(), CliError> {
    let report = Report {
        config_echo: echo,
        results,
        pass,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn prepare_dir(dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir.to_path_buf())
}
