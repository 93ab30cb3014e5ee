//! Data products written after a run.
//!
//! Numbers use Rust's shortest round-trip `f64` formatting, so reading a CSV
//! back recovers the in-memory values bit for bit and identical runs produce
//! identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use curio_core::{ExperimentResult, Grid, TrialResult};

use crate::config::RunConfig;
use crate::CliError;

pub const VALUES_MEAN: &str = "values_mean.csv";
pub const VALUES_STD: &str = "values_std.csv";
pub const SERIES: &str = "series.csv";
pub const CONFIG_ECHO: &str = "config_echo.json";
pub const HEATMAP: &str = "heatmap.pgm";
pub const HEATMAP_NOTE: &str = "heatmap.txt";
pub const STEP_LOG_DIR: &str = "steps";

pub const SERIES_HEADER: &str =
    "step,v_inducing_mean,v_inducing_std,v_satisfying_mean,v_satisfying_std";

/// What a run wrote, relative to `out_dir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputManifest {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// One line per grid row, no header. Row 0 is the top of the grid.
pub fn grid_csv(grid: &Grid<f64>) -> String {
    let mut out = String::new();
    for row in grid.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_grid_csv(text: &str) -> Result<Grid<f64>, String> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|line| {
            line.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let size = rows.len();
    if rows.iter().any(|r| r.len() != size) {
        return Err(format!("expected a square {size}x{size} table"));
    }
    Grid::from_row_major(size, rows.into_iter().flatten().collect())
        .ok_or_else(|| "malformed table".to_owned())
}

pub fn series_csv(result: &ExperimentResult) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for s in &result.series {
        writeln!(
            out,
            "{},{},{},{},{}",
            s.step, s.v_inducing_mean, s.v_inducing_std, s.v_satisfying_mean, s.v_satisfying_std
        )
        .unwrap();
    }
    out
}

/// Plain (P2) PGM, one pixel per cell: the smallest value is white (255)
/// and the largest black (0), linear in between. A constant table is all
/// white. Returns the image and the `(min, max)` used for scaling.
pub fn heatmap_pgm(grid: &Grid<f64>) -> (String, f64, f64) {
    let values = grid.as_slice();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    let size = grid.size();
    let mut out = format!("P2\n{size} {size}\n255\n");
    for row in grid.rows() {
        let line: Vec<String> = row
            .iter()
            .map(|&v| {
                let level = if range > 0.0 {
                    255.0 * (max - v) / range
                } else {
                    255.0
                };
                (level.round() as u8).to_string()
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    (out, min, max)
}

fn heatmap_note(min: f64, max: f64) -> String {
    format!(
        "heatmap.pgm: mean persistent value per cell, one pixel per cell, row 0 at the top.\n\
         Grey level = round(255 * (max - v) / (max - min)); min maps to white, max to black.\n\
         min = {min}\nmax = {max}\n"
    )
}

pub fn step_log_csv(trial: &TrialResult) -> Option<String> {
    let steps = trial.steps.as_ref()?;
    let mut out = String::from(
        "step,from_row,from_col,action,to_row,to_col,target_row,target_col,temp_value,delta,value_after,triggered,satisfied\n",
    );
    for (i, t) in steps.iter().enumerate() {
        let (tr, tc) = match t.target {
            Some(p) => (p.row.to_string(), p.col.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            i + 1,
            t.from.row,
            t.from.col,
            t.action,
            t.to.row,
            t.to.col,
            tr,
            tc,
            t.temp_at_from,
            t.delta,
            t.value_after,
            t.triggered as u8,
            t.satisfied as u8
        )
        .unwrap();
    }
    Some(out)
}

fn write(out_dir: &Path, name: impl AsRef<Path>, contents: &str) -> Result<PathBuf, CliError> {
    let rel = name.as_ref().to_path_buf();
    let path = out_dir.join(&rel);
    fs::write(&path, contents).map_err(|source| CliError::Io { path, source })?;
    Ok(rel)
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes every requested product into `run.out_dir`.
pub fn emit_outputs(
    result: &ExperimentResult,
    run: &RunConfig,
) -> Result<OutputManifest, CliError> {
    let dir = &run.out_dir;
    create_dir(dir)?;
    let mut files = vec![
        write(dir, VALUES_MEAN, &grid_csv(&result.mean_values))?,
        write(dir, VALUES_STD, &grid_csv(&result.std_values))?,
        write(dir, SERIES, &series_csv(result))?,
    ];
    let echo = serde_json::to_string_pretty(&run.echo()).map_err(|e| CliError::Io {
        path: dir.join(CONFIG_ECHO),
        source: io::Error::other(e),
    })?;
    files.push(write(dir, CONFIG_ECHO, &(echo + "\n"))?);

    if run.emit_heatmap {
        let (pgm, min, max) = heatmap_pgm(&result.mean_values);
        files.push(write(dir, HEATMAP, &pgm)?);
        files.push(write(dir, HEATMAP_NOTE, &heatmap_note(min, max))?);
    }
    if run.emit_step_logs {
        create_dir(&dir.join(STEP_LOG_DIR))?;
        for trial in &result.trials {
            if let Some(csv) = step_log_csv(trial) {
                let name =
                    Path::new(STEP_LOG_DIR).join(format!("trial_{:03}.csv", trial.trial_index));
                files.push(write(dir, name, &csv)?);
            }
        }
    }
    Ok(OutputManifest {
        out_dir: dir.clone(),
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use curio_core::GridPos;

    #[test]
    fn grid_csv_round_trips_exactly() {
        let g = Grid::from_fn(5, |c| (c.row as f64 + 0.1) / 3.0 - c.col as f64 * 1e-17);
        let back = parse_grid_csv(&grid_csv(&g)).unwrap();
        assert_eq!(back, g);
        let text = grid_csv(&g);
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().all(|l| l.split(',').count() == 5));
    }

    #[test]
    fn parse_rejects_ragged_tables() {
        assert!(parse_grid_csv("1,2\n3\n").is_err());
        assert!(parse_grid_csv("1,x\n3,4\n").is_err());
    }

    #[test]
    fn heatmap_scaling() {
        let mut g = Grid::filled(5, 1.0);
        g[GridPos::new(0, 0)] = 0.0;
        g[GridPos::new(2, 2)] = 4.0;
        let (pgm, min, max) = heatmap_pgm(&g);
        assert_eq!((min, max), (0.0, 4.0));
        let lines: Vec<&str> = pgm.lines().collect();
        assert_eq!(&lines[..3], &["P2", "5 5", "255"]);
        assert_eq!(lines[3], "255 191 191 191 191");
        assert_eq!(lines[5], "191 191 0 191 191");

        let (flat, _, _) = heatmap_pgm(&Grid::filled(5, 0.0));
        assert!(flat.lines().skip(3).all(|l| l == "255 255 255 255 255"));
    }
}
