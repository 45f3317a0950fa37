//! Report assembly and file emission: JSON for the full record, CSV for
//! spreadsheets and plot scripts. Files are staged in a temporary sibling
//! and renamed into place, so a crash never leaves a half-written report.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const POINTS_HEADER: &str = "x_prime,expected_re,expected_im,got_re,got_im,abs_err";
pub const CONVERGENCE_HEADER: &str = "param,err";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResult {
    pub x_prime: f64,
    pub expected_re: f64,
    pub expected_im: f64,
    pub got_re: f64,
    pub got_im: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergencePoint {
    pub param: f64,
    pub err: f64,
}

/// Self-contained run record: the echoed config re-runs the experiment.
/// Wall time is omitted under --reproducible so identical configs produce
/// byte-identical documents.
#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub experiment: String,
    pub config: ExperimentConfig,
    pub points: Vec<PointResult>,
    pub convergence: Vec<ConvergencePoint>,
    pub notes: Vec<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

fn points_csv(points: &[PointResult]) -> String {
    let mut buf = String::from(POINTS_HEADER);
    buf.push('\n');
    for p in points {
        let _ = writeln!(
            buf,
            "{},{},{},{},{},{}",
            p.x_prime, p.expected_re, p.expected_im, p.got_re, p.got_im, p.abs_err
        );
    }
    buf
}

fn convergence_csv(rows: &[ConvergencePoint]) -> String {
    let mut buf = String::from(CONVERGENCE_HEADER);
    buf.push('\n');
    for r in rows {
        let _ = writeln!(buf, "{},{}", r.param, r.err);
    }
    buf
}

/// Write the report under `out_dir`, returning the paths created.
pub fn emit(
    report: &VerificationReport,
    format: Format,
    out_dir: &Path,
) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(report).map_err(io::Error::other)?;
            bytes.push(b'\n');
            let path = out_dir.join(format!("{}.json", report.experiment));
            write_atomic(&path, &bytes)?;
            written.push(path);
        }
        Format::Csv => {
            let points = out_dir.join(format!("{}.csv", report.experiment));
            write_atomic(&points, points_csv(&report.points).as_bytes())?;
            written.push(points);
            let conv = out_dir.join(format!("{}_convergence.csv", report.experiment));
            write_atomic(&conv, convergence_csv(&report.convergence).as_bytes())?;
            written.push(conv);
        }
    }
    Ok(written)
}
