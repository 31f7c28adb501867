//! Verification suites and dataset emission behind the `solgeo` binary.

mod emit;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Result, SolError};
use crate::ode::OdeOptions;

pub use emit::{emit_dataset, DatasetKind, EmitParams, Manifest, ManifestFile};

pub const SUITES: [&str; 5] = ["elliptic", "flow", "symflow", "isochron", "spheres"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = SolError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(SolError::InvalidParam(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub ode_abs: f64,
    pub ode_rel: f64,
    pub root_tol: f64,
    /// Relative slack applied to the limiting constants.
    pub check_slack: f64,
    /// Mesh resolution; rasters use twice as many cells.
    pub mesh: usize,
    pub raster: usize,
    /// Sample count for curves and scans.
    pub grid: usize,
    pub out: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ode_abs: 1e-12,
            ode_rel: 1e-12,
            root_tol: 1e-10,
            check_slack: 0.1,
            mesh: 256,
            raster: 512,
            grid: 200,
            out: PathBuf::from("out"),
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("ode_abs", self.ode_abs), ("ode_rel", self.ode_rel), ("root_tol", self.root_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SolError::InvalidParam(format!("{name} = {v} must be positive")));
            }
        }
        if !(0.0..=0.5).contains(&self.check_slack) {
            return Err(SolError::InvalidParam(format!("check_slack = {} outside [0, 0.5]", self.check_slack)));
        }
        if self.mesh < 64 || self.raster < 4 || self.raster % 2 != 0 || self.grid < 2 {
            return Err(SolError::InvalidParam(format!(
                "resolutions too small: mesh {}, raster {}, grid {}",
                self.mesh, self.raster, self.grid
            )));
        }
        Ok(())
    }

    pub fn ode(&self) -> OdeOptions {
        OdeOptions::with_tol(self.ode_abs, self.ode_rel)
    }
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub check: String,
    pub lemma_ref: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Suite names selected by `name`, which may be `all`.
pub fn resolve_suites(name: &str) -> Result<Vec<&'static str>> {
    if name == "all" {
        return Ok(SUITES.to_vec());
    }
    SUITES
        .iter()
        .find(|s| **s == name)
        .map(|s| vec![*s])
        .ok_or_else(|| SolError::InvalidParam(format!("unknown suite {name:?}; expected one of {SUITES:?} or all")))
}

/// Runs the named suites and writes `report.json` into the output directory.
pub fn run_verify(config: &RunConfig, suite: &str) -> Result<VerifyReport> {
    config.validate()?;
    let names = resolve_suites(suite)?;
    fs::create_dir_all(&config.out)?;
    let mut checks = Vec::new();
    for name in names {
        checks.extend(suites::run(name, config)?);
    }
    checks.sort_by(|a, b| a.suite.cmp(&b.suite).then_with(|| a.check.cmp(&b.check)));
    let report = VerifyReport { checks };
    write_json(&config.out.join("report.json"), &report.checks)?;
    Ok(report)
}

pub(crate) fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    fs::write(path, bytes)?;
    Ok(())
}
