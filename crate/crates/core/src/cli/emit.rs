use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::{write_json, Format};
use crate::error::{Result, SolError};
use crate::flow::level_from_period;
use crate::isochron::{cusp_for_radius, isochron_curve, solve_variational_until};
use crate::ode::OdeOptions;
use crate::output::fmt_f64;
use crate::solcore::Plane;
use crate::spheres::bound::{optimize_theta, BoundInputs};
use crate::spheres::export::{write_mesh_json, write_mesh_obj};
use crate::spheres::{mesh_sphere_with, raster, MeshOptions};
use crate::symflow::solve_symmetric_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Lambda,
    Isochron,
    Aux,
    Cusp,
    Mesh,
    Raster,
    Bound,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 7] = [
        DatasetKind::Lambda,
        DatasetKind::Isochron,
        DatasetKind::Aux,
        DatasetKind::Cusp,
        DatasetKind::Mesh,
        DatasetKind::Raster,
        DatasetKind::Bound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::Lambda => "lambda",
            DatasetKind::Isochron => "isochron",
            DatasetKind::Aux => "aux",
            DatasetKind::Cusp => "cusp",
            DatasetKind::Mesh => "mesh",
            DatasetKind::Raster => "raster",
            DatasetKind::Bound => "bound",
        }
    }
}

impl std::str::FromStr for DatasetKind {
    type Err = SolError;
    fn from_str(s: &str) -> Result<Self> {
        DatasetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SolError::InvalidParam(format!("unknown dataset kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmitParams {
    /// Sphere radius, isochron time.
    pub r: f64,
    /// Loop period.
    pub l: f64,
    pub resolution: usize,
    pub raster: usize,
    /// Rows of sampled tables.
    pub samples: usize,
    pub ode_abs: f64,
    pub ode_rel: f64,
    pub format: Format,
}

impl Default for EmitParams {
    fn default() -> Self {
        EmitParams {
            r: 8.0,
            l: 16.0,
            resolution: 256,
            raster: 512,
            samples: 400,
            ode_abs: 1e-12,
            ode_rel: 1e-12,
            format: Format::Csv,
        }
    }
}

impl EmitParams {
    fn ode(&self) -> OdeOptions {
        OdeOptions::with_tol(self.ode_abs, self.ode_rel)
    }

    fn validate(&self, kind: DatasetKind) -> Result<()> {
        let bad = |m: String| Err(SolError::InvalidParam(format!("{}: {m}", kind.name())));
        if self.samples < 2 {
            return bad(format!("samples = {} < 2", self.samples));
        }
        match kind {
            DatasetKind::Lambda | DatasetKind::Aux if !(self.l >= crate::flow::MIN_PERIOD) => {
                bad(format!("L = {} below the minimal period", self.l))
            }
            DatasetKind::Isochron if !(self.r > 0.0 && self.r <= 20.0) => bad(format!("r = {} outside (0, 20]", self.r)),
            DatasetKind::Mesh | DatasetKind::Raster | DatasetKind::Bound if !(self.r >= 4.0 && self.r <= 12.0) => {
                bad(format!("r = {} outside [4, 12]", self.r))
            }
            DatasetKind::Mesh | DatasetKind::Raster | DatasetKind::Bound if self.resolution < 64 => {
                bad(format!("resolution {} < 64", self.resolution))
            }
            DatasetKind::Raster | DatasetKind::Bound if self.raster < 4 || self.raster % 2 != 0 => {
                bad(format!("raster size {} must be even and ≥ 4", self.raster))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestFile {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub kind: DatasetKind,
    pub params: EmitParams,
    pub files: Vec<ManifestFile>,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                Ok(s.into_bytes())
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let m: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, v)| (h.to_string(), serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number)))
                            .collect();
                        Value::Object(m)
                    })
                    .collect();
                let mut b = serde_json::to_vec_pretty(&records)?;
                b.push(b'\n');
                Ok(b)
            }
        }
    }
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Writes the files for one dataset kind plus `manifest.json` into `out`.
pub fn emit_dataset(kind: DatasetKind, params: &EmitParams, out: &Path) -> Result<Manifest> {
    params.validate(kind)?;
    fs::create_dir_all(out)?;
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let opts = params.ode();
    let n = params.samples;
    let tag = |x: f64| fmt_tag(x);
    match kind {
        DatasetKind::Lambda => {
            let l = params.l;
            let sf = solve_symmetric_with(&level_from_period(l)?, l, &opts)?;
            let rows = (0..n)
                .map(|i| {
                    let s = sf.state(l * i as f64 / (n - 1) as f64);
                    vec![s.t, s.x, s.y, s.z, s.a, s.b, s.ua, s.ub, s.cbar]
                })
                .collect();
            let t = Table { header: vec!["t", "x", "y", "z", "a", "b", "ua", "ub", "cbar"], rows };
            files.push((format!("lambda_L{}.{}", tag(l), ext(params.format)), t.render(params.format)?));
        }
        DatasetKind::Isochron => {
            let r = params.r;
            let curve = isochron_curve(r, r, 8.0 * r, n - 1)?;
            let rows = curve
                .iter()
                .map(|p| vec![p.period, p.point.0, p.point.1, p.velocity.0, p.velocity.1, p.slope])
                .collect();
            let t = Table { header: vec!["L", "a", "b", "da", "db", "slope"], rows };
            files.push((format!("isochron_r{}.{}", tag(r), ext(params.format)), t.render(params.format)?));
        }
        DatasetKind::Aux => {
            let l = params.l;
            let vf = solve_variational_until(&level_from_period(l)?, l, &opts)?;
            let rows = vf
                .grid(0.0, l, n - 1)
                .iter()
                .map(|s| vec![s.t, s.big_x(), s.big_y(), s.big_z(), s.big_b().unwrap_or(f64::NAN)])
                .collect();
            let t = Table { header: vec!["t", "X", "Y", "Z", "B"], rows };
            files.push((format!("aux_L{}.{}", tag(l), ext(params.format)), t.render(params.format)?));
        }
        DatasetKind::Cusp => {
            let rows = (6..=10)
                .map(|r| {
                    let c = cusp_for_radius(r as f64)?;
                    Ok(vec![c.r, c.lstar, c.kappa.0, c.kappa.1, c.t_l, c.s_l])
                })
                .collect::<Result<_>>()?;
            let t = Table { header: vec!["r", "Lstar", "a_r", "b_r", "t_L", "s_L"], rows };
            files.push((format!("cusp.{}", ext(params.format)), t.render(params.format)?));
        }
        DatasetKind::Mesh => {
            let mesh = mesh_sphere_with(params.r, params.resolution, &MeshOptions::default())?;
            let mut json = Vec::new();
            write_mesh_json(&mesh, &mut json)?;
            let mut obj = Vec::new();
            write_mesh_obj(&mesh, &mut obj)?;
            files.push((format!("mesh_r{}.json", tag(params.r)), json));
            files.push((format!("mesh_r{}.obj", tag(params.r)), obj));
        }
        DatasetKind::Raster => {
            let mesh = mesh_sphere_with(params.r, params.resolution, &MeshOptions::default())?;
            let mut summary = Vec::new();
            for plane in Plane::ALL {
                let ras = raster::project_mesh(&mesh, plane, params.raster)?;
                let mut buf = Vec::new();
                ras.write_csv(&mut buf)?;
                files.push((format!("raster_{}_r{}.csv", plane.name(), tag(params.r)), buf));
                summary.push(ras);
            }
            let mut b = serde_json::to_vec_pretty(&summary)?;
            b.push(b'\n');
            files.push((format!("raster_r{}.json", tag(params.r)), b));
        }
        DatasetKind::Bound => {
            let r = params.r;
            let mesh = mesh_sphere_with(r, params.resolution, &MeshOptions::default())?;
            let er = r.exp();
            let rx = raster::project_mesh(&mesh, Plane::X, params.raster)?;
            let ry = raster::project_mesh(&mesh, Plane::Y, params.raster)?;
            let rz = raster::project_mesh(&mesh, Plane::Z, params.raster)?;
            let measured = BoundInputs {
                n_x: rx.multiplicity,
                a_x: rx.covered_area() / er,
                n_y: ry.multiplicity,
                a_y: ry.covered_area() / er,
                a_z_by_k: rz.areas_by_count.iter().map(|(k, a)| (*k, a / er)).collect(),
            };
            let m = optimize_theta(&measured)?;
            let lim = optimize_theta(&BoundInputs::limiting())?;
            let doc = serde_json::json!({
                "r": r,
                "units": "e^r",
                "inputs": measured,
                "a_z": rz.covered_area() / er,
                "n_z": rz.multiplicity,
                "theta_star": m.theta,
                "bound_star": m.bound,
                "limiting": { "inputs": BoundInputs::limiting(), "theta_star": lim.theta, "bound_star": lim.bound },
            });
            let mut b = serde_json::to_vec_pretty(&doc)?;
            b.push(b'\n');
            files.push((format!("bound_r{}.json", tag(r)), b));
        }
    }
    let mut entries = Vec::new();
    for (name, bytes) in &files {
        fs::write(out.join(name), bytes)?;
        entries.push(ManifestFile { name: name.clone(), bytes: bytes.len(), sha256: hex(&Sha256::digest(bytes)) });
    }
    let manifest = Manifest {
        tool: "solgeo",
        version: env!("CARGO_PKG_VERSION"),
        kind,
        params: params.clone(),
        files: entries,
    };
    write_json(&out.join(format!("manifest_{}.json", kind.name())), &manifest)?;
    Ok(manifest)
}

/// `8` → `8`, `5.5` → `5.5`; safe in file names.
fn fmt_tag(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
