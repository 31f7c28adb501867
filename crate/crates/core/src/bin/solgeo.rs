use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use solgeo::cli::{emit_dataset, run_verify, DatasetKind, EmitParams, Format, RunConfig};

#[derive(Parser)]
#[command(name = "solgeo", version, about = "Sol geometry numerics: verification suites and datasets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Sphere radius / isochron time.
    #[arg(long, global = true, default_value_t = 8.0)]
    r: f64,
    /// Loop period.
    #[arg(long = "L", global = true, default_value_t = 16.0)]
    l: f64,
    /// Mesh resolution; rasters use twice as many cells.
    #[arg(long, global = true, default_value_t = 256)]
    resolution: usize,
    /// Absolute and relative ODE tolerance.
    #[arg(long = "tol-ode", global = true, default_value_t = 1e-12)]
    tol_ode: f64,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// Worker threads; SOLGEO_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and write report.json.
    Verify {
        /// elliptic, flow, symflow, isochron, spheres or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Write one dataset and its manifest.
    Emit {
        /// lambda, isochron, aux, cusp, mesh, raster or bound.
        kind: DatasetKind,
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("SOLGEO_THREADS").ok().and_then(|s| s.parse().ok()).or(cli.threads);
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.cmd {
        Cmd::Verify { ref suite } => {
            let cfg = RunConfig {
                ode_abs: cli.tol_ode,
                ode_rel: cli.tol_ode,
                mesh: cli.resolution,
                raster: 2 * cli.resolution,
                out: cli.out.clone(),
                format: cli.format,
                ..RunConfig::default()
            };
            match run_verify(&cfg, suite) {
                Ok(report) => {
                    for c in &report.checks {
                        let mark = if c.pass { "pass" } else { "FAIL" };
                        println!("{mark} {:<9} {} = {:e} (bound {:e})", c.suite, c.check, c.value, c.bound);
                    }
                    ExitCode::from(report.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Cmd::Emit { kind, samples } => {
            let params = EmitParams {
                r: cli.r,
                l: cli.l,
                resolution: cli.resolution,
                raster: 2 * cli.resolution,
                samples,
                ode_abs: cli.tol_ode,
                ode_rel: cli.tol_ode,
                format: cli.format,
            };
            match emit_dataset(kind, &params, &cli.out) {
                Ok(m) => {
                    for f in &m.files {
                        println!("{} {} {}", f.sha256, f.bytes, f.name);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
