//! Writes every dataset kind at small sizes into a temporary directory.

use solgeo::cli::{emit_dataset, DatasetKind, EmitParams};

pub fn run() -> solgeo::Result<()> {
    let out = std::env::temp_dir().join(format!("solgeo-emit-{}", std::process::id()));
    let params = EmitParams { r: 6.0, l: 12.0, resolution: 64, raster: 128, samples: 50, ..EmitParams::default() };
    for kind in DatasetKind::ALL {
        let m = emit_dataset(kind, &params, &out)?;
        for f in &m.files {
            println!("{:<9} {:<22} {:>9} bytes  {}", kind.name(), f.name, f.bytes, &f.sha256[..16]);
        }
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
