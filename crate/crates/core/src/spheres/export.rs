//! Mesh files: JSON `{r, resolution, vertices, images, boundary}` and OBJ.

use std::io::Write;

use serde::Serialize;

use super::mesh::SphereMesh;
use crate::error::Result;

#[derive(Serialize)]
struct MeshJson<'a> {
    r: f64,
    resolution: usize,
    vertices: &'a [[f64; 3]],
    images: Vec<[f64; 3]>,
    boundary: Vec<usize>,
}

pub fn write_mesh_json<W: Write>(mesh: &SphereMesh, w: W) -> Result<()> {
    let doc = MeshJson {
        r: mesh.r,
        resolution: mesh.resolution,
        vertices: &mesh.vertices,
        images: mesh.images.iter().map(|p| p.to_array()).collect(),
        boundary: mesh.boundary(),
    };
    serde_json::to_writer(w, &doc)?;
    Ok(())
}

/// Positions are the images; faces are the mesh triangles (1-based).
pub fn write_mesh_obj<W: Write>(mesh: &SphereMesh, mut w: W) -> Result<()> {
    for p in &mesh.images {
        writeln!(w, "v {:e} {:e} {:e}", p.x, p.y, p.z)?;
    }
    for [a, b, c] in mesh.triangles() {
        writeln!(w, "f {} {} {}", a + 1, b + 1, c + 1)?;
    }
    Ok(())
}
