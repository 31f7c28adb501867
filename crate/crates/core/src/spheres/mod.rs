//! Metric spheres of Sol: meshing, area, projections and the final bound.

pub mod area;
pub mod bound;
pub mod cutlocus;
pub mod export;
pub mod mesh;
pub mod omega;
pub mod raster;
pub mod volume;
pub mod yinyang;

pub use mesh::{mesh_sphere, mesh_sphere_with, MeshOptions, SphereMesh};
