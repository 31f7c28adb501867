//! Rasterized projections of the sphere and their multiplicity counts.
//!
//! Images are drawn in area-adapted charts of the coordinate planes:
//!
//! * `Π_X`, `Π_Y` are hyperbolic planes. With `w = Y + iW` in the upper
//!   half plane, the Lambert chart `(w − i)(w̄ − i)/(|w + i|·√W)` sends the
//!   disk of radius `ρ` about `i` to the Euclidean disk of radius
//!   `2 sinh(ρ/2)` and preserves area, so every cell has hyperbolic area
//!   `cell²`. `Π_X` uses `(Y, W) = (y, e^{−z})`, `Π_Y` uses `(x, e^{z})`.
//! * `Π_Z` is Euclidean; the chart `(asinh a, asinh b)` resolves both the
//!   unit-size core and the `e^r`-size arms, and cell areas are exact.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::mesh::SphereMesh;
use crate::error::{Result, SolError};
use crate::solcore::{Plane, SolPoint};

/// The four sector reflections `(±x, ±y, z)`.
pub const SECTORS: [(f64, f64); 4] = [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)];

/// Chart coordinates of `η_plane(p)`.
pub fn chart(plane: Plane, p: SolPoint) -> (f64, f64) {
    match plane {
        Plane::X => lambert(p.y, (-p.z).exp()),
        Plane::Y => lambert(p.x, p.z.exp()),
        Plane::Z => (p.x.asinh(), p.y.asinh()),
    }
}

fn lambert(y: f64, w: f64) -> (f64, f64) {
    let d = (y * y + (w + 1.0).powi(2)).sqrt() * w.sqrt();
    ((y * y + w * w - 1.0) / d, -2.0 * y / d)
}

/// Hyperbolic distance from the origin of `η_plane(p)` for `Π_X`, `Π_Y`.
pub fn hyperbolic_radius(plane: Plane, p: SolPoint) -> Option<f64> {
    let (y, w) = match plane {
        Plane::X => (p.y, (-p.z).exp()),
        Plane::Y => (p.x, p.z.exp()),
        Plane::Z => return None,
    };
    Some((1.0 + (y * y + (w - 1.0).powi(2)) / (2.0 * w)).acosh())
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjRaster {
    pub plane: Plane,
    pub cells: usize,
    /// Chart half-width; the raster covers `[−extent, extent]²`.
    pub extent: f64,
    /// Chart edge length of one cell.
    pub cell: f64,
    #[serde(skip)]
    pub counts: Vec<u32>,
    #[serde(skip)]
    pub excluded: Vec<bool>,
    /// Area of cells covered exactly `k` times, `k ≥ 1`.
    pub areas_by_count: BTreeMap<u32, f64>,
    /// Largest count over cells away from the hull, `∂S_r′` and fold edges.
    pub multiplicity: u32,
}

impl ProjRaster {
    fn edges(&self, k: usize) -> (f64, f64) {
        let a = -self.extent + k as f64 * self.cell;
        (a, a + self.cell)
    }

    /// Plane area of cell `(ix, iy)` in the plane's own metric.
    pub fn cell_area(&self, ix: usize, iy: usize) -> f64 {
        match self.plane {
            Plane::X | Plane::Y => self.cell * self.cell,
            Plane::Z => {
                let (u0, u1) = self.edges(ix);
                let (v0, v1) = self.edges(iy);
                (u1.sinh() - u0.sinh()) * (v1.sinh() - v0.sinh())
            }
        }
    }

    /// Area of the projected image (cells covered at least once).
    pub fn covered_area(&self) -> f64 {
        self.areas_by_count.values().sum()
    }

    /// `Σ k·A_k`.
    pub fn weighted_area(&self) -> f64 {
        self.areas_by_count.iter().map(|(k, a)| *k as f64 * a).sum()
    }

    pub fn count(&self, ix: usize, iy: usize) -> u32 {
        self.counts[iy * self.cells + ix]
    }

    /// One CSV line per raster row of counts, bottom row first.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = std::iter::once("row".to_string()).chain((0..self.cells).map(|i| i.to_string())).collect();
        writeln!(w, "{}", header.join(","))?;
        for iy in 0..self.cells {
            let row: Vec<String> = std::iter::once(iy.to_string())
                .chain((0..self.cells).map(|ix| self.count(ix, iy).to_string()))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Chart images of the mesh for every sector, `[sector][vertex]`.
fn sector_charts(mesh: &SphereMesh, plane: Plane) -> Vec<Vec<(f64, f64)>> {
    SECTORS
        .par_iter()
        .map(|&(sx, sy)| {
            mesh.images
                .iter()
                .map(|p| chart(plane, SolPoint::new(sx * p.x, sy * p.y, p.z)))
                .collect()
        })
        .collect()
}

#[inline]
fn signed_area(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

struct Grid {
    cells: usize,
    extent: f64,
    cell: f64,
}

impl Grid {
    fn center(&self, k: usize) -> f64 {
        -self.extent + (k as f64 + 0.5) * self.cell
    }

    fn index(&self, v: f64) -> usize {
        (((v + self.extent) / self.cell).floor().max(0.0) as usize).min(self.cells - 1)
    }

    fn rasterize(&self, counts: &mut [u32], a: (f64, f64), b: (f64, f64), c: (f64, f64)) {
        let s = signed_area(a, b, c);
        if s == 0.0 || !s.is_finite() {
            return;
        }
        let (b, c) = if s > 0.0 { (b, c) } else { (c, b) };
        let lo_x = a.0.min(b.0).min(c.0);
        let hi_x = a.0.max(b.0).max(c.0);
        let lo_y = a.1.min(b.1).min(c.1);
        let hi_y = a.1.max(b.1).max(c.1);
        let (ix0, ix1) = (self.index(lo_x), self.index(hi_x));
        let (iy0, iy1) = (self.index(lo_y), self.index(hi_y));
        let edges = [(a, b), (b, c), (c, a)];
        for iy in iy0..=iy1 {
            let py = self.center(iy);
            for ix in ix0..=ix1 {
                let px = self.center(ix);
                let inside = edges.iter().all(|&(p, q)| {
                    let e = (q.0 - p.0) * (py - p.1) - (q.1 - p.1) * (px - p.0);
                    // Ties go to edges pointing up, or left along a horizontal.
                    e > 0.0 || (e == 0.0 && (q.1 > p.1 || (q.1 == p.1 && q.0 < p.0)))
                });
                if inside {
                    counts[iy * self.cells + ix] += 1;
                }
            }
        }
    }

    fn mark_segment(&self, mask: &mut [bool], a: (f64, f64), b: (f64, f64)) {
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let n = ((len / (0.5 * self.cell)).ceil() as usize).clamp(1, 1 << 20);
        for k in 0..=n {
            let t = k as f64 / n as f64;
            let (x, y) = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            mask[self.index(y) * self.cells + self.index(x)] = true;
        }
    }

    fn dilate(&self, mask: &[bool]) -> Vec<bool> {
        let n = self.cells;
        let mut out = mask.to_vec();
        for iy in 0..n {
            for ix in 0..n {
                if mask[iy * n + ix] {
                    for dy in -1i64..=1 {
                        for dx in -1i64..=1 {
                            let (x, y) = (ix as i64 + dx, iy as i64 + dy);
                            if x >= 0 && y >= 0 && (x as usize) < n && (y as usize) < n {
                                out[y as usize * n + x as usize] = true;
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Counts, over all four sectors, how many image triangles cover each cell
/// center.
pub fn project_mesh(mesh: &SphereMesh, plane: Plane, cells: usize) -> Result<ProjRaster> {
    if cells < 4 || cells % 2 != 0 {
        return Err(SolError::InvalidParam(format!("raster size {cells} must be even and ≥ 4")));
    }
    let charts = sector_charts(mesh, plane);
    let reach = charts
        .iter()
        .flatten()
        .map(|&(u, v)| u.abs().max(v.abs()))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let extent = reach * (1.0 + 4.0 / cells as f64) + 1e-12;
    let grid = Grid { cells, extent, cell: 2.0 * extent / cells as f64 };
    let tris: Vec<[usize; 3]> = mesh.triangles().collect();

    let counts = charts
        .par_iter()
        .map(|ch| {
            let mut c = vec![0u32; cells * cells];
            for t in &tris {
                grid.rasterize(&mut c, ch[t[0]], ch[t[1]], ch[t[2]]);
            }
            c
        })
        .reduce(
            || vec![0u32; cells * cells],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut singular = vec![false; cells * cells];
    // ∂S_r′.
    if mesh.has_boundary() {
        let i = mesh.rows() - 1;
        for ch in &charts {
            for j in 0..mesh.cols() {
                grid.mark_segment(&mut singular, ch[mesh.idx(i, j)], ch[mesh.idx(i, j + 1)]);
            }
        }
    }
    // Fold edges: interior mesh edges whose two triangles project with
    // opposite orientation.
    for ch in &charts {
        mark_folds(mesh, plane, ch, &grid, &mut singular);
    }
    // Hull: covered cells next to uncovered ones or the raster border.
    let n = cells;
    for iy in 0..n {
        for ix in 0..n {
            if counts[iy * n + ix] == 0 {
                continue;
            }
            let border = ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1;
            let open = border
                || counts[iy * n + ix - 1] == 0
                || counts[iy * n + ix + 1] == 0
                || counts[(iy - 1) * n + ix] == 0
                || counts[(iy + 1) * n + ix] == 0
                || counts[(iy - 1) * n + ix - 1] == 0
                || counts[(iy - 1) * n + ix + 1] == 0
                || counts[(iy + 1) * n + ix - 1] == 0
                || counts[(iy + 1) * n + ix + 1] == 0;
            if open {
                singular[iy * n + ix] = true;
            }
        }
    }
    let excluded = grid.dilate(&singular);

    let mut raster = ProjRaster {
        plane,
        cells,
        extent,
        cell: grid.cell,
        counts,
        excluded,
        areas_by_count: BTreeMap::new(),
        multiplicity: 0,
    };
    let mut areas = BTreeMap::new();
    let mut mult = 0;
    for iy in 0..n {
        for ix in 0..n {
            let k = raster.counts[iy * n + ix];
            if k > 0 {
                *areas.entry(k).or_insert(0.0) += raster.cell_area(ix, iy);
                if !raster.excluded[iy * n + ix] {
                    mult = mult.max(k);
                }
            }
        }
    }
    raster.areas_by_count = areas;
    raster.multiplicity = mult;
    Ok(raster)
}

fn mark_folds(mesh: &SphereMesh, plane: Plane, ch: &[(f64, f64)], grid: &Grid, mask: &mut [bool]) {
    let (rows, cols) = (mesh.rows(), mesh.cols());
    let area = |a: usize, b: usize, c: usize| signed_area(ch[a], ch[b], ch[c]);
    let lower = |i: usize, j: usize| area(mesh.idx(i, j), mesh.idx(i + 1, j), mesh.idx(i + 1, j + 1));
    let upper = |i: usize, j: usize| area(mesh.idx(i, j), mesh.idx(i + 1, j + 1), mesh.idx(i, j + 1));
    let opposite = |s: f64, t: f64| s * t < 0.0;
    for i in 0..rows - 1 {
        for j in 0..cols {
            let (lo, up) = (lower(i, j), upper(i, j));
            // Diagonal inside the quad.
            if opposite(lo, up) {
                grid.mark_segment(mask, ch[mesh.idx(i, j)], ch[mesh.idx(i + 1, j + 1)]);
            }
            // Edge (i, j+1)–(i+1, j+1) shared with the next quad's lower triangle.
            if opposite(up, lower(i, j + 1)) {
                grid.mark_segment(mask, ch[mesh.idx(i, j + 1)], ch[mesh.idx(i + 1, j + 1)]);
            }
            // Edge (i+1, j)–(i+1, j+1) shared with the next row's upper triangle.
            if i + 2 < rows && opposite(lo, upper(i + 1, j)) {
                grid.mark_segment(mask, ch[mesh.idx(i + 1, j)], ch[mesh.idx(i + 1, j + 1)]);
            }
        }
    }
    // Along α = 0 the sectors are glued by a reflection. When that
    // reflection acts trivially on the plane the surface folds there.
    for j in 0..cols {
        let u = mesh.vertices[mesh.idx(0, j)];
        let on_x_meridian = u[0].abs() < 1e-12 && mesh.vertices[mesh.idx(0, j + 1)][0].abs() < 1e-12;
        let on_y_meridian = u[1].abs() < 1e-12 && mesh.vertices[mesh.idx(0, j + 1)][1].abs() < 1e-12;
        if (plane == Plane::X && on_x_meridian) || (plane == Plane::Y && on_y_meridian) {
            grid.mark_segment(mask, ch[mesh.idx(0, j)], ch[mesh.idx(0, j + 1)]);
        }
    }
}

/// Largest hyperbolic distance from the origin among projected vertices.
pub fn max_hyperbolic_radius(mesh: &SphereMesh, plane: Plane) -> Option<f64> {
    if plane == Plane::Z {
        return None;
    }
    Some(
        mesh.images
            .iter()
            .flat_map(|p| SECTORS.iter().map(move |&(sx, sy)| SolPoint::new(sx * p.x, sy * p.y, p.z)))
            .filter_map(|p| hyperbolic_radius(plane, p))
            .fold(0.0, f64::max),
    )
}
