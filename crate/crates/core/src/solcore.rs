//! The Sol group `(x, y, z)` with group law
//! `(x,y,z)·(a,b,c) = (eᶻa + x, e⁻ᶻb + y, c + z)` and left-invariant metric
//! `e⁻²ᶻdx² + e²ᶻdy² + dz²`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolError};

/// Largest |z| for which `e^{±z}` is evaluated.
pub const Z_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct SolPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A tangent vector in coordinate components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct TangentVec {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

/// Coordinate plane selected by the coordinate that is dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Plane {
    X,
    Y,
    Z,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::X, Plane::Y, Plane::Z];

    pub fn name(self) -> &'static str {
        match self {
            Plane::X => "X",
            Plane::Y => "Y",
            Plane::Z => "Z",
        }
    }
}

impl std::str::FromStr for Plane {
    type Err = SolError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Plane::X),
            "Y" | "y" => Ok(Plane::Y),
            "Z" | "z" => Ok(Plane::Z),
            _ => Err(SolError::InvalidParam(format!("unknown plane {s:?}"))),
        }
    }
}

fn check_z(z: f64) -> Result<()> {
    if z.abs() > Z_LIMIT || !z.is_finite() {
        Err(SolError::Overflow { z })
    } else {
        Ok(())
    }
}

impl SolPoint {
    pub const IDENTITY: SolPoint = SolPoint { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        SolPoint { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        SolPoint::new(a[0], a[1], a[2])
    }

    pub fn dist_euclid(&self, o: &SolPoint) -> f64 {
        ((self.x - o.x).powi(2) + (self.y - o.y).powi(2) + (self.z - o.z).powi(2)).sqrt()
    }
}

impl TangentVec {
    pub const fn new(u: f64, v: f64, w: f64) -> Self {
        TangentVec { u, v, w }
    }

    pub fn scale(self, c: f64) -> Self {
        TangentVec::new(c * self.u, c * self.v, c * self.w)
    }
}

pub fn mul(p: SolPoint, q: SolPoint) -> Result<SolPoint> {
    check_z(p.z)?;
    check_z(p.z + q.z)?;
    let e = p.z.exp();
    Ok(SolPoint::new(e * q.x + p.x, q.y / e + p.y, q.z + p.z))
}

pub fn inverse(p: SolPoint) -> Result<SolPoint> {
    check_z(p.z)?;
    let e = p.z.exp();
    Ok(SolPoint::new(-p.x / e, -p.y * e, -p.z))
}

/// Differential of left translation by `g`.
pub fn dl(g: SolPoint, t: TangentVec) -> Result<TangentVec> {
    check_z(g.z)?;
    let e = g.z.exp();
    Ok(TangentVec::new(e * t.u, t.v / e, t.w))
}

/// Metric inner product at `p`.
pub fn metric_dot(p: SolPoint, a: TangentVec, b: TangentVec) -> f64 {
    let e2 = (2.0 * p.z).exp();
    a.u * b.u / e2 + e2 * a.v * b.v + a.w * b.w
}

pub fn metric_norm(p: SolPoint, t: TangentVec) -> f64 {
    metric_dot(p, t, t).max(0.0).sqrt()
}

/// Area of the parallelogram spanned by `t1`, `t2` at `p` (Gram determinant).
pub fn area_element(p: SolPoint, t1: TangentVec, t2: TangentVec) -> f64 {
    // Cross-product form avoids cancellation in g11·g22 − g12².
    let e = p.z.exp();
    let a = [t1.u / e, t1.v * e, t1.w];
    let b = [t2.u / e, t2.v * e, t2.w];
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

/// Drops the coordinate named by `plane`.
pub fn project(p: SolPoint, plane: Plane) -> (f64, f64) {
    match plane {
        Plane::X => (p.y, p.z),
        Plane::Y => (p.x, p.z),
        Plane::Z => (p.x, p.y),
    }
}

pub fn pi_z(p: SolPoint) -> f64 {
    p.z
}

/// Distance in the slice `y = 0` from the origin to `(x, 0, 0)`.
pub fn slice_distance(x: f64) -> f64 {
    2.0 * (x / 2.0).asinh()
}

/// Inverse of [`slice_distance`]: `2 sinh(r/2) = e^{r/2} − e^{−r/2}`.
pub fn slice_reach(r: f64) -> f64 {
    2.0 * (r / 2.0).sinh()
}

/// Map of the slice `y = 0` to the upper half plane, `(x, 0, z) ↦ (x, eᶻ)`.
pub fn slice_to_half_plane(p: SolPoint) -> (f64, f64) {
    (p.x, p.z.exp())
}

/// Hyperbolic distance between two upper-half-plane points.
pub fn half_plane_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let num = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    (1.0 + num / (2.0 * a.1 * b.1)).acosh()
}

/// The four sector reflections `(x,y,z) ↦ (±x, ±y, z)` indexed by sign bits.
pub fn reflect(p: SolPoint, sx: f64, sy: f64) -> SolPoint {
    SolPoint::new(sx * p.x, sy * p.y, p.z)
}
