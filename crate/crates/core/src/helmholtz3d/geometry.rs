use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::quadrature::FaceQuadrature;
use super::HelmholtzError;
use crate::specfun::WaveContext;

/// Regular tetrahedron `D` inscribed in `S(0, σ)` with four devices on
/// `S(0, δ)`, device `l` facing the face opposite vertex `a_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TetraCloakGeometry {
    sigma: f64,
    delta: f64,
    vertices: [Vector3<f64>; 4],
    devices: [Vector3<f64>; 4],
    ball_radius: f64,
    r_eff: f64,
}

/// `r_eff* = (1 - 2√2/3) δ`, the largest cloaked sphere for a given `δ`.
pub fn r_eff_star(delta: f64) -> f64 {
    (1.0 - 2.0 * 2f64.sqrt() / 3.0) * delta
}

/// `N = ⌈1.5 k δ⌉`.
pub fn truncation_order(delta: f64, ctx: &WaveContext) -> usize {
    (1.5 * ctx.k() * delta).ceil() as usize
}

impl TetraCloakGeometry {
    pub fn new(sigma: f64, delta: f64) -> Result<Self, HelmholtzError> {
        if !(sigma > 0.0) || !sigma.is_finite() || !delta.is_finite() {
            return Err(HelmholtzError::InvalidParameter(format!("sigma = {sigma}, delta = {delta}")));
        }
        if !(delta > sigma) {
            return Err(HelmholtzError::Geometry(format!("delta > sigma ({delta} <= {sigma})")));
        }
        let s = sigma / 3f64.sqrt();
        let vertices = [
            Vector3::new(s, s, s),
            Vector3::new(s, -s, -s),
            Vector3::new(-s, s, -s),
            Vector3::new(-s, -s, s),
        ];
        let devices = vertices.map(|a| -(delta / sigma) * a);
        let ball_radius = ((sigma - delta / 3.0).powi(2) + 8.0 * delta * delta / 9.0).sqrt();
        Ok(Self { sigma, delta, vertices, devices, ball_radius, r_eff: delta - ball_radius })
    }

    /// The optimal member `σ = δ/3`.
    pub fn optimal(delta: f64) -> Result<Self, HelmholtzError> {
        Self::new(delta / 3.0, delta)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn vertices(&self) -> &[Vector3<f64>; 4] {
        &self.vertices
    }

    pub fn devices(&self) -> &[Vector3<f64>; 4] {
        &self.devices
    }

    /// `r(σ, δ)`: radius of every ball making up region `A`.
    pub fn ball_radius(&self) -> f64 {
        self.ball_radius
    }

    /// `r_eff = δ - r(σ, δ)`.
    pub fn r_eff(&self) -> f64 {
        self.r_eff
    }

    pub fn is_optimal(&self) -> bool {
        (3.0 * self.sigma - self.delta).abs() <= 1e-12 * self.delta
    }

    /// Vertices of the face opposite `a_l`.
    pub fn face(&self, l: usize) -> [Vector3<f64>; 3] {
        let mut out = [Vector3::zeros(); 3];
        let mut k = 0;
        for (j, v) in self.vertices.iter().enumerate() {
            if j != l {
                out[k] = *v;
                k += 1;
            }
        }
        out
    }

    /// Edge length `σ √(8/3)`.
    pub fn edge_length(&self) -> f64 {
        self.sigma * (8.0f64 / 3.0).sqrt()
    }

    /// Quadratures on the four faces, face `l` opposite `a_l`, with
    /// sub-triangle edges no longer than `max_spacing`.
    pub fn face_quadratures(&self, max_spacing: f64) -> Result<Vec<FaceQuadrature>, HelmholtzError> {
        (0..4).map(|l| FaceQuadrature::new(self.face(l), max_spacing, &Vector3::zeros())).collect()
    }

    /// Strictly inside the tetrahedron.
    pub fn contains(&self, x: &Vector3<f64>) -> bool {
        self.vertices.iter().all(|a| -a.normalize().dot(x) < self.sigma / 3.0)
    }

    /// `x` lies in one of the closed balls `B(x_l, r)`.
    pub fn region_a_contains(&self, x: &Vector3<f64>) -> bool {
        self.devices.iter().any(|d| (x - d).norm() <= self.ball_radius)
    }

    /// Distance from `x` to the boundary of `D`.
    pub fn distance_to_surface(&self, x: &Vector3<f64>) -> f64 {
        (0..4).map(|l| point_triangle_distance(x, &self.face(l))).fold(f64::INFINITY, f64::min)
    }
}

/// Free-function form of [`TetraCloakGeometry::region_a_contains`].
pub fn region_a_contains(geometry: &TetraCloakGeometry, x: &Vector3<f64>) -> bool {
    geometry.region_a_contains(x)
}

fn point_triangle_distance(p: &Vector3<f64>, t: &[Vector3<f64>; 3]) -> f64 {
    let (a, b, c) = (t[0], t[1], t[2]);
    let n = (b - a).cross(&(c - a));
    let n2 = n.norm_squared();
    // Projection onto the plane and its barycentric coordinates.
    let q = p - n * (n.dot(&(p - a)) / n2);
    let u = (c - b).cross(&(q - b)).dot(&n) / n2;
    let v = (a - c).cross(&(q - c)).dot(&n) / n2;
    let w = 1.0 - u - v;
    if u >= 0.0 && v >= 0.0 && w >= 0.0 {
        return (p - q).norm();
    }
    let seg = |s: Vector3<f64>, e: Vector3<f64>| {
        let d = e - s;
        let t = ((p - s).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
        (p - (s + d * t)).norm()
    };
    seg(a, b).min(seg(b, c)).min(seg(c, a))
}
