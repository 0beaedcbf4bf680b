use std::f64::consts::PI;

use nalgebra::Vector3;

use super::HelmholtzError;
use crate::specfun::UnitDirection;

/// Edge-midpoint rule on a uniform refinement of a triangle.
///
/// The triangle is split into `m²` congruent sub-triangles; each carries the
/// three-point rule with nodes at its edge midpoints and weights `area/3`,
/// which is exact for affine integrands. Midpoints shared by two
/// sub-triangles are merged, so interior nodes weigh `2·area/3`.
#[derive(Debug, Clone)]
pub struct FaceQuadrature {
    vertices: [Vector3<f64>; 3],
    normal: Vector3<f64>,
    nodes: Vec<Vector3<f64>>,
    weights: Vec<f64>,
    subdivisions: usize,
    spacing: f64,
}

impl FaceQuadrature {
    /// Refines until every sub-triangle edge is at most `max_spacing`;
    /// the normal points away from `interior`.
    pub fn new(vertices: [Vector3<f64>; 3], max_spacing: f64, interior: &Vector3<f64>) -> Result<Self, HelmholtzError> {
        if !(max_spacing > 0.0) {
            return Err(HelmholtzError::InvalidParameter(format!("quadrature spacing {max_spacing}")));
        }
        let [a, b, c] = vertices;
        let cross = (b - a).cross(&(c - a));
        let area = 0.5 * cross.norm();
        if !(area > 0.0) {
            return Err(HelmholtzError::Geometry("non-degenerate face".into()));
        }
        let mut normal = cross.normalize();
        let centroid = (a + b + c) / 3.0;
        if normal.dot(&(centroid - interior)) < 0.0 {
            normal = -normal;
        }
        let longest = (b - a).norm().max((c - b).norm()).max((a - c).norm());
        let m = (longest / max_spacing).ceil().max(1.0) as usize;
        let sub_area = area / (m * m) as f64;
        let two_m = 2 * m;
        let mut nodes = Vec::with_capacity(3 * m * (m + 1) / 2);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for i in 0..=two_m {
            for j in 0..=(two_m - i) {
                let k = two_m - i - j;
                let odd = (i % 2) + (j % 2) + (k % 2);
                if odd != 2 {
                    continue;
                }
                let p = (a * i as f64 + b * j as f64 + c * k as f64) / two_m as f64;
                let shared = i > 0 && j > 0 && k > 0;
                nodes.push(p);
                weights.push(if shared { 2.0 } else { 1.0 } * sub_area / 3.0);
            }
        }
        Ok(Self { vertices, normal, nodes, weights, subdivisions: m, spacing: longest / m as f64 })
    }

    pub fn vertices(&self) -> &[Vector3<f64>; 3] {
        &self.vertices
    }

    pub fn normal(&self) -> Vector3<f64> {
        self.normal
    }

    pub fn nodes(&self) -> &[Vector3<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    /// Longest sub-triangle edge.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n` from Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for l in 1..n {
                let p2 = ((2 * l + 1) as f64 * t * p1 - l as f64 * p0) / (l + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = t;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        x[i] = t;
        x[n - 1 - i] = -t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ`, uniform in
/// `φ`. Exact for spherical harmonics of degree `< min(2 n_theta, n_phi)`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    directions: Vec<UnitDirection>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (x, w) = gauss_legendre(n_theta);
        let mut directions = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        let dphi = 2.0 * PI / n_phi as f64;
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                directions.push(UnitDirection::from_angles(theta, j as f64 * dphi));
                weights.push(wi * dphi);
            }
        }
        Self { directions, weights }
    }

    pub fn directions(&self) -> &[UnitDirection] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}
