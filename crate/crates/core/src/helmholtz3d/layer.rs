use nalgebra::Vector3;
use num_complex::Complex64;

use super::fields::WaveField;
use super::geometry::TetraCloakGeometry;
use super::quadrature::FaceQuadrature;
use super::HelmholtzError;
use crate::specfun::{greens_function, greens_gradient_y, WaveContext};

/// Discretised single and double layer densities of a field on `∂D`:
/// `∫ [-(n·∇u) G(x, y) + u n·∇_y G(x, y)] dS_y`.
#[derive(Debug, Clone)]
pub struct LayerPotential {
    nodes: Vec<Vector3<f64>>,
    normals: Vec<Vector3<f64>>,
    // w·u and w·∂_n u at every node.
    double: Vec<Complex64>,
    single: Vec<Complex64>,
    spacing: f64,
    ctx: WaveContext,
}

impl LayerPotential {
    pub fn new<F: WaveField + ?Sized>(faces: &[FaceQuadrature], field: &F, ctx: &WaveContext) -> Self {
        let total: usize = faces.iter().map(FaceQuadrature::len).sum();
        let mut lp = Self {
            nodes: Vec::with_capacity(total),
            normals: Vec::with_capacity(total),
            double: Vec::with_capacity(total),
            single: Vec::with_capacity(total),
            spacing: faces.iter().map(FaceQuadrature::spacing).fold(0.0, f64::max),
            ctx: *ctx,
        };
        for face in faces {
            let n = face.normal();
            for (y, &w) in face.nodes().iter().zip(face.weights()) {
                let g = field.gradient(y);
                let dn = g[0] * n.x + g[1] * n.y + g[2] * n.z;
                lp.nodes.push(*y);
                lp.normals.push(n);
                lp.double.push(field.value(y) * w);
                lp.single.push(dn * w);
            }
        }
        lp
    }

    /// Longest quadrature sub-triangle edge.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn eval(&self, x: &Vector3<f64>) -> Result<Complex64, HelmholtzError> {
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..self.nodes.len() {
            let y = &self.nodes[i];
            let g = greens_function(x, y, &self.ctx)?;
            let dg = greens_gradient_y(x, y, &self.ctx)?;
            let n = &self.normals[i];
            let dgn = dg[0] * n.x + dg[1] * n.y + dg[2] * n.z;
            sum += -self.single[i] * g + self.double[i] * dgn;
        }
        Ok(sum)
    }
}

fn warn_if_near(geometry: &TetraCloakGeometry, faces: &[FaceQuadrature], x: &Vector3<f64>) {
    let spacing = faces.iter().map(FaceQuadrature::spacing).fold(0.0, f64::max);
    let d = geometry.distance_to_surface(x);
    if d < spacing {
        log::warn!("evaluation point {d:.3e} from the boundary, below the node spacing {spacing:.3e}");
    }
}

/// Green's-formula device field: `-u_i(x)` inside `D`, `0` outside, up to
/// quadrature error.
pub fn green_device_field<F: WaveField + ?Sized>(
    geometry: &TetraCloakGeometry,
    field: &F,
    x: &Vector3<f64>,
    faces: &[FaceQuadrature],
    ctx: &WaveContext,
) -> Result<Complex64, HelmholtzError> {
    warn_if_near(geometry, faces, x);
    LayerPotential::new(faces, field, ctx).eval(x)
}

/// Green's formula for a field radiating from sources inside `D`, with the
/// normal of the exterior domain: `0` inside `D`, `-u_rad(x)` outside.
pub fn green_exterior_field<F: WaveField + ?Sized>(
    geometry: &TetraCloakGeometry,
    field: &F,
    x: &Vector3<f64>,
    faces: &[FaceQuadrature],
    ctx: &WaveContext,
) -> Result<Complex64, HelmholtzError> {
    warn_if_near(geometry, faces, x);
    Ok(-LayerPotential::new(faces, field, ctx).eval(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helmholtz3d::fields::{PlaneWave, PointSource, ScalarField, ZeroField};

    fn setup(spacing: f64) -> (TetraCloakGeometry, Vec<FaceQuadrature>, WaveContext) {
        let ctx = WaveContext::new(1.0).unwrap();
        let g = TetraCloakGeometry::new(1.0, 3.0).unwrap();
        let q = g.face_quadratures(spacing).unwrap();
        (g, q, ctx)
    }

    #[test]
    fn reproduces_minus_incident_inside_and_zero_outside() {
        let (g, q, ctx) = setup(1.0 / 24.0);
        let u = PlaneWave::new(Vector3::new(1.0, 1.0, 1.0).normalize(), &ctx).unwrap();
        let lp = LayerPotential::new(&q, &u, &ctx);
        for x in [Vector3::zeros(), Vector3::new(0.05, -0.08, 0.1)] {
            let v = lp.eval(&x).unwrap();
            assert!((v + u.value(&x)).norm() < 1e-3, "{v}");
        }
        for x in [Vector3::new(4.0, 1.0, -2.0), Vector3::new(0.0, 0.0, 10.0)] {
            assert!(lp.eval(&x).unwrap().norm() < 1e-3);
        }
        let _ = g;
    }

    #[test]
    fn second_order_refinement() {
        let ctx = WaveContext::new(1.0).unwrap();
        let g = TetraCloakGeometry::new(1.0, 3.0).unwrap();
        let u = PlaneWave::new(Vector3::new(0.0, 0.6, 0.8), &ctx).unwrap();
        let x = Vector3::new(0.02, 0.03, -0.05);
        let err = |h: f64| {
            let q = g.face_quadratures(h).unwrap();
            (LayerPotential::new(&q, &u, &ctx).eval(&x).unwrap() + u.value(&x)).norm()
        };
        let (e1, e2, e3) = (err(0.25), err(0.125), err(0.0625));
        let order = ((e1 - e2) / (e2 - e3)).abs().log2();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn exterior_variant_for_point_source() {
        let (g, q, ctx) = setup(1.0 / 24.0);
        let y0 = Vector3::new(0.05, 0.0, -0.05);
        let u = PointSource::new(y0, &ctx);
        let outside = Vector3::new(2.5, -1.0, 0.5);
        let v = green_exterior_field(&g, &u, &outside, &q, &ctx).unwrap();
        let exact = -u.value(&outside);
        assert!((v - exact).norm() < 1e-3 * exact.norm(), "{v} vs {exact}");
        let inside = Vector3::new(-0.1, 0.05, 0.0);
        assert!(green_exterior_field(&g, &u, &inside, &q, &ctx).unwrap().norm() < 1e-3);
        assert_eq!(green_exterior_field(&g, &ZeroField, &outside, &q, &ctx).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn zero_incident_gives_zero() {
        let (g, q, ctx) = setup(0.25);
        let v = green_device_field(&g, &ZeroField, &Vector3::zeros(), &q, &ctx).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }
}
