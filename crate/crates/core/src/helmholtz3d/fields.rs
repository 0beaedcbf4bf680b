use nalgebra::Vector3;
use num_complex::Complex64;

use super::HelmholtzError;
use crate::specfun::{greens_function, greens_gradient_y, WaveContext};

/// Complex scalar field on `R³`.
pub trait ScalarField: Sync {
    fn value(&self, x: &Vector3<f64>) -> Complex64;
}

/// Scalar field with a known gradient, as needed on `∂D`.
pub trait WaveField: ScalarField {
    fn gradient(&self, x: &Vector3<f64>) -> Vector3<Complex64>;
}

/// `exp(ik k̂·x)`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave {
    direction: Vector3<f64>,
    k: f64,
}

impl PlaneWave {
    pub fn new(direction: Vector3<f64>, ctx: &WaveContext) -> Result<Self, HelmholtzError> {
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return Err(HelmholtzError::InvalidParameter(format!("direction |k̂| = {}", direction.norm())));
        }
        Ok(Self { direction, k: ctx.k() })
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.direction
    }
}

impl ScalarField for PlaneWave {
    fn value(&self, x: &Vector3<f64>) -> Complex64 {
        Complex64::from_polar(1.0, self.k * self.direction.dot(x))
    }
}

impl WaveField for PlaneWave {
    fn gradient(&self, x: &Vector3<f64>) -> Vector3<Complex64> {
        let g = Complex64::new(0.0, self.k) * self.value(x);
        self.direction.map(|c| g * c)
    }
}

/// `G(x, y0)`; evaluates to NaN at the source.
#[derive(Debug, Clone, Copy)]
pub struct PointSource {
    source: Vector3<f64>,
    ctx: WaveContext,
}

impl PointSource {
    pub fn new(source: Vector3<f64>, ctx: &WaveContext) -> Self {
        Self { source, ctx: *ctx }
    }

    pub fn source(&self) -> Vector3<f64> {
        self.source
    }
}

impl ScalarField for PointSource {
    fn value(&self, x: &Vector3<f64>) -> Complex64 {
        greens_function(x, &self.source, &self.ctx).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

impl WaveField for PointSource {
    fn gradient(&self, x: &Vector3<f64>) -> Vector3<Complex64> {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        greens_gradient_y(&self.source, x, &self.ctx).unwrap_or(Vector3::new(nan, nan, nan))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroField;

impl ScalarField for ZeroField {
    fn value(&self, _x: &Vector3<f64>) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
}

impl WaveField for ZeroField {
    fn gradient(&self, _x: &Vector3<f64>) -> Vector3<Complex64> {
        Vector3::zeros()
    }
}

/// Closure adapter for value-only fields.
pub struct FieldFn<F>(pub F);

impl<F> ScalarField for FieldFn<F>
where
    F: Fn(&Vector3<f64>) -> Complex64 + Sync,
{
    fn value(&self, x: &Vector3<f64>) -> Complex64 {
        (self.0)(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> WaveContext {
        WaveContext::new(1.0).unwrap()
    }

    fn laplacian_residual<F: ScalarField>(f: &F, x: &Vector3<f64>, k: f64) -> f64 {
        let h = 2e-4;
        let mut lap = -6.0 * f.value(x);
        for e in [Vector3::x(), Vector3::y(), Vector3::z()] {
            lap += f.value(&(x + e * h)) + f.value(&(x - e * h));
        }
        (lap / (h * h) + f.value(x) * k * k).norm()
    }

    #[test]
    fn plane_wave_basics() {
        let d = Vector3::new(1.0, 1.0, 1.0).normalize();
        let u = PlaneWave::new(d, &ctx()).unwrap();
        assert_eq!(u.value(&Vector3::zeros()), Complex64::new(1.0, 0.0));
        let x = Vector3::new(0.3, -1.2, 2.5);
        assert!((u.value(&x).norm() - 1.0).abs() < 1e-15);
        let k = ctx().k();
        assert!(laplacian_residual(&u, &x, k) < 1e-6 * k * k);
        assert!(PlaneWave::new(Vector3::new(1.0, 1.0, 0.0), &ctx()).is_err());
    }

    #[test]
    fn gradients_match_finite_differences() {
        let c = ctx();
        let pw = PlaneWave::new(Vector3::new(0.0, 0.6, 0.8), &c).unwrap();
        let ps = PointSource::new(Vector3::new(0.1, 0.2, -0.3), &c);
        let x = Vector3::new(0.7, -0.4, 0.9);
        let h = 1e-6;
        let fields: [&dyn WaveField; 2] = [&pw, &ps];
        for f in fields {
            let g = f.gradient(&x);
            for (i, e) in [Vector3::x(), Vector3::y(), Vector3::z()].iter().enumerate() {
                let fd = (f.value(&(x + e * h)) - f.value(&(x - e * h))) / (2.0 * h);
                assert!((fd - g[i]).norm() < 1e-6 * g.norm().max(1.0));
            }
        }
        assert!(laplacian_residual(&ps, &x, c.k()) < 1e-4 * c.k() * c.k());
    }

    #[test]
    fn zero_and_closure() {
        let x = Vector3::new(1.0, 2.0, 3.0);
        assert_eq!(ZeroField.value(&x), Complex64::new(0.0, 0.0));
        let f = FieldFn(|p: &Vector3<f64>| Complex64::new(p.x, p.y));
        assert_eq!(f.value(&x), Complex64::new(1.0, 2.0));
    }
}
