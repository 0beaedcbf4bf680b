use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::{ScalarField, WaveField};
use super::quadrature::FaceQuadrature;
use super::HelmholtzError;
use crate::specfun::{flat_index, mode_count, outgoing_wave, regular_wave_with_gradient, WaveContext, MAX_DEGREE};

/// Multipolar emitters `x_l` with coefficients `b_{l,n,m}` in flat
/// `(n, m)` order, radiating `Σ_l Σ_{n,m} b_{l,n,m} V_n^m(x - x_l)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviceArray {
    devices: Vec<Vector3<f64>>,
    nmax: usize,
    coefficients: Vec<Vec<Complex64>>,
    ctx: WaveContext,
}

impl DeviceArray {
    pub fn new(
        devices: Vec<Vector3<f64>>,
        nmax: usize,
        coefficients: Vec<Vec<Complex64>>,
        ctx: &WaveContext,
    ) -> Result<Self, HelmholtzError> {
        if nmax > MAX_DEGREE {
            return Err(HelmholtzError::InvalidParameter(format!("degree {nmax} above {MAX_DEGREE}")));
        }
        if coefficients.len() != devices.len() || coefficients.iter().any(|c| c.len() != mode_count(nmax)) {
            return Err(HelmholtzError::InvalidParameter("coefficient table shape".into()));
        }
        Ok(Self { devices, nmax, coefficients, ctx: *ctx })
    }

    pub fn zero(devices: Vec<Vector3<f64>>, nmax: usize, ctx: &WaveContext) -> Result<Self, HelmholtzError> {
        let coefficients = vec![vec![Complex64::new(0.0, 0.0); mode_count(nmax)]; devices.len()];
        Self::new(devices, nmax, coefficients, ctx)
    }

    pub fn devices(&self) -> &[Vector3<f64>] {
        &self.devices
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn context(&self) -> &WaveContext {
        &self.ctx
    }

    /// `b_{l,·,·}` in flat order.
    pub fn coefficients(&self, l: usize) -> &[Complex64] {
        &self.coefficients[l]
    }

    /// `(Σ_m |b_{l,n,m}|²)^{1/2}` for every degree.
    pub fn degree_norms(&self, l: usize) -> Vec<f64> {
        (0..=self.nmax)
            .map(|n| {
                (-(n as i64)..=n as i64)
                    .map(|m| self.coefficients[l][flat_index(n, m)].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    /// Contribution of each degree `n`, summed over devices and orders.
    pub fn degree_contributions(&self, x: &Vector3<f64>) -> Result<Vec<Complex64>, HelmholtzError> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.nmax + 1];
        for (l, xl) in self.devices.iter().enumerate() {
            let v = x - xl;
            if v.norm() < 1e-12 * xl.norm().max(1.0) {
                return Err(HelmholtzError::DeviceSingularity(l));
            }
            let waves = outgoing_wave(self.nmax, &v, &self.ctx)?;
            let b = &self.coefficients[l];
            for (n, slot) in out.iter_mut().enumerate() {
                for m in -(n as i64)..=n as i64 {
                    let i = flat_index(n, m);
                    *slot += b[i] * waves[i];
                }
            }
        }
        Ok(out)
    }

    /// `u_d(x)`.
    pub fn device_field(&self, x: &Vector3<f64>) -> Result<Complex64, HelmholtzError> {
        Ok(self.degree_contributions(x)?.into_iter().sum())
    }
}

impl ScalarField for DeviceArray {
    /// NaN at device points.
    fn value(&self, x: &Vector3<f64>) -> Complex64 {
        self.device_field(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// `b_{l,n,m} = ik ∫_{∂D_l} [-(n·∇u_i) conj(U_n^m(y - x_l)) + u_i n·∇conj(U_n^m(y - x_l))] dS`
/// with `faces[l]` assigned to `devices[l]`.
pub fn multipole_coefficients<F: WaveField + ?Sized>(
    devices: &[Vector3<f64>],
    faces: &[FaceQuadrature],
    field: &F,
    nmax: usize,
    ctx: &WaveContext,
) -> Result<DeviceArray, HelmholtzError> {
    if devices.len() != faces.len() {
        return Err(HelmholtzError::InvalidParameter(format!("{} devices for {} faces", devices.len(), faces.len())));
    }
    let count = mode_count(nmax);
    let ik = Complex64::new(0.0, ctx.k());
    let mut coefficients = Vec::with_capacity(devices.len());
    for (xl, face) in devices.iter().zip(faces) {
        let n = face.normal();
        let acc = face
            .nodes()
            .par_iter()
            .zip(face.weights().par_iter())
            .try_fold(
                || vec![Complex64::new(0.0, 0.0); count],
                |mut acc, (y, &w)| -> Result<Vec<Complex64>, HelmholtzError> {
                    let u = field.value(y) * w;
                    let g = field.gradient(y);
                    let dn = (g[0] * n.x + g[1] * n.y + g[2] * n.z) * w;
                    let (vals, grads) = regular_wave_with_gradient(nmax, &(y - xl), ctx)?;
                    for i in 0..count {
                        let gu = grads[i];
                        let dnu = gu[0] * n.x + gu[1] * n.y + gu[2] * n.z;
                        acc[i] += -dn * vals[i].conj() + u * dnu.conj();
                    }
                    Ok(acc)
                },
            )
            .try_reduce(
                || vec![Complex64::new(0.0, 0.0); count],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    Ok(a)
                },
            )?;
        coefficients.push(acc.into_iter().map(|c| c * ik).collect());
    }
    DeviceArray::new(devices.to_vec(), nmax, coefficients, ctx)
}
