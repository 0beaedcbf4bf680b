use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use super::fields::ScalarField;
use super::quadrature::SphereQuadrature;
use super::HelmholtzError;
use crate::specfun::{
    flat_index, mode_count, outgoing_wave, spherical_bessel_j_upto, spherical_hankel1_upto, HarmonicTable, WaveContext,
    MAX_DEGREE,
};

/// `|j_n(ka)|` below this multiple of `|h_n(ka)|` on an oscillatory mode
/// means `ka` sits on a Dirichlet resonance.
const RESONANCE_TOLERANCE: f64 = 1e-12;

/// Field scattered by a sound-soft ball centred at the origin:
/// `Σ a_{n,m} V_n^m(x)` for `|x| >= radius`.
#[derive(Debug, Clone)]
pub struct SoundSoftSphere {
    radius: f64,
    nmax: usize,
    coefficients: Vec<Complex64>,
    ctx: WaveContext,
}

impl SoundSoftSphere {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    /// Outgoing coefficients `a_{n,m}` in flat order.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn scattered(&self, x: &Vector3<f64>) -> Result<Complex64, HelmholtzError> {
        if x.norm() == 0.0 {
            return Err(HelmholtzError::DeviceSingularity(0));
        }
        let v = outgoing_wave(self.nmax, x, &self.ctx)?;
        Ok(v.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum())
    }
}

impl ScalarField for SoundSoftSphere {
    fn value(&self, x: &Vector3<f64>) -> Complex64 {
        self.scattered(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// Projects `ambient` on `S(0, radius)` onto `Y_n^m`, `n <= nmax`, and
/// returns the outgoing field cancelling it on the sphere:
/// `a_{n,m} = -f_{n,m} / h_n(ka)` where `f_{n,m} = ⟨ambient, Y_n^m⟩`.
pub fn soundsoft_sphere_scatter<F: ScalarField + ?Sized>(
    ambient: &F,
    radius: f64,
    nmax: usize,
    ctx: &WaveContext,
) -> Result<SoundSoftSphere, HelmholtzError> {
    if !(radius > 0.0) {
        return Err(HelmholtzError::InvalidParameter(format!("sphere radius {radius}")));
    }
    if nmax > MAX_DEGREE {
        return Err(HelmholtzError::InvalidParameter(format!("degree {nmax} above {MAX_DEGREE}")));
    }
    let ka = ctx.k() * radius;
    let j = spherical_bessel_j_upto(nmax, ka)?;
    let h = spherical_hankel1_upto(nmax, ka)?;
    for n in 0..=nmax {
        if (n as f64) <= ka && j[n].abs() < RESONANCE_TOLERANCE * h[n].norm() {
            return Err(HelmholtzError::Resonance(n));
        }
    }
    let quad = SphereQuadrature::new(2 * nmax + 2, 4 * nmax + 4);
    let count = mode_count(nmax);
    let projections = quad
        .directions()
        .par_iter()
        .zip(quad.weights().par_iter())
        .try_fold(
            || vec![Complex64::new(0.0, 0.0); count],
            |mut acc, (dir, &w)| -> Result<Vec<Complex64>, HelmholtzError> {
                let u = ambient.value(&(dir.cartesian() * radius)) * w;
                let table = HarmonicTable::new(nmax, dir)?;
                for (a, y) in acc.iter_mut().zip(table.values()) {
                    *a += u * y.conj();
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
    let mut coefficients = vec![Complex64::new(0.0, 0.0); count];
    for n in 0..=nmax {
        for m in -(n as i64)..=n as i64 {
            let i = flat_index(n, m);
            coefficients[i] = -projections[i] / h[n];
        }
    }
    Ok(SoundSoftSphere { radius, nmax, coefficients, ctx: *ctx })
}
