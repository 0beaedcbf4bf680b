//! Free-space Helmholtz Green's function and its multipole expansion.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::{derivative_table, h_table, j_table};
use super::harmonics::HarmonicTable;
use super::{flat_index, mode_count, SpecFunError, UnitDirection, MAX_DEGREE};

/// Below this separation the Green's function is treated as singular.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-14;

/// Time-harmonic setting: wavelength, wavenumber, propagation speed and
/// angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveContext {
    wavelength: f64,
    k: f64,
    speed: f64,
    omega: f64,
}

impl WaveContext {
    /// Unit propagation speed.
    pub fn new(wavelength: f64) -> Result<Self, SpecFunError> {
        Self::with_speed(wavelength, 1.0)
    }

    pub fn with_speed(wavelength: f64, speed: f64) -> Result<Self, SpecFunError> {
        for v in [wavelength, speed] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SpecFunError::NonPositiveArgument(v));
            }
        }
        let k = 2.0 * PI / wavelength;
        Ok(Self { wavelength, k, speed, omega: k * speed })
    }

    /// Context with wavenumber `k` and unit speed.
    pub fn from_wavenumber(k: f64) -> Result<Self, SpecFunError> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(SpecFunError::NonPositiveArgument(k));
        }
        Ok(Self { wavelength: 2.0 * PI / k, k, speed: 1.0, omega: k })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// `G(x, y) = e^{ik|x-y|} / (4π|x-y|)`.
pub fn greens_function(x: &Vector3<f64>, y: &Vector3<f64>, ctx: &WaveContext) -> Result<Complex64, SpecFunError> {
    let r = (x - y).norm();
    if r < COINCIDENCE_TOLERANCE {
        return Err(SpecFunError::Coincident(r));
    }
    Ok(Complex64::from_polar(1.0 / (4.0 * PI * r), ctx.k * r))
}

/// Gradient of `G(x, y)` with respect to `y`.
pub fn greens_gradient_y(
    x: &Vector3<f64>,
    y: &Vector3<f64>,
    ctx: &WaveContext,
) -> Result<Vector3<Complex64>, SpecFunError> {
    let d = y - x;
    let r = d.norm();
    if r < COINCIDENCE_TOLERANCE {
        return Err(SpecFunError::Coincident(r));
    }
    let g = Complex64::from_polar(1.0 / (4.0 * PI * r), ctx.k * r);
    let radial = g * Complex64::new(-1.0 / r, ctx.k) / r;
    Ok(d.map(|c| radial * c))
}

fn check_degree(nmax: usize) -> Result<(), SpecFunError> {
    if nmax > MAX_DEGREE {
        Err(SpecFunError::DegreeTooLarge(nmax))
    } else {
        Ok(())
    }
}

/// `V_n^m(v) = h_n^{(1)}(k|v|) Y_n^m(v̂)` for all `n <= nmax`, in flat order.
pub fn outgoing_wave(nmax: usize, v: &Vector3<f64>, ctx: &WaveContext) -> Result<Vec<Complex64>, SpecFunError> {
    check_degree(nmax)?;
    let dir = UnitDirection::from_vector(v).map_err(|_| SpecFunError::Coincident(0.0))?;
    let h = h_table(nmax, ctx.k * v.norm());
    let table = HarmonicTable::new(nmax, &dir)?;
    Ok(scale_by_degree(nmax, table.values(), &h))
}

/// `U_n^m(v) = j_n(k|v|) Y_n^m(v̂)` for all `n <= nmax`, in flat order.
/// At `v = 0` only `U_0^0 = 1/√(4π)` survives.
pub fn regular_wave(nmax: usize, v: &Vector3<f64>, ctx: &WaveContext) -> Result<Vec<Complex64>, SpecFunError> {
    check_degree(nmax)?;
    let r = v.norm();
    if r == 0.0 {
        let mut out = vec![Complex64::new(0.0, 0.0); mode_count(nmax)];
        out[0] = Complex64::new(0.5 / PI.sqrt(), 0.0);
        return Ok(out);
    }
    let dir = UnitDirection::from_vector(v)?;
    let j: Vec<Complex64> = j_table(nmax, ctx.k * r).into_iter().map(Complex64::from).collect();
    let table = HarmonicTable::new(nmax, &dir)?;
    Ok(scale_by_degree(nmax, table.values(), &j))
}

/// `U_n^m(v)` together with its Cartesian gradient
/// `k v̂ j_n'(k|v|) Y_n^m + (j_n(k|v|)/|v|) ∇_S Y_n^m`. Requires `v ≠ 0`.
pub fn regular_wave_with_gradient(
    nmax: usize,
    v: &Vector3<f64>,
    ctx: &WaveContext,
) -> Result<(Vec<Complex64>, Vec<Vector3<Complex64>>), SpecFunError> {
    check_degree(nmax)?;
    let r = v.norm();
    let dir = UnitDirection::from_vector(v).map_err(|_| SpecFunError::Coincident(r))?;
    let t = ctx.k * r;
    let j = j_table(nmax + 1, t);
    let jp = derivative_table(&j, t);
    let table = HarmonicTable::with_gradients(nmax, &dir)?;
    let grads = table.gradients().expect("built with gradients");
    let rhat = dir.cartesian();
    let mut values = Vec::with_capacity(mode_count(nmax));
    let mut gradients = Vec::with_capacity(mode_count(nmax));
    for n in 0..=nmax {
        let radial = ctx.k * jp[n];
        let tangential = j[n] / r;
        for m in -(n as i64)..=n as i64 {
            let idx = flat_index(n, m);
            let y = table.values()[idx];
            values.push(y * j[n]);
            let gs = grads[idx];
            gradients.push(Vector3::new(
                y * (radial * rhat.x) + gs.x * tangential,
                y * (radial * rhat.y) + gs.y * tangential,
                y * (radial * rhat.z) + gs.z * tangential,
            ));
        }
    }
    Ok((values, gradients))
}

fn scale_by_degree(nmax: usize, y: &[Complex64], radial: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(mode_count(nmax));
    for (n, f) in radial.iter().enumerate().take(nmax + 1) {
        for m in -(n as i64)..=n as i64 {
            out.push(y[flat_index(n, m)] * f);
        }
    }
    out
}

/// Contribution of each degree `n = 0..=nmax` to the expansion
/// `G(x, y) = ik Σ_n Σ_m V_n^m(x - c) conj(U_n^m(y - c))`.
pub fn greens_addition_terms(
    x: &Vector3<f64>,
    y: &Vector3<f64>,
    center: &Vector3<f64>,
    nmax: usize,
    ctx: &WaveContext,
) -> Result<Vec<Complex64>, SpecFunError> {
    let outer = (x - center).norm();
    let inner = (y - center).norm();
    if outer <= inner {
        return Err(SpecFunError::OutsideConvergence { outer, inner });
    }
    let v = outgoing_wave(nmax, &(x - center), ctx)?;
    let u = regular_wave(nmax, &(y - center), ctx)?;
    let ik = Complex64::new(0.0, ctx.k);
    Ok((0..=nmax)
        .map(|n| {
            let s: Complex64 = (-(n as i64)..=n as i64)
                .map(|m| {
                    let i = flat_index(n, m);
                    v[i] * u[i].conj()
                })
                .sum();
            ik * s
        })
        .collect())
}

/// Truncated addition-theorem sum through degree `nmax`.
pub fn greens_addition_partial(
    x: &Vector3<f64>,
    y: &Vector3<f64>,
    center: &Vector3<f64>,
    nmax: usize,
    ctx: &WaveContext,
) -> Result<Complex64, SpecFunError> {
    Ok(greens_addition_terms(x, y, center, nmax, ctx)?.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{spherical_bessel_j_upto, spherical_bessel_y_upto};
    use proptest::prelude::*;

    fn ctx() -> WaveContext {
        WaveContext::new(1.0).unwrap()
    }

    #[test]
    fn context_relations() {
        let c = WaveContext::with_speed(0.37, 343.0).unwrap();
        assert!((c.k() * c.wavelength() - 2.0 * PI).abs() < 1e-14);
        assert!((c.omega() - c.k() * 343.0).abs() < 1e-10);
        assert!(WaveContext::new(0.0).is_err());
    }

    #[test]
    fn modulus_at_quarter_pi_separation() {
        let x = Vector3::new(0.1, 0.2, 0.3);
        let y = x + Vector3::new(1.0 / (4.0 * PI), 0.0, 0.0);
        let g = greens_function(&x, &y, &ctx()).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hand_value() {
        let x = Vector3::new(1.0, 0.0, 0.0);
        let y = Vector3::new(0.3, 0.0, 0.0);
        let g = greens_function(&x, &y, &ctx()).unwrap();
        let expect = Complex64::from_polar(1.0, 2.0 * PI * 0.7) / (4.0 * PI * 0.7);
        assert!((g - expect).norm() < 1e-15);
    }

    #[test]
    fn coincident_points_rejected() {
        let x = Vector3::new(1.0, 0.0, 0.0);
        assert!(matches!(greens_function(&x, &x, &ctx()), Err(SpecFunError::Coincident(_))));
    }

    #[test]
    fn gradient_matches_differences() {
        let x = Vector3::new(0.2, -0.1, 0.4);
        let y = Vector3::new(-0.5, 0.3, 0.9);
        let g = greens_gradient_y(&x, &y, &ctx()).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut e = Vector3::zeros();
            e[i] = h;
            let fd = (greens_function(&x, &(y + e), &ctx()).unwrap() - greens_function(&x, &(y - e), &ctx()).unwrap())
                / (2.0 * h);
            assert!((fd - g[i]).norm() < 1e-7);
        }
    }

    #[test]
    fn addition_theorem_matches_closed_form() {
        let c = ctx();
        let center = Vector3::zeros();
        let x = Vector3::new(0.2, -0.5, 0.84).normalize();
        let y = Vector3::new(-0.3, 0.1, 0.05).normalize() * 0.3;
        let s = greens_addition_partial(&x, &y, &center, 40, &c).unwrap();
        let g = greens_function(&x, &y, &c).unwrap();
        assert!((s - g).norm() < 1e-10, "{}", (s - g).norm());
    }

    #[test]
    fn centered_source_needs_only_monopole() {
        let c = ctx();
        let y = Vector3::new(0.1, 0.2, -0.3);
        let x = Vector3::new(1.0, 0.5, 0.2);
        let s = greens_addition_partial(&x, &y, &y, 0, &c).unwrap();
        let g = greens_function(&x, &y, &c).unwrap();
        assert!((s - g).norm() < 1e-15 * g.norm().max(1.0) * 10.0);
    }

    #[test]
    fn expansion_rejects_inner_point_outside() {
        let c = ctx();
        let z = Vector3::zeros();
        let r = greens_addition_partial(&Vector3::new(0.2, 0.0, 0.0), &Vector3::new(0.5, 0.0, 0.0), &z, 5, &c);
        assert!(matches!(r, Err(SpecFunError::OutsideConvergence { .. })));
    }

    #[test]
    fn regular_wave_gradient_matches_differences() {
        let c = ctx();
        let v = Vector3::new(0.3, -0.7, 0.4);
        let (_, grad) = regular_wave_with_gradient(6, &v, &c).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut e = Vector3::zeros();
            e[i] = h;
            let p = regular_wave(6, &(v + e), &c).unwrap();
            let m = regular_wave(6, &(v - e), &c).unwrap();
            for idx in 0..p.len() {
                let fd = (p[idx] - m[idx]) / (2.0 * h);
                assert!((fd - grad[idx][i]).norm() < 1e-7, "idx={idx} axis={i}");
            }
        }
    }

    proptest! {
        #[test]
        fn wronskian(n in 0usize..60, t in 0.5f64..80.0) {
            let j = spherical_bessel_j_upto(n + 1, t).unwrap();
            let y = spherical_bessel_y_upto(n + 1, t).unwrap();
            let jp = derivative_table(&j, t);
            let yp = derivative_table(&y, t);
            let w = j[n] * yp[n] - jp[n] * y[n];
            let expect = 1.0 / (t * t);
            prop_assume!(y[n].is_finite() && yp[n].is_finite());
            prop_assert!(((w - expect) / expect).abs() < 1e-10, "w={} expect={}", w, expect);
        }

        #[test]
        fn reciprocity(ax in -2.0f64..2.0, ay in -2.0f64..2.0, az in -2.0f64..2.0,
                       bx in -2.0f64..2.0, by in -2.0f64..2.0, bz in -2.0f64..2.0) {
            let x = Vector3::new(ax, ay, az);
            let y = Vector3::new(bx, by, bz);
            prop_assume!((x - y).norm() > 1e-6);
            let c = ctx();
            prop_assert_eq!(greens_function(&x, &y, &c).unwrap(), greens_function(&y, &x, &c).unwrap());
        }
    }
}
