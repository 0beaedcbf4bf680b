//! Spherical harmonics and their surface gradients.

use nalgebra::Vector3;
use num_complex::Complex64;

use super::legendre::NormalizedLegendre;
use super::{flat_index, mode_count, ModeIndex, SpecFunError, UnitDirection, MAX_DEGREE};

/// All `Y_n^m` with `n <= nmax` at one direction, optionally with surface
/// gradients, stored in [`flat_index`] order.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    nmax: usize,
    values: Vec<Complex64>,
    gradients: Option<Vec<Vector3<Complex64>>>,
}

impl HarmonicTable {
    /// Values only.
    pub fn new(nmax: usize, dir: &UnitDirection) -> Result<Self, SpecFunError> {
        Self::build(nmax, dir, false)
    }

    /// Values and surface gradients.
    pub fn with_gradients(nmax: usize, dir: &UnitDirection) -> Result<Self, SpecFunError> {
        Self::build(nmax, dir, true)
    }

    fn build(nmax: usize, dir: &UnitDirection, want_grad: bool) -> Result<Self, SpecFunError> {
        if nmax > MAX_DEGREE {
            return Err(SpecFunError::DegreeTooLarge(nmax));
        }
        let leg = NormalizedLegendre::new(nmax, dir.cos_theta(), dir.sin_theta());
        let count = mode_count(nmax);
        let mut values = vec![Complex64::new(0.0, 0.0); count];
        let mut gradients = want_grad.then(|| vec![Vector3::zeros(); count]);
        let theta_hat = dir.theta_hat();
        let phi_hat = dir.phi_hat();
        let phases: Vec<Complex64> =
            (0..=nmax).map(|m| Complex64::from_polar(1.0, m as f64 * dir.phi())).collect();

        for n in 0..=nmax {
            for m in 0..=n {
                let e = phases[m];
                let y = e * leg.value(n, m);
                values[flat_index(n, m as i64)] = y;
                if m > 0 {
                    values[flat_index(n, -(m as i64))] = y.conj();
                }
                if let Some(g) = gradients.as_mut() {
                    let a = e * leg.d_theta(n, m);
                    let b = e * Complex64::new(0.0, m as f64 * leg.over_sin(n, m));
                    let grad = Vector3::new(
                        a * theta_hat.x + b * phi_hat.x,
                        a * theta_hat.y + b * phi_hat.y,
                        a * theta_hat.z + b * phi_hat.z,
                    );
                    g[flat_index(n, m as i64)] = grad;
                    if m > 0 {
                        g[flat_index(n, -(m as i64))] = grad.map(|c| c.conj());
                    }
                }
            }
        }
        Ok(Self { nmax, values, gradients })
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    #[inline]
    pub fn y(&self, n: usize, m: i64) -> Complex64 {
        self.values[flat_index(n, m)]
    }

    /// Surface gradient of `Y_n^m`.
    ///
    /// # Panics
    /// If the table was built without gradients.
    #[inline]
    pub fn grad(&self, n: usize, m: i64) -> Vector3<Complex64> {
        self.gradients.as_ref().expect("table built without gradients")[flat_index(n, m)]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn gradients(&self) -> Option<&[Vector3<Complex64>]> {
        self.gradients.as_deref()
    }
}

/// `Y_n^m(θ, φ)`.
pub fn sph_harm(mode: ModeIndex, dir: &UnitDirection) -> Complex64 {
    let n = mode.n();
    let m = mode.m().unsigned_abs() as usize;
    let leg = NormalizedLegendre::new(n, dir.cos_theta(), dir.sin_theta());
    let y = Complex64::from_polar(leg.value(n, m), m as f64 * dir.phi());
    if mode.m() < 0 {
        y.conj()
    } else {
        y
    }
}

/// Surface gradient `θ̂ ∂_θ Y + φ̂ (1/sin θ) ∂_φ Y`, finite at the poles.
pub fn sph_harm_surface_gradient(mode: ModeIndex, dir: &UnitDirection) -> Vector3<Complex64> {
    let n = mode.n();
    let table = HarmonicTable::with_gradients(n, dir).expect("degree validated by ModeIndex range");
    table.grad(n, mode.m())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_dir(rng: &mut ChaCha8Rng) -> UnitDirection {
        let t: f64 = rng.gen_range(-1.0..1.0);
        UnitDirection::from_angles(t.acos(), rng.gen_range(0.0..2.0 * PI))
    }

    #[test]
    fn constant_mode() {
        let dir = UnitDirection::from_angles(0.4, 1.3);
        let y = sph_harm(ModeIndex::new(0, 0).unwrap(), &dir);
        assert!((y.re - 0.282_094_791_773_878_14).abs() < 1e-15);
        assert_eq!(y.im, 0.0);
        let g = sph_harm_surface_gradient(ModeIndex::new(0, 0).unwrap(), &dir);
        assert!(g.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn negative_order_is_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let dir = random_dir(&mut rng);
            let n = rng.gen_range(1..20usize);
            let m = rng.gen_range(1..=n as i64);
            let a = sph_harm(ModeIndex::new(n, m).unwrap(), &dir);
            let b = sph_harm(ModeIndex::new(n, -m).unwrap(), &dir);
            assert!((a.conj() - b).norm() < 1e-15);
        }
    }

    #[test]
    fn table_agrees_with_single_evaluation() {
        let dir = UnitDirection::from_angles(2.0, 5.0);
        let table = HarmonicTable::new(12, &dir).unwrap();
        for mode in ModeIndex::all_upto(12) {
            assert_eq!(table.y(mode.n(), mode.m()), sph_harm(mode, &dir));
        }
    }

    #[test]
    fn orthonormal_under_quadrature() {
        // Gauss–Legendre nodes in cos θ by Newton on P_n, uniform in φ.
        let nt = 16;
        let np = 32;
        let mut nodes = Vec::new();
        for i in 0..nt {
            let mut x = (PI * (i as f64 + 0.75) / (nt as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for l in 1..nt {
                    let p2 = ((2 * l + 1) as f64 * x * p1 - l as f64 * p0) / (l + 1) as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nt as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        let nmax = 10;
        let count = mode_count(nmax);
        let mut gram = vec![Complex64::new(0.0, 0.0); count * count];
        for &(x, w) in &nodes {
            for j in 0..np {
                let phi = 2.0 * PI * j as f64 / np as f64;
                let dir = UnitDirection::from_angles(x.acos(), phi);
                let t = HarmonicTable::new(nmax, &dir).unwrap();
                let wt = w * 2.0 * PI / np as f64;
                for a in 0..count {
                    for b in 0..count {
                        gram[a * count + b] += t.values()[a] * t.values()[b].conj() * wt;
                    }
                }
            }
        }
        for a in 0..count {
            for b in 0..count {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((gram[a * count + b] - expect).norm() < 1e-10, "({a},{b})");
            }
        }
    }

    #[test]
    fn sum_rules_at_random_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let dir = random_dir(&mut rng);
            let t = HarmonicTable::with_gradients(20, &dir).unwrap();
            for n in 0..=20usize {
                let nf = n as f64;
                let mut sy = 0.0;
                let mut sg = 0.0;
                for m in -(n as i64)..=n as i64 {
                    sy += t.y(n, m).norm_sqr();
                    sg += t.grad(n, m).iter().map(|c| c.norm_sqr()).sum::<f64>();
                }
                assert!((sy - (2.0 * nf + 1.0) / (4.0 * PI)).abs() < 1e-10);
                let expect = nf * (nf + 1.0) * (2.0 * nf + 1.0) / (4.0 * PI);
                assert!((sg - expect).abs() < 1e-8 * expect.max(1.0), "n={n}");
            }
        }
    }

    #[test]
    fn gradient_is_tangential_and_matches_differences() {
        let h = 1e-5;
        let (theta, phi) = (0.9, 2.2);
        let dir = UnitDirection::from_angles(theta, phi);
        let t = HarmonicTable::with_gradients(8, &dir).unwrap();
        for mode in ModeIndex::all_upto(8) {
            let g = t.grad(mode.n(), mode.m());
            let radial: Complex64 = g.iter().zip(dir.cartesian().iter()).map(|(a, b)| a * b).sum();
            assert!(radial.norm() < 1e-10);
            let f = |th: f64, ph: f64| sph_harm(mode, &UnitDirection::from_angles(th, ph));
            let d_theta = (f(theta + h, phi) - f(theta - h, phi)) / (2.0 * h);
            let d_phi = (f(theta, phi + h) - f(theta, phi - h)) / (2.0 * h) / theta.sin();
            let th_hat = dir.theta_hat();
            let ph_hat = dir.phi_hat();
            let gt: Complex64 = g.iter().zip(th_hat.iter()).map(|(a, b)| a * b).sum();
            let gp: Complex64 = g.iter().zip(ph_hat.iter()).map(|(a, b)| a * b).sum();
            assert!((gt - d_theta).norm() < 1e-8, "{mode:?}");
            assert!((gp - d_phi).norm() < 1e-8, "{mode:?}");
        }
    }

    #[test]
    fn gradient_continuous_at_poles() {
        for pole in [0.0, PI] {
            let at = HarmonicTable::with_gradients(6, &UnitDirection::from_angles(pole, 0.0)).unwrap();
            let near_theta = if pole == 0.0 { 1e-7 } else { PI - 1e-7 };
            for phi in [0.0, 1.0, 4.0] {
                let near = HarmonicTable::with_gradients(6, &UnitDirection::from_angles(near_theta, phi)).unwrap();
                for mode in ModeIndex::all_upto(6) {
                    let d = at.grad(mode.n(), mode.m()) - near.grad(mode.n(), mode.m());
                    assert!(d.iter().all(|c| c.norm() < 1e-5), "{mode:?} pole={pole} phi={phi}");
                }
            }
        }
    }
}
