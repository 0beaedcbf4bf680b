use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LaplaceError;

/// Below this `|1 + ε|` the disk response is treated as resonant.
const RESONANCE_TOLERANCE: f64 = 1e-12;

/// Homogeneous disk of permittivity `ε` in a background of permittivity 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DielectricDisk {
    center: Complex64,
    radius: f64,
    eps: f64,
}

impl DielectricDisk {
    pub fn new(center: Complex64, radius: f64, eps: f64) -> Result<Self, LaplaceError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(LaplaceError::InvalidParameter(format!("disk radius {radius} must be positive")));
        }
        if !eps.is_finite() {
            return Err(LaplaceError::InvalidParameter(format!("dielectric constant {eps}")));
        }
        if (1.0 + eps).abs() < RESONANCE_TOLERANCE {
            return Err(LaplaceError::Resonance(eps));
        }
        Ok(Self { center, radius, eps })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Reflection factor `λ = (1 - ε)/(1 + ε)`.
    pub fn reflection(&self) -> f64 {
        (1.0 - self.eps) / (1.0 + self.eps)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// Scattered potential outside the disk for the ambient field
/// `Re Σ_k A_k (z - c)^k`:
///
/// ```text
/// u_s(z) = Re Σ_{k>=1} λ r^{2k} conj(A_k) (z - c)^{-k}.
/// ```
pub fn disk_scatter(disk: &DielectricDisk, ambient: &[Complex64], z: Complex64) -> Result<f64, LaplaceError> {
    let zeta = z - disk.center;
    if zeta.norm() == 0.0 {
        return Err(LaplaceError::InvalidParameter("scattered field evaluated at the disk centre".into()));
    }
    let lambda = disk.reflection();
    let r2 = disk.radius * disk.radius;
    let inv = zeta.inv();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow_r = 1.0;
    let mut pow_z = Complex64::new(1.0, 0.0);
    for a in ambient.iter().skip(1) {
        pow_r *= r2;
        pow_z *= inv;
        sum += a.conj() * pow_r * pow_z;
    }
    Ok(lambda * sum.re)
}

/// Potential inside the disk: `Re[A_0 + Σ_{k>=1} (1 + λ) A_k (z - c)^k]`.
pub fn disk_interior_field(disk: &DielectricDisk, ambient: &[Complex64], z: Complex64) -> f64 {
    let zeta = z - disk.center;
    let gain = 1.0 + disk.reflection();
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, a) in ambient.iter().enumerate().rev() {
        let c = if k == 0 { *a } else { a * gain };
        sum = sum * zeta + c;
    }
    sum.re
}

/// Total potential given the ambient field both as an evaluator (outside)
/// and as its local Taylor coefficients about the disk centre.
pub fn disk_total_field<F>(disk: &DielectricDisk, ambient: &[Complex64], ambient_value: F, z: Complex64) -> Result<f64, LaplaceError>
where
    F: Fn(Complex64) -> f64,
{
    if disk.contains(z) {
        Ok(disk_interior_field(disk, ambient, z))
    } else {
        Ok(ambient_value(z) + disk_scatter(disk, ambient, z)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn ambient_value(a: &[Complex64], c: Complex64, z: Complex64) -> f64 {
        a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * (z - c) + v).re
    }

    #[test]
    fn no_contrast_no_scattering() {
        let d = DielectricDisk::new(Complex64::new(1.0, 0.0), 0.5, 1.0).unwrap();
        let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)];
        assert_eq!(disk_scatter(&d, &a, Complex64::new(3.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn near_resonant_reflection() {
        let d = DielectricDisk::new(Complex64::new(1.1, 0.0), 0.2, -0.99).unwrap();
        assert!((d.reflection() - 199.0).abs() < 1e-9);
        assert!(matches!(DielectricDisk::new(Complex64::new(0.0, 0.0), 1.0, -1.0), Err(LaplaceError::Resonance(_))));
    }

    #[test]
    fn interface_conditions_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let eps = rng.gen_range(-5.0..5.0);
            if (1.0f64 + eps).abs() < 0.05 {
                continue;
            }
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let r = rng.gen_range(0.2..1.0);
            let d = DielectricDisk::new(c, r, eps).unwrap();
            let deg = rng.gen_range(1..=10);
            let a: Vec<Complex64> = (0..=deg).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let outside = |z: Complex64| ambient_value(&a, c, z) + disk_scatter(&d, &a, z).unwrap();
            let inside = |z: Complex64| disk_interior_field(&d, &a, z);
            // Normal derivatives from the complex derivative: ∂_n Re F = Re(F' n).
            let lambda = d.reflection();
            let d_out = |z: Complex64, n: Complex64| {
                let zeta = z - c;
                let mut f = Complex64::new(0.0, 0.0);
                for (k, ak) in a.iter().enumerate().skip(1) {
                    let kf = k as f64;
                    f += ak * kf * zeta.powi(k as i32 - 1);
                    f -= ak.conj() * (lambda * kf * r.powi(2 * k as i32)) * zeta.powi(-(k as i32) - 1);
                }
                (f * n).re
            };
            let d_in = |z: Complex64, n: Complex64| {
                let zeta = z - c;
                let f: Complex64 = a
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, ak)| ak * ((1.0 + lambda) * k as f64) * zeta.powi(k as i32 - 1))
                    .sum();
                (f * n).re
            };
            let scale = a.iter().map(|v| v.norm()).fold(1.0, f64::max) * (1.0 + lambda.abs()) * deg as f64;
            for j in 0..64 {
                let t = 2.0 * PI * j as f64 / 64.0;
                let n = Complex64::from_polar(1.0, t);
                let z = c + n * r;
                let jump = (outside(z) - inside(z)).abs();
                assert!(jump < 1e-8 * scale, "potential jump {jump}");
                let flux = (d_out(z, n) - eps * d_in(z, n)).abs();
                assert!(flux < 1e-8 * scale / r, "flux jump {flux}");
            }
        }
    }
}
