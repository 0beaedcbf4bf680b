use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LaplaceError;

/// `w = 1/z`.
pub fn kelvin_map(z: Complex64) -> Result<Complex64, LaplaceError> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(LaplaceError::KelvinSingularity);
    }
    Ok(z.inv())
}

/// Cloak layout in the physical plane: cloaked disk `B((p, 0), a)`, devices
/// inside `B(0, δ)`, observers outside `B(0, R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloakGeometry2D {
    a: f64,
    p: f64,
    r_far: f64,
    delta: f64,
    alpha: f64,
    beta: f64,
}

impl CloakGeometry2D {
    pub fn new(a: f64, p: f64, r_far: f64, delta: f64) -> Result<Self, LaplaceError> {
        for (name, v) in [("a", a), ("p", p), ("R", r_far), ("delta", delta)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(LaplaceError::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        if !(p > a + delta) {
            return Err(LaplaceError::Geometry(format!("p > a + delta ({p} <= {})", a + delta)));
        }
        if !(r_far > a + p) {
            return Err(LaplaceError::Geometry(format!("R > a + p ({r_far} <= {})", a + p)));
        }
        let d = p * p - a * a;
        let alpha = a / d.abs();
        let beta = p / d;
        if !(1.0 / r_far < beta - alpha) {
            return Err(LaplaceError::Geometry(format!("1/R < beta - alpha ({} >= {})", 1.0 / r_far, beta - alpha)));
        }
        if !(beta + alpha < 1.0 / delta) {
            return Err(LaplaceError::Geometry(format!("beta + alpha < 1/delta ({} >= {})", beta + alpha, 1.0 / delta)));
        }
        Ok(Self { a, p, r_far, delta, alpha, beta })
    }

    /// Geometry whose Kelvin image is centred at `β`: `a = sqrt(p² - p/β)`.
    pub fn with_beta(p: f64, beta: f64, r_far: f64, delta: f64) -> Result<Self, LaplaceError> {
        let a2 = p * p - p / beta;
        if !(a2 > 0.0) {
            return Err(LaplaceError::Geometry(format!("p > 1/beta ({p} <= {})", 1.0 / beta)));
        }
        Self::new(a2.sqrt(), p, r_far, delta)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn far_radius(&self) -> f64 {
        self.r_far
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Centre of the Kelvin image of the cloaked disk.
    pub fn c_star(&self) -> Complex64 {
        Complex64::new(self.beta, 0.0)
    }
}

/// `(α, β)` for a validated geometry.
pub fn kelvin_geometry(g: &CloakGeometry2D) -> (f64, f64) {
    (g.alpha(), g.beta())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_is_fixed() {
        assert_eq!(kelvin_map(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(kelvin_map(Complex64::new(0.0, 0.0)), Err(LaplaceError::KelvinSingularity));
    }

    #[test]
    fn unit_disk_at_two() {
        let g = CloakGeometry2D::new(1.0, 2.0, 4.0, 0.5).unwrap();
        let (alpha, beta) = kelvin_geometry(&g);
        assert!((alpha - 1.0 / 3.0).abs() < 1e-15);
        assert!((beta - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn far_centre_shrinks_image() {
        let g = CloakGeometry2D::new(1.0, 1e6, 3e6, 1.0).unwrap();
        assert!(g.alpha() < 1e-11 && g.beta() < 1e-5);
    }

    #[test]
    fn degenerate_and_touching_layouts_rejected() {
        assert!(CloakGeometry2D::new(1.0, 1.0, 4.0, 0.1).is_err());
        assert!(CloakGeometry2D::new(1.0, 2.0, 4.0, 1.0).is_err());
        assert!(CloakGeometry2D::new(1.0, 2.0, 2.5, 0.5).is_err());
    }

    #[test]
    fn image_disks_separated_for_valid_layouts() {
        let g = CloakGeometry2D::new(1.0, 2.0, 3.0 + 1e-9, 1.0 - 1e-9).unwrap();
        assert!(1.0 / g.far_radius() < g.beta() - g.alpha());
        assert!(g.beta() + g.alpha() < 1.0 / g.delta());
    }

    #[test]
    fn image_of_disk_matches_formulas() {
        let g = CloakGeometry2D::new(0.4, 1.5, 5.0, 0.3).unwrap();
        for k in 0..64 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let z = Complex64::new(g.p(), 0.0) + Complex64::from_polar(g.a(), t);
            let w = kelvin_map(z).unwrap();
            assert!(((w - g.c_star()).norm() - g.alpha()).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn involution(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let z = Complex64::new(re, im);
            prop_assume!(z.norm() > 1e-6);
            let back = kelvin_map(kelvin_map(z).unwrap()).unwrap();
            prop_assert!((back - z).norm() <= 4.0 * f64::EPSILON * z.norm());
        }

        #[test]
        fn circle_maps_to_circle(r in 0.01f64..100.0, t in 0.0f64..6.3) {
            let w = kelvin_map(Complex64::from_polar(r, t)).unwrap();
            prop_assert!((w.norm() - 1.0 / r).abs() <= 4.0 * f64::EPSILON / r);
        }
    }
}
