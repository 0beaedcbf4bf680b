//! Spherical special functions and the Helmholtz Green's function.
//!
//! Conventions follow the multipole construction used by the 3-D cloak:
//! associated Legendre functions carry no Condon–Shortley phase, and the
//! spherical harmonics are
//!
//! ```text
//! Y_n^m(θ, φ) = sqrt((2n+1)/(4π) · (n-|m|)!/(n+|m|)!) · P_n^{|m|}(cos θ) · e^{imφ}
//! ```
//!
//! so that `Y_n^{-m} = conj(Y_n^m)`. Cross-checks against libraries using the
//! Condon–Shortley convention must account for the `(-1)^m` difference.

mod bessel;
mod green;
mod harmonics;
mod legendre;

pub use bessel::{
    spherical_bessel_j, spherical_bessel_j_prime, spherical_bessel_j_upto, spherical_bessel_y_upto,
    spherical_hankel1, spherical_hankel1_prime, spherical_hankel1_upto, derivative_table,
};
pub use green::{
    greens_addition_partial, greens_addition_terms, greens_function, greens_gradient_y, outgoing_wave,
    regular_wave, regular_wave_with_gradient, WaveContext, COINCIDENCE_TOLERANCE,
};
pub use harmonics::{sph_harm, sph_harm_surface_gradient, HarmonicTable};
pub use legendre::{assoc_legendre, NormalizedLegendre};

use nalgebra::Vector3;
use thiserror::Error;

/// Largest degree supported by the special-function tables.
///
/// `N = ceil(1.5 k δ)` reaches 227 for a device radius of 24 wavelengths.
pub const MAX_DEGREE: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("argument t = {0} outside the domain t > 0")]
    NonPositiveArgument(f64),
    #[error("degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("order m = {m} invalid for degree n = {n}")]
    InvalidOrder { n: usize, m: i64 },
    #[error("Legendre argument {0} outside [-1, 1]")]
    LegendreDomain(f64),
    #[error("points coincide (|x - y| = {0:e})")]
    Coincident(f64),
    #[error("expansion requires |x - c| > |y - c| (got {outer} <= {inner})")]
    OutsideConvergence { outer: f64, inner: f64 },
    #[error("direction vector has zero length")]
    ZeroDirection,
}

/// A spherical-harmonic mode `(n, m)` with `|m| <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    n: usize,
    m: i64,
}

impl ModeIndex {
    pub fn new(n: usize, m: i64) -> Result<Self, SpecFunError> {
        if m.unsigned_abs() as usize > n {
            return Err(SpecFunError::InvalidOrder { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Position of the mode in a flat `(n, m)` table: `n² + n + m`.
    pub fn flat(&self) -> usize {
        flat_index(self.n, self.m)
    }

    /// Iterates every mode with degree at most `nmax` in flat-table order.
    pub fn all_upto(nmax: usize) -> impl Iterator<Item = ModeIndex> {
        (0..=nmax).flat_map(|n| (-(n as i64)..=n as i64).map(move |m| ModeIndex { n, m }))
    }
}

/// Flat index of `(n, m)` in a table holding all modes of degree `<= nmax`.
#[inline]
pub fn flat_index(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

/// Number of modes with degree `<= nmax`.
#[inline]
pub fn mode_count(nmax: usize) -> usize {
    (nmax + 1) * (nmax + 1)
}

/// A point on the unit sphere, stored both in angles and in Cartesian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitDirection {
    theta: f64,
    phi: f64,
    cos_theta: f64,
    sin_theta: f64,
    cartesian: Vector3<f64>,
}

impl UnitDirection {
    /// Direction from elevation `θ ∈ [0, π]` and azimuth `φ`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let phi = phi.rem_euclid(2.0 * std::f64::consts::PI);
        let (sin_theta, cos_theta) = theta.sin_cos();
        let cartesian = Vector3::new(sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta);
        Self { theta, phi, cos_theta, sin_theta, cartesian }
    }

    /// Normalises `v`; fails for the zero vector.
    pub fn from_vector(v: &Vector3<f64>) -> Result<Self, SpecFunError> {
        let r = v.norm();
        if r == 0.0 || !r.is_finite() {
            return Err(SpecFunError::ZeroDirection);
        }
        let u = v / r;
        let rho = u.x.hypot(u.y);
        let theta = rho.atan2(u.z);
        let phi = u.y.atan2(u.x).rem_euclid(2.0 * std::f64::consts::PI);
        Ok(Self { theta, phi, cos_theta: u.z, sin_theta: rho, cartesian: u })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    pub fn sin_theta(&self) -> f64 {
        self.sin_theta
    }

    pub fn cartesian(&self) -> Vector3<f64> {
        self.cartesian
    }

    /// Unit vector along increasing θ.
    pub fn theta_hat(&self) -> Vector3<f64> {
        let (s, c) = self.phi.sin_cos();
        Vector3::new(self.cos_theta * c, self.cos_theta * s, -self.sin_theta)
    }

    /// Unit vector along increasing φ.
    pub fn phi_hat(&self) -> Vector3<f64> {
        let (s, c) = self.phi.sin_cos();
        Vector3::new(-s, c, 0.0)
    }
}
