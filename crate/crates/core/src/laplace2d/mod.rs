//! Two-dimensional quasistatic exterior cloak.
//!
//! The physical plane `z` is mapped to `w = 1/z`. There the far field
//! region `|z| > R` becomes the small disk `B(0, 1/R)` and the cloaked disk
//! `B(c, a)` becomes `B(c*, α)` with `c* = β`. A polynomial `P` that is close
//! to 1 on the first disk and close to 0 on the second turns a polynomial
//! approximation `Q0` of the Kelvin-mapped probe into a device potential
//! `Re[Q0 (P - 1)](1/z)`.

mod cloak;
mod disk;
mod fields;
mod geometry;
mod polynomial;
mod probe;
mod region;

pub use cloak::{cloak_polynomial, cloak_polynomial_hermite_oracle, CloakPolynomial, HERMITE_ORACLE_MAX_DEGREE};
pub use disk::{disk_interior_field, disk_scatter, disk_total_field, DielectricDisk};
pub use fields::{device_field, illusion_field, AnalyticFn, AnalyticFunction};
pub use geometry::{kelvin_geometry, kelvin_map, CloakGeometry2D};
pub use polynomial::{ComplexPolynomial, TaylorPolynomial, MAX_POLY_DEGREE};
pub use probe::{probe_approximant, probe_approximant_with_margin, taylor_coefficients, ProbeApproximant};
pub use region::{in_convergence_region, level_set_segments, region_threshold, saddle_point, RegionLabel};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaplaceError {
    #[error("Kelvin map is singular at z = 0")]
    KelvinSingularity,
    #[error("geometry violates {0}")]
    Geometry(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("coefficient overflow while expanding P_{{{n},{s}}}")]
    Overflow { n: usize, s: usize },
    #[error("Hermite system is singular")]
    SingularSystem,
    #[error("input does not look analytic on the expansion disk (tail ratio {0:.3e})")]
    NonAnalytic(f64),
    #[error("dielectric constant {0} is resonant (|1 + ε| too small)")]
    Resonance(f64),
}
