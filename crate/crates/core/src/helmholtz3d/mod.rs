//! Three-dimensional Helmholtz exterior cloak.
//!
//! Green's formula on the boundary of a regular tetrahedron `D` reproduces
//! `-u_i` inside `D` and vanishes outside. Expanding the Green's function
//! about four points `x_l` outside `D`, one per face, replaces the surface
//! sources by four multipolar emitters whose combined field agrees with the
//! layer potential outside the union `A` of the convergence balls.

mod fields;
mod geometry;
mod layer;
mod metrics;
mod multipole;
mod quadrature;
mod scatter;
mod slice;

pub use fields::{FieldFn, PlaneWave, PointSource, ScalarField, WaveField, ZeroField};
pub use geometry::{r_eff_star, region_a_contains, truncation_order, TetraCloakGeometry};
pub use layer::{green_device_field, green_exterior_field, LayerPotential};
pub use metrics::{
    cloak_metrics, extended_device_analysis, mollweide_inverse, CloakMetrics, ExtendedDeviceReport, MollweideRaster,
    RASTER_DEVICE, RASTER_OPEN, RASTER_OUTSIDE, RASTER_REGION_A,
};
pub use multipole::{multipole_coefficients, DeviceArray};
pub use quadrature::{gauss_legendre, FaceQuadrature, SphereQuadrature};
pub use scatter::{soundsoft_sphere_scatter, SoundSoftSphere};
pub use slice::{slice_field, FieldSlice};

use thiserror::Error;

use crate::specfun::SpecFunError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HelmholtzError {
    #[error("geometry violates {0}")]
    Geometry(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluation point coincides with device {0}")]
    DeviceSingularity(usize),
    #[error("sphere radius is close to a Dirichlet resonance of degree {0}")]
    Resonance(usize),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}
