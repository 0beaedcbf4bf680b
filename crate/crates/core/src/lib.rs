//! Active exterior cloaking and transformation elastodynamics.
//!
//! The crate is organised around four numerical subsystems:
//!
//! * [`specfun`]: spherical Bessel/Hankel functions, associated Legendre
//!   functions, spherical harmonics with their surface gradients, and the
//!   Helmholtz Green's function with its multipole addition theorem.
//! * [`laplace2d`]: the two-dimensional quasistatic exterior cloak built from
//!   the Kelvin inversion and the `P_{n,s}` cloaking polynomials.
//! * [`helmholtz3d`]: the three-dimensional Helmholtz exterior cloak, where the
//!   Green's formula layer potential on a tetrahedron is replaced by four
//!   multipolar devices.
//! * [`elastica`]: transformed Willis-type material tensors, spring network
//!   transformation, and torque-spring synthesis with dynamic condensation.
//!
//! [`export`] holds the CSV/PGM/JSON writers shared by the experiment drivers.

pub mod elastica;
pub mod export;
pub mod helmholtz3d;
pub mod laplace2d;
pub mod specfun;

pub use num_complex::Complex64;
