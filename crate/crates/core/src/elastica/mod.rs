//! Transformation elastodynamics and mass-spring networks.
//!
//! Under a change of coordinates `x' = x'(x)` with displacement mixing
//! matrix `B`, the elastodynamic equations keep their form only with a
//! Willis-type material. The discrete analogue moves the nodes of a spring
//! network while keeping each spring's original force direction, which calls
//! for torque springs: two-terminal trusses exerting `±k' v [v·(u_2 − u_1)]`.

mod network;
mod tensor;
mod torque;

pub use network::{
    dynamic_condensation, solve_forced, transform_network, Mass, Node, PinnedTag, Spring, SpringNetwork,
    RESONANCE_CONDITION,
};
pub use tensor::{
    transform_material, willis_form, willis_residuals, ElasticityTensor4, Gradient, Tensor3, TransformJet,
    WillisForm, WillisMaterial,
};
pub use torque::{
    build_torque_spring, inverse_torque_constant, measure_k, resonance_proximity, torque_response_error,
    torque_spring_constant, TorqueSpringSpec,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElasticaError {
    #[error("dimension {0} is not 2 or 3")]
    Dimension(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("transformation Jacobian has determinant {0}")]
    NonPositiveDeterminant(f64),
    #[error("displacement map B is singular")]
    SingularB,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("network: {0}")]
    Network(String),
    #[error("nodes {0} and {1} coincide")]
    CoincidentNodes(usize, usize),
    #[error("map is not invertible at node {0}")]
    NonInvertibleMap(usize),
    #[error("degenerate torque-spring geometry: {0}")]
    DegenerateGeometry(String),
    #[error("interior resonance at omega = {omega} (condition {condition:e})")]
    InteriorResonance { omega: f64, condition: f64 },
    #[error("torque spring resonance: m omega^2 = 2K = {0}")]
    Resonance(f64),
}
