use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::network::{dynamic_condensation, Mass, Node, Spring, SpringNetwork};
use super::ElasticaError;

/// Design parameters of the eight-spring torque-spring truss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorqueSpringSpec {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// Unit force direction, not parallel to `x2 − x1`.
    pub v: Vec<f64>,
    /// Offset of `y_i = x_i + ρ v`.
    pub rho: f64,
    /// Offset of `z_i = y_i + w`.
    pub w: Vec<f64>,
    pub k: f64,
    /// Internal mass on `t_1`, `t_2`.
    pub mass: Mass,
    pub omega: f64,
}

impl TorqueSpringSpec {
    /// Planar design with `x1 = 0`, `x2 = e_1`, `v = (0.6, 0.8)`.
    pub fn default_2d() -> Self {
        Self {
            x1: vec![0.0, 0.0],
            x2: vec![1.0, 0.0],
            v: vec![0.6, 0.8],
            rho: 0.5,
            w: vec![-1.0, 0.3],
            k: 1.0,
            mass: Mass::Finite(1.0),
            omega: 2.0,
        }
    }

    /// [`Self::default_2d`] embedded in the plane `z = 0`.
    pub fn default_3d() -> Self {
        let s = Self::default_2d();
        let lift = |v: Vec<f64>| vec![v[0], v[1], 0.0];
        Self { x1: lift(s.x1), x2: lift(s.x2), v: lift(s.v), w: lift(s.w), ..s }
    }

    pub fn pinned(&self) -> Self {
        Self { mass: Mass::PINNED, ..self.clone() }
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        let add = |p: &[f64]| p.iter().zip(shift).map(|(a, b)| a + b).collect();
        Self { x1: add(&self.x1), x2: add(&self.x2), ..self.clone() }
    }

    fn mass_value(&self) -> f64 {
        match self.mass {
            Mass::Finite(m) => m,
            Mass::Pinned(_) => f64::INFINITY,
        }
    }

    /// `k'` at `self.omega` from the measured `K`.
    pub fn k_prime(&self) -> Result<f64, ElasticaError> {
        torque_spring_constant(measure_k(self)?, self.mass_value(), self.omega)
    }

    /// `m ω² − 2K > 0`, the condition for a positive `k'`.
    pub fn is_stable(&self) -> Result<bool, ElasticaError> {
        let m = self.mass_value();
        Ok(m.is_infinite() || m * self.omega * self.omega - 2.0 * measure_k(self)? > 0.0)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

fn parallel(a: &[f64], b: &[f64]) -> bool {
    let (na, nb) = (norm(a), norm(b));
    (na * na * nb * nb - dot(a, b).powi(2)).max(0.0).sqrt() <= 1e-12 * na * nb
}

/// Determinant of the 3×3 matrix with rows `a`, `b`, `c`.
fn triple(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn check_spec(spec: &TorqueSpringSpec) -> Result<usize, ElasticaError> {
    let dim = spec.x1.len();
    if dim != 2 && dim != 3 {
        return Err(ElasticaError::Dimension(dim));
    }
    if [&spec.x2, &spec.v, &spec.w].iter().any(|p| p.len() != dim) {
        return Err(ElasticaError::Shape("torque spring vectors differ in length".into()));
    }
    if (norm(&spec.v) - 1.0).abs() > 1e-12 {
        return Err(ElasticaError::InvalidParameter(format!("|v| = {}", norm(&spec.v))));
    }
    if !(spec.rho > 0.0) || !(spec.k > 0.0) {
        return Err(ElasticaError::InvalidParameter(format!("rho = {}, k = {}", spec.rho, spec.k)));
    }
    if let Mass::Finite(m) = spec.mass {
        if !(m > 0.0) {
            return Err(ElasticaError::InvalidParameter(format!("internal mass {m}")));
        }
    }
    if !(spec.omega >= 0.0) {
        return Err(ElasticaError::InvalidParameter(format!("omega {}", spec.omega)));
    }
    let e = axpy(&spec.x2, -1.0, &spec.x1);
    if norm(&e) == 0.0 {
        return Err(ElasticaError::DegenerateGeometry("x1 = x2".into()));
    }
    if parallel(&spec.v, &e) {
        return Err(ElasticaError::DegenerateGeometry("v is parallel to x2 - x1; use a normal spring".into()));
    }
    if norm(&spec.w) == 0.0 || parallel(&spec.w, &spec.v) || parallel(&spec.w, &e) {
        return Err(ElasticaError::DegenerateGeometry("w must be nonzero and not parallel to v or x2 - x1".into()));
    }
    // Three springs meet at y_1; they balance a nonzero tension only if coplanar.
    if dim == 3 && triple(&spec.v, &e, &spec.w).abs() > 1e-12 * norm(&e) * norm(&spec.w) {
        return Err(ElasticaError::DegenerateGeometry("w must lie in the plane of v and x2 - x1".into()));
    }
    Ok(dim)
}

/// Nodes `[x1, x2, y1, y2, z1, z2, t1, t2]` (ids 0..8), the eight springs of
/// constant `k`, masses on `t1`, `t2` and terminals `{x1, x2}`.
pub fn build_torque_spring(spec: &TorqueSpringSpec) -> Result<SpringNetwork, ElasticaError> {
    check_spec(spec)?;
    let y1 = axpy(&spec.x1, spec.rho, &spec.v);
    let y2 = axpy(&spec.x2, spec.rho, &spec.v);
    let z1 = axpy(&y1, 1.0, &spec.w);
    let z2 = axpy(&y2, 1.0, &spec.w);
    let t1 = axpy(&z1, 1.0, &spec.v);
    let t2 = axpy(&z2, 1.0, &spec.v);
    let positions = [spec.x1.clone(), spec.x2.clone(), y1, y2, z1, z2, t1, t2];
    for a in 0..positions.len() {
        for b in a + 1..positions.len() {
            let gap = norm(&axpy(&positions[a], -1.0, &positions[b]));
            if gap <= 1e-12 * norm(&positions[a]).max(1.0) {
                return Err(ElasticaError::DegenerateGeometry(format!("construction nodes {a} and {b} coincide")));
            }
        }
    }
    let nodes = positions
        .into_iter()
        .enumerate()
        .map(|(id, position)| Node { id, position, mass: if id >= 6 { spec.mass } else { Mass::Finite(0.0) } })
        .collect();
    let pairs = [(0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5), (4, 6), (5, 7)];
    let springs = pairs.iter().map(|&(i, j)| Spring { i, j, k: spec.k, direction: None }).collect();
    Ok(SpringNetwork { nodes, springs, terminals: vec![0, 1] })
}

/// Coefficient of `v vᵀ` in the `(1,1)` block of a two-terminal response.
fn vv_coefficient(s: &DMatrix<f64>, v: &[f64]) -> f64 {
    let dim = v.len();
    (0..dim).flat_map(|p| (0..dim).map(move |q| (p, q))).map(|(p, q)| v[p] * s[(p, q)] * v[q]).sum()
}

fn measure_k_once(spec: &TorqueSpringSpec) -> Result<f64, ElasticaError> {
    let net = build_torque_spring(&spec.pinned())?;
    let s = dynamic_condensation(&net, 0.0, &net.terminals)?;
    Ok(vv_coefficient(&s, &spec.v))
}

/// `K` read off the static response with the `t` nodes pinned; checks
/// that it scales linearly with the spring constant.
pub fn measure_k(spec: &TorqueSpringSpec) -> Result<f64, ElasticaError> {
    let k = measure_k_once(spec)?;
    let doubled = measure_k_once(&TorqueSpringSpec { k: 2.0 * spec.k, ..spec.clone() })?;
    if (doubled - 2.0 * k).abs() > 1e-12 * k.abs().max(f64::MIN_POSITIVE) {
        return Err(ElasticaError::Network(format!("K = {k} not proportional to k (2k gives {doubled})")));
    }
    Ok(k)
}

/// `k' = K m ω² / (m ω² − 2K)`; an infinite `m` gives `k' = K`.
pub fn torque_spring_constant(k: f64, m: f64, omega: f64) -> Result<f64, ElasticaError> {
    if m.is_infinite() {
        return Ok(k);
    }
    let mw2 = m * omega * omega;
    let gap = mw2 - 2.0 * k;
    if gap.abs() <= 1e-14 * mw2.abs().max(k.abs()) {
        return Err(ElasticaError::Resonance(mw2));
    }
    Ok(k * mw2 / gap)
}

/// `K = k' m ω² / (2k' + m ω²)`.
pub fn inverse_torque_constant(k_prime: f64, m: f64, omega: f64) -> f64 {
    if m.is_infinite() {
        return k_prime;
    }
    let mw2 = m * omega * omega;
    k_prime * mw2 / (2.0 * k_prime + mw2)
}

/// `|m ω² − 2K| / (m ω²)`; small values mean the truss is near resonance.
pub fn resonance_proximity(k: f64, m: f64, omega: f64) -> f64 {
    if m.is_infinite() {
        return 1.0;
    }
    let mw2 = m * omega * omega;
    (mw2 - 2.0 * k).abs() / mw2
}

/// Condenses the truss at `spec.omega` and returns `(k', e)` where `e` is
/// the largest deviation from `k' v vᵀ ⊗ [[1, −1], [−1, 1]]` relative to `|k'|`.
pub fn torque_response_error(spec: &TorqueSpringSpec) -> Result<(f64, f64), ElasticaError> {
    let k_prime = spec.k_prime()?;
    let net = build_torque_spring(spec)?;
    let s = dynamic_condensation(&net, spec.omega, &net.terminals)?;
    let dim = spec.v.len();
    let mut worst: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let sign = if a == b { 1.0 } else { -1.0 };
            for p in 0..dim {
                for q in 0..dim {
                    let expected = sign * k_prime * spec.v[p] * spec.v[q];
                    worst = worst.max((s[(a * dim + p, b * dim + q)] - expected).abs());
                }
            }
        }
    }
    Ok((k_prime, worst / k_prime.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_counts() {
        let net = build_torque_spring(&TorqueSpringSpec::default_2d()).unwrap();
        assert_eq!(net.nodes.len(), 8);
        assert_eq!(net.springs.len(), 8);
        let massive: Vec<usize> =
            net.nodes.iter().filter(|n| matches!(n.mass, Mass::Finite(m) if m > 0.0)).map(|n| n.id).collect();
        assert_eq!(massive, vec![6, 7]);
        assert_eq!(net.terminals, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_designs() {
        let s = TorqueSpringSpec::default_2d();
        let parallel_v = TorqueSpringSpec { v: vec![1.0, 0.0], ..s.clone() };
        assert!(matches!(build_torque_spring(&parallel_v), Err(ElasticaError::DegenerateGeometry(_))));
        let bad_w = TorqueSpringSpec { w: vec![1.2, 1.6], ..s.clone() };
        assert!(matches!(build_torque_spring(&bad_w), Err(ElasticaError::DegenerateGeometry(_))));
        let off_plane = TorqueSpringSpec { w: vec![-1.0, 0.3, 0.2], ..TorqueSpringSpec::default_3d() };
        assert!(matches!(build_torque_spring(&off_plane), Err(ElasticaError::DegenerateGeometry(_))));
        // y_1 lands on x_2.
        let clash = TorqueSpringSpec { x2: vec![0.3, 0.4], ..s.clone() };
        assert!(matches!(build_torque_spring(&clash), Err(ElasticaError::DegenerateGeometry(_))));
        let not_unit = TorqueSpringSpec { v: vec![0.6, 0.7], ..s };
        assert!(build_torque_spring(&not_unit).is_err());
    }

    #[test]
    fn static_truss_is_rank_one() {
        // Stiffness on (u1, u2, w1, w2) with y, z condensed out.
        let s = TorqueSpringSpec::default_2d();
        let mut net = build_torque_spring(&s).unwrap();
        net.terminals = vec![0, 1, 6, 7];
        let k = dynamic_condensation(&net, 0.0, &[0, 1, 6, 7]).unwrap();
        let eig = k.clone().symmetric_eigen();
        let big = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rank = eig.eigenvalues.iter().filter(|v| v.abs() > 1e-10 * big).count();
        assert_eq!(rank, 1);
        let v = &s.v;
        let c = nalgebra::DVector::from_vec(vec![-v[0], -v[1], v[0], v[1], v[0], v[1], -v[0], -v[1]]);
        let kc = &k * &c;
        let coeff = c.dot(&kc) / c.norm_squared();
        assert!((&k - &c * c.transpose() * (coeff / c.norm_squared())).abs().max() < 1e-12 * big);
    }

    #[test]
    fn measured_k_properties() {
        for s in [TorqueSpringSpec::default_2d(), TorqueSpringSpec::default_3d()] {
            let k = measure_k(&s).unwrap();
            assert!(k > 0.0);
            let shift = vec![3.0, -2.0, 0.5][..s.x1.len()].to_vec();
            let kt = measure_k(&s.translated(&shift)).unwrap();
            assert!((kt - k).abs() < 1e-12 * k);
        }
    }

    #[test]
    fn closed_form_constant() {
        // m ω² = 4K gives k' = 2K.
        assert!((torque_spring_constant(0.5, 2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(torque_spring_constant(0.7, f64::INFINITY, 3.0).unwrap(), 0.7);
        assert!(matches!(torque_spring_constant(1.0, 2.0, 1.0), Err(ElasticaError::Resonance(_))));
        for (k, m, w) in [(0.3, 1.0, 2.0), (1.7, 0.4, 0.5), (2.0, 3.0, 1.1)] {
            let kp = torque_spring_constant(k, m, w).unwrap();
            assert!((inverse_torque_constant(kp, m, w) - k).abs() < 1e-14 * k);
        }
        assert!((resonance_proximity(1.0, 4.0, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn condensed_response_matches_closed_form() {
        let base = TorqueSpringSpec::default_2d();
        let k = measure_k(&base).unwrap();
        let resonance = (2.0 * k).sqrt();
        for omega in [0.3, 0.7, 0.95 * resonance, 1.05 * resonance, 2.0, 5.0] {
            let (kp, err) = torque_response_error(&TorqueSpringSpec { omega, ..base.clone() }).unwrap();
            assert!(err < 1e-10, "omega {omega}: k' {kp}, error {err}");
        }
        let (kp, err) = torque_response_error(&base.pinned()).unwrap();
        assert!((kp - k).abs() < 1e-15 && err < 1e-10);
        let (_, err) = torque_response_error(&TorqueSpringSpec { omega: 1.3, ..TorqueSpringSpec::default_3d() }).unwrap();
        assert!(err < 1e-10);
    }

    #[test]
    fn zero_frequency_is_floppy() {
        let net = build_torque_spring(&TorqueSpringSpec::default_2d()).unwrap();
        let s = dynamic_condensation(&net, 0.0, &[0, 1]).unwrap();
        assert!(s.abs().max() < 1e-12);
    }

    #[test]
    fn terminal_forces_balance() {
        let s = TorqueSpringSpec::default_2d();
        let net = build_torque_spring(&s).unwrap();
        let resp = dynamic_condensation(&net, 1.3, &[0, 1]).unwrap();
        let u = nalgebra::DVector::from_vec(vec![0.2, -0.1, 0.5, 0.4]);
        let f = &resp * &u;
        assert!((f[0] + f[2]).abs() < 1e-12 && (f[1] + f[3]).abs() < 1e-12);
        // F_1 is parallel to v.
        assert!((f[0] * s.v[1] - f[1] * s.v[0]).abs() < 1e-12);
    }
}
