use std::collections::HashMap;
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::ElasticaError;

/// Condition number of the interior dynamic-stiffness block above which a
/// loaded mode counts as resonant.
pub const RESONANCE_CONDITION: f64 = 1e12;
/// Directions closer than this to the axis are treated as axial.
const AXIAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PinnedTag {
    Pinned,
}

/// Nodal mass; `"pinned"` in JSON stands for infinite mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Mass {
    Finite(f64),
    Pinned(PinnedTag),
}

impl Mass {
    pub const PINNED: Mass = Mass::Pinned(PinnedTag::Pinned);

    pub fn is_pinned(&self) -> bool {
        matches!(self, Mass::Pinned(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub position: Vec<f64>,
    pub mass: Mass,
}

/// Spring between nodes `i` and `j` (ids). Without a `direction` it acts
/// along the segment joining them; with one it is a torque spring
/// `F_i = k v [v·(u_j − u_i)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spring {
    pub i: usize,
    pub j: usize,
    pub k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
}

impl Spring {
    pub fn is_torque(&self) -> bool {
        self.direction.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpringNetwork {
    pub nodes: Vec<Node>,
    pub springs: Vec<Spring>,
    pub terminals: Vec<usize>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl SpringNetwork {
    pub fn dim(&self) -> usize {
        self.nodes.first().map_or(0, |n| n.position.len())
    }

    fn index(&self) -> Result<HashMap<usize, usize>, ElasticaError> {
        let mut map = HashMap::with_capacity(self.nodes.len());
        for (p, n) in self.nodes.iter().enumerate() {
            if map.insert(n.id, p).is_some() {
                return Err(ElasticaError::Network(format!("duplicate node id {}", n.id)));
            }
        }
        Ok(map)
    }

    /// Checks ids, dimensions, constants, directions and coincident nodes.
    pub fn validate(&self) -> Result<(), ElasticaError> {
        let dim = self.dim();
        if dim != 2 && dim != 3 {
            return Err(ElasticaError::Dimension(dim));
        }
        let idx = self.index()?;
        for n in &self.nodes {
            if n.position.len() != dim || n.position.iter().any(|x| !x.is_finite()) {
                return Err(ElasticaError::Network(format!("node {} position", n.id)));
            }
            if let Mass::Finite(m) = n.mass {
                if !(m >= 0.0) {
                    return Err(ElasticaError::Network(format!("node {} mass {m}", n.id)));
                }
            }
        }
        for s in &self.springs {
            let (Some(&a), Some(&b)) = (idx.get(&s.i), idx.get(&s.j)) else {
                return Err(ElasticaError::Network(format!("spring ({}, {}) names a missing node", s.i, s.j)));
            };
            if !(s.k >= 0.0) {
                return Err(ElasticaError::Network(format!("spring ({}, {}) constant {}", s.i, s.j, s.k)));
            }
            if norm(&sub(&self.nodes[b].position, &self.nodes[a].position)) == 0.0 {
                return Err(ElasticaError::CoincidentNodes(s.i, s.j));
            }
            if let Some(v) = &s.direction {
                if v.len() != dim || (norm(v) - 1.0).abs() > 1e-10 {
                    return Err(ElasticaError::Network(format!("spring ({}, {}) direction not a unit vector", s.i, s.j)));
                }
            }
        }
        for t in &self.terminals {
            if !idx.contains_key(t) {
                return Err(ElasticaError::Network(format!("terminal {t} is not a node")));
            }
        }
        Ok(())
    }

    /// Unit force direction of a spring in the current geometry.
    pub fn spring_direction(&self, s: &Spring) -> Result<Vec<f64>, ElasticaError> {
        if let Some(v) = &s.direction {
            return Ok(v.clone());
        }
        let idx = self.index()?;
        let (a, b) = (idx[&s.i], idx[&s.j]);
        let d = sub(&self.nodes[b].position, &self.nodes[a].position);
        let l = norm(&d);
        if l == 0.0 {
            return Err(ElasticaError::CoincidentNodes(s.i, s.j));
        }
        Ok(d.into_iter().map(|x| x / l).collect())
    }

    /// Static stiffness and mass matrices over all nodes, `dim` rows per
    /// node in node order; pinned nodes carry zero mass here.
    pub fn assemble(&self) -> Result<(DMatrix<f64>, DVector<f64>), ElasticaError> {
        self.validate()?;
        let dim = self.dim();
        let idx = self.index()?;
        let n = dim * self.nodes.len();
        let mut k = DMatrix::zeros(n, n);
        for s in &self.springs {
            let v = self.spring_direction(s)?;
            let (a, b) = (idx[&s.i], idx[&s.j]);
            for p in 0..dim {
                for q in 0..dim {
                    let e = s.k * v[p] * v[q];
                    k[(a * dim + p, a * dim + q)] += e;
                    k[(b * dim + p, b * dim + q)] += e;
                    k[(a * dim + p, b * dim + q)] -= e;
                    k[(b * dim + p, a * dim + q)] -= e;
                }
            }
        }
        let m = DVector::from_iterator(
            n,
            self.nodes.iter().flat_map(|nd| {
                let v = match nd.mass {
                    Mass::Finite(m) => m,
                    Mass::Pinned(_) => 0.0,
                };
                std::iter::repeat(v).take(dim)
            }),
        );
        Ok((k, m))
    }

    pub fn from_json_str(s: &str) -> Result<Self, ElasticaError> {
        let net: Self = serde_json::from_str(s).map_err(|e| ElasticaError::Network(e.to_string()))?;
        net.validate()?;
        Ok(net)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serialises")
    }

    pub fn read(path: &Path) -> Result<Self, ElasticaError> {
        let s = std::fs::read_to_string(path).map_err(|e| ElasticaError::Network(e.to_string()))?;
        Self::from_json_str(&s)
    }

    pub fn write(&self, path: &Path) -> Result<(), ElasticaError> {
        std::fs::write(path, self.to_json_string()).map_err(|e| ElasticaError::Network(e.to_string()))
    }
}

/// Dynamic stiffness `K − ω²M` restricted to the free (non-pinned) degrees
/// of freedom, with those indices into the full node ordering.
fn free_dynamic_stiffness(net: &SpringNetwork, omega: f64) -> Result<(DMatrix<f64>, Vec<usize>), ElasticaError> {
    let (k, m) = net.assemble()?;
    let dim = net.dim();
    let free: Vec<usize> = (0..k.nrows()).filter(|&r| !net.nodes[r / dim].mass.is_pinned()).collect();
    let kd = DMatrix::from_fn(free.len(), free.len(), |a, b| {
        let (p, q) = (free[a], free[b]);
        k[(p, q)] - if p == q { omega * omega * m[p] } else { 0.0 }
    });
    Ok((kd, free))
}

/// Schur complement of `K − ω²M` onto the terminal nodes: the matrix taking
/// terminal displacements to the external terminal forces that hold them,
/// `dim` rows per terminal in the order given.
///
/// The interior block is inverted through its eigen-decomposition. Interior
/// modes with negligible eigenvalue are dropped when no terminal load
/// reaches them (mechanisms of the truss); otherwise the block is resonant.
pub fn dynamic_condensation(net: &SpringNetwork, omega: f64, terminals: &[usize]) -> Result<DMatrix<f64>, ElasticaError> {
    let dim = net.dim();
    let (kd, free) = free_dynamic_stiffness(net, omega)?;
    let idx = net.index()?;
    let mut terminal_rows = Vec::with_capacity(dim * terminals.len());
    for t in terminals {
        let &p = idx.get(t).ok_or_else(|| ElasticaError::Network(format!("terminal {t} is not a node")))?;
        if net.nodes[p].mass.is_pinned() {
            return Err(ElasticaError::Network(format!("terminal {t} is pinned")));
        }
        for c in 0..dim {
            let full = p * dim + c;
            terminal_rows.push(free.iter().position(|&f| f == full).expect("free terminal dof"));
        }
    }
    let interior: Vec<usize> = (0..free.len()).filter(|r| !terminal_rows.contains(r)).collect();
    let ktt = DMatrix::from_fn(terminal_rows.len(), terminal_rows.len(), |a, b| kd[(terminal_rows[a], terminal_rows[b])]);
    if interior.is_empty() {
        return Ok(ktt);
    }
    let kii = DMatrix::from_fn(interior.len(), interior.len(), |a, b| kd[(interior[a], interior[b])]);
    let kit = DMatrix::from_fn(interior.len(), terminal_rows.len(), |a, b| kd[(interior[a], terminal_rows[b])]);

    let eig = SymmetricEigen::new(kii);
    let largest = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = kit.norm().max(f64::MIN_POSITIVE);
    let mut x = DMatrix::zeros(interior.len(), terminal_rows.len());
    for (e, &lam) in eig.eigenvalues.iter().enumerate() {
        let phi = eig.eigenvectors.column(e);
        let load = phi.transpose() * &kit;
        if lam.abs() * RESONANCE_CONDITION <= largest {
            if load.norm() > 1e-9 * scale {
                return Err(ElasticaError::InteriorResonance { omega, condition: largest / lam.abs() });
            }
            continue;
        }
        x += &phi * (load / lam);
    }
    Ok(ktt - kit.transpose() * x)
}

/// Displacements of every node (pinned ones fixed at zero) under harmonic
/// external forces `(node id, force)` at frequency `ω`.
pub fn solve_forced(net: &SpringNetwork, omega: f64, forces: &[(usize, Vec<f64>)]) -> Result<Vec<Vec<f64>>, ElasticaError> {
    let dim = net.dim();
    let (kd, free) = free_dynamic_stiffness(net, omega)?;
    let idx = net.index()?;
    let mut rhs = DVector::zeros(free.len());
    for (id, f) in forces {
        let &p = idx.get(id).ok_or_else(|| ElasticaError::Network(format!("forced node {id} missing")))?;
        for c in 0..dim {
            if let Some(r) = free.iter().position(|&q| q == p * dim + c) {
                rhs[r] += f[c];
            }
        }
    }
    let sol = kd.lu().solve(&rhs).ok_or(ElasticaError::InteriorResonance { omega, condition: f64::INFINITY })?;
    let mut out = vec![vec![0.0; dim]; net.nodes.len()];
    for (r, &q) in free.iter().enumerate() {
        out[q / dim][q % dim] = sol[r];
    }
    Ok(out)
}

/// Moves nodes to `x'_i = x'(x_i)` keeping masses, constants and forces;
/// each spring keeps the force direction it had before the move, becoming
/// a torque spring when that direction is no longer axial.
pub fn transform_network<M, I>(net: &SpringNetwork, map: M, inverse: I) -> Result<SpringNetwork, ElasticaError>
where
    M: Fn(&[f64]) -> Vec<f64>,
    I: Fn(&[f64]) -> Vec<f64>,
{
    net.validate()?;
    let mut out = net.clone();
    for (node, new) in out.nodes.iter_mut().zip(&net.nodes) {
        let xp = map(&new.position);
        let back = inverse(&xp);
        let scale = norm(&new.position).max(1.0);
        if xp.len() != new.position.len() || norm(&sub(&back, &new.position)) > 1e-10 * scale {
            return Err(ElasticaError::NonInvertibleMap(new.id));
        }
        node.position = xp;
    }
    let mut directions = Vec::with_capacity(net.springs.len());
    for s in &net.springs {
        let v = net.spring_direction(s)?;
        let axis = out.spring_direction(&Spring { direction: None, ..s.clone() })?;
        let cos: f64 = v.iter().zip(&axis).map(|(a, b)| a * b).sum();
        directions.push(if (cos - 1.0).abs() > AXIAL_TOLERANCE { Some(v) } else { None });
    }
    for (s, d) in out.springs.iter_mut().zip(directions) {
        s.direction = d;
    }
    Ok(out)
}
