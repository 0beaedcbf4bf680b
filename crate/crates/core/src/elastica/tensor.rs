use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ElasticaError;

/// Fourth-order tensor `C_{pqrs}` in 2-D or 3-D, stored densely in
/// row-major index order without symmetrisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElasticityTensor4 {
    dim: usize,
    data: Vec<f64>,
}

fn check_dim(dim: usize) -> Result<(), ElasticaError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(ElasticaError::Dimension(dim))
    }
}

impl ElasticityTensor4 {
    pub fn zeros(dim: usize) -> Result<Self, ElasticaError> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![0.0; dim.pow(4)] })
    }

    pub fn from_fn<F: Fn(usize, usize, usize, usize) -> f64>(dim: usize, f: F) -> Result<Self, ElasticaError> {
        let mut t = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        t.set(i, j, k, l, f(i, j, k, l));
                    }
                }
            }
        }
        Ok(t)
    }

    /// `λ δ_pq δ_rs + μ (δ_pr δ_qs + δ_ps δ_qr)`.
    pub fn isotropic(dim: usize, lambda: f64, mu: f64) -> Result<Self, ElasticaError> {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::from_fn(dim, |p, q, r, s| lambda * d(p, q) * d(r, s) + mu * (d(p, r) * d(q, s) + d(p, s) * d(q, r)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let n = self.idx(i, j, k, l);
        self.data[n] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest violation of `C_{ijkl} = C_{jikl}` and `C_{ijkl} = C_{klij}`,
    /// relative to the largest entry.
    pub fn symmetry_defect(&self) -> (f64, f64) {
        let n = self.dim;
        let (mut minor, mut major) = (0.0f64, 0.0f64);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let c = self.get(i, j, k, l);
                        minor = minor.max((c - self.get(j, i, k, l)).abs());
                        major = major.max((c - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        (minor / scale, major / scale)
    }
}

/// Third-order tensor `T_{ijk}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Result<Self, ElasticaError> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![0.0; dim.pow(3)] })
    }

    pub fn from_fn<F: Fn(usize, usize, usize) -> f64>(dim: usize, f: F) -> Result<Self, ElasticaError> {
        let mut t = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let d = self.dim;
        self.data[(i * d + j) * d + k] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Local data of a transformation `x' = x'(x)` with displacement map
/// `u'(x') = B^{-T} u(x)`: `A_{mi} = ∂x'_m/∂x_i`, `B`, and
/// `G_{ijp} = ∂B_{pj}/∂x_i`, all at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformJet {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    g: Tensor3,
    det_a: f64,
}

impl TransformJet {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, g: Tensor3) -> Result<Self, ElasticaError> {
        let dim = a.nrows();
        check_dim(dim)?;
        if a.shape() != (dim, dim) || b.shape() != (dim, dim) || g.dim() != dim {
            return Err(ElasticaError::Shape("A, B and G must share one dimension".into()));
        }
        let det_a = a.determinant();
        if !(det_a > 0.0) {
            return Err(ElasticaError::NonPositiveDeterminant(det_a));
        }
        let det_b = b.determinant();
        if det_b.abs() <= 1e-14 * b.norm().powi(dim as i32).max(f64::MIN_POSITIVE) {
            return Err(ElasticaError::SingularB);
        }
        Ok(Self { a, b, g, det_a })
    }

    pub fn identity(dim: usize) -> Result<Self, ElasticaError> {
        Self::new(DMatrix::identity(dim, dim), DMatrix::identity(dim, dim), Tensor3::zeros(dim)?)
    }

    /// Jet of a map and a `B` field at `x`, differentiated by fourth-order
    /// central differences with step `h`.
    pub fn from_fields<M, BF>(x: &[f64], map: M, b_field: BF, h: f64) -> Result<Self, ElasticaError>
    where
        M: Fn(&[f64]) -> Vec<f64>,
        BF: Fn(&[f64]) -> DMatrix<f64>,
    {
        let dim = x.len();
        check_dim(dim)?;
        let shifted = |i: usize, s: f64| {
            let mut y = x.to_vec();
            y[i] += s;
            y
        };
        let stencil = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];
        let mut a = DMatrix::zeros(dim, dim);
        let mut g = Tensor3::zeros(dim)?;
        for i in 0..dim {
            for &(s, c) in &stencil {
                let y = shifted(i, s * h);
                let xp = map(&y);
                let bm = b_field(&y);
                for m in 0..dim {
                    a[(m, i)] += c * xp[m] / h;
                }
                for j in 0..dim {
                    for p in 0..dim {
                        g.set(i, j, p, g.get(i, j, p) + c * bm[(p, j)] / h);
                    }
                }
            }
        }
        Self::new(a, b_field(x), g)
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn g(&self) -> &Tensor3 {
        &self.g
    }

    /// `a = det A`.
    pub fn det_a(&self) -> f64 {
        self.det_a
    }
}

/// Transformed material `(C', S', D', ρ')` at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WillisMaterial {
    pub c: ElasticityTensor4,
    pub s: Tensor3,
    pub d: Tensor3,
    pub rho: DMatrix<f64>,
}

impl WillisMaterial {
    pub fn dim(&self) -> usize {
        self.c.dim()
    }
}

/// Material tensors seen in the new coordinates:
///
/// ```text
/// C'_{ijkl} = a⁻¹ A_ip B_jq A_kr B_ls C_pqrs
/// S'_{ijk}  = a⁻¹ A_ip B_jq G_rsk C_pqrs
/// D'_{kij}  = a⁻¹ G_pqk A_ir B_js C_pqrs
/// ρ'_{ij}   = a⁻¹ B_ik B_jk ρ − a⁻¹ ω⁻² G_pqi G_rsj C_pqrs
/// ```
pub fn transform_material(
    c: &ElasticityTensor4,
    rho: f64,
    jet: &TransformJet,
    omega: f64,
) -> Result<WillisMaterial, ElasticaError> {
    let n = c.dim();
    if jet.dim() != n {
        return Err(ElasticaError::Shape(format!("tensor dimension {n}, jet dimension {}", jet.dim())));
    }
    if !(omega > 0.0) {
        return Err(ElasticaError::InvalidParameter(format!("omega = {omega}")));
    }
    let (a, b, g) = (jet.a(), jet.b(), jet.g());
    let inv_det = 1.0 / jet.det_a();

    // Contract C with A on slots p, r and B on slots q, s one index at a time.
    let mut t1 = ElasticityTensor4::zeros(n)?;
    let mut t2 = ElasticityTensor4::zeros(n)?;
    for i in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    t1.set(i, q, r, s, (0..n).map(|p| a[(i, p)] * c.get(p, q, r, s)).sum());
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                for s in 0..n {
                    t2.set(i, j, r, s, (0..n).map(|q| b[(j, q)] * t1.get(i, q, r, s)).sum());
                }
            }
        }
    }
    // t2_{ijrs} = A_ip B_jq C_pqrs.
    let mut t3 = ElasticityTensor4::zeros(n)?;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for s in 0..n {
                    t3.set(i, j, k, s, (0..n).map(|r| a[(k, r)] * t2.get(i, j, r, s)).sum());
                }
            }
        }
    }
    let cp = ElasticityTensor4::from_fn(n, |i, j, k, l| {
        inv_det * (0..n).map(|s| b[(l, s)] * t3.get(i, j, k, s)).sum::<f64>()
    })?;

    let s = Tensor3::from_fn(n, |i, j, k| {
        let mut acc = 0.0;
        for r in 0..n {
            for ss in 0..n {
                acc += t2.get(i, j, r, ss) * g.get(r, ss, k);
            }
        }
        inv_det * acc
    })?;

    // D' is assembled from its own definition rather than copied from S'.
    let d = Tensor3::from_fn(n, |k, i, j| {
        let mut acc = 0.0;
        for p in 0..n {
            for q in 0..n {
                let gk = g.get(p, q, k);
                if gk == 0.0 {
                    continue;
                }
                for r in 0..n {
                    for ss in 0..n {
                        acc += gk * a[(i, r)] * b[(j, ss)] * c.get(p, q, r, ss);
                    }
                }
            }
        }
        inv_det * acc
    })?;

    let mut rho_p = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mass: f64 = (0..n).map(|k| b[(i, k)] * b[(j, k)]).sum::<f64>() * rho;
            let mut corr = 0.0;
            for p in 0..n {
                for q in 0..n {
                    for r in 0..n {
                        for ss in 0..n {
                            corr += g.get(p, q, i) * g.get(r, ss, j) * c.get(p, q, r, ss);
                        }
                    }
                }
            }
            rho_p[(i, j)] = inv_det * (mass - corr / (omega * omega));
        }
    }
    Ok(WillisMaterial { c: cp, s, d, rho: rho_p })
}

/// Constitutive laws of the Willis-type form at angular frequency `ω`:
/// `σ' = C'∇'u' + (i/ω) S'(−iωu')` and `p' = ρ'(−iωu') + (i/ω) D'∇'u'`.
#[derive(Debug, Clone)]
pub struct WillisForm {
    pub material: WillisMaterial,
    pub omega: f64,
}

/// Packages `material` as the Willis-type constitutive pair.
pub fn willis_form(material: &WillisMaterial, omega: f64) -> WillisForm {
    WillisForm { material: material.clone(), omega }
}

/// `(∇u)_{ij} = ∂u_j/∂x_i`.
pub type Gradient = Vec<Vec<Complex64>>;

impl WillisForm {
    /// `σ'_{ij}`.
    pub fn stress(&self, grad_u: &Gradient, u: &[Complex64]) -> Gradient {
        let m = &self.material;
        let n = m.dim();
        let velocity: Vec<Complex64> = u.iter().map(|x| Complex64::new(0.0, -self.omega) * x).collect();
        let coupling = Complex64::new(0.0, 1.0 / self.omega);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = Complex64::new(0.0, 0.0);
                        for k in 0..n {
                            for l in 0..n {
                                s += grad_u[k][l] * m.c.get(i, j, k, l);
                            }
                            s += coupling * velocity[k] * m.s.get(i, j, k);
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    /// `p'_k`.
    pub fn momentum(&self, grad_u: &Gradient, u: &[Complex64]) -> Vec<Complex64> {
        let m = &self.material;
        let n = m.dim();
        let coupling = Complex64::new(0.0, 1.0 / self.omega);
        (0..n)
            .map(|k| {
                let mut p = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    p += Complex64::new(0.0, -self.omega) * u[l] * m.rho[(k, l)];
                }
                for i in 0..n {
                    for j in 0..n {
                        p += coupling * grad_u[i][j] * m.d.get(k, i, j);
                    }
                }
                p
            })
            .collect()
    }
}

/// Residuals of the transformed equation in its two forms at `x`, both by
/// central differences with step `h`:
///
/// * second-order form `−∇'·(C'∇'u' + S'u') + D'∇'u' − ω²ρ'u'`
/// * Willis form `∇'·σ' + iωp'`
///
/// The two agree up to sign for any fields; the returned pair is
/// `(second_order, willis)`.
pub fn willis_residuals<MF, UF>(
    material_at: MF,
    u: UF,
    x: &[f64],
    h: f64,
    omega: f64,
) -> (Vec<Complex64>, Vec<Complex64>)
where
    MF: Fn(&[f64]) -> WillisMaterial,
    UF: Fn(&[f64]) -> Vec<Complex64>,
{
    let n = x.len();
    let at = |i: usize, s: f64, y: &[f64]| {
        let mut z = y.to_vec();
        z[i] += s;
        z
    };
    let grad = |y: &[f64]| -> Gradient {
        (0..n)
            .map(|i| {
                let (up, um) = (u(&at(i, h, y)), u(&at(i, -h, y)));
                (0..n).map(|j| (up[j] - um[j]) / (2.0 * h)).collect()
            })
            .collect()
    };
    // Flux of the second-order form.
    let flux = |y: &[f64]| -> Gradient {
        let m = material_at(y);
        let g = grad(y);
        let uy = u(y);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = Complex64::new(0.0, 0.0);
                        for k in 0..n {
                            for l in 0..n {
                                s += g[k][l] * m.c.get(i, j, k, l);
                            }
                            s += uy[k] * m.s.get(i, j, k);
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    let stress = |y: &[f64]| willis_form(&material_at(y), omega).stress(&grad(y), &u(y));
    let divergence = |f: &dyn Fn(&[f64]) -> Gradient| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let (fp, fm) = (f(&at(i, h, x)), f(&at(i, -h, x)));
            for j in 0..n {
                out[j] += (fp[i][j] - fm[i][j]) / (2.0 * h);
            }
        }
        out
    };

    let m = material_at(x);
    let g = grad(x);
    let ux = u(x);
    let div_flux = divergence(&flux);
    let second_order: Vec<Complex64> = (0..n)
        .map(|k| {
            let mut r = -div_flux[k];
            for i in 0..n {
                for j in 0..n {
                    r += g[i][j] * m.d.get(k, i, j);
                }
            }
            for l in 0..n {
                r -= ux[l] * m.rho[(k, l)] * omega * omega;
            }
            r
        })
        .collect();

    let div_sigma = divergence(&stress);
    let p = willis_form(&m, omega).momentum(&g, &ux);
    let willis: Vec<Complex64> = (0..n).map(|k| div_sigma[k] + Complex64::new(0.0, omega) * p[k]).collect();
    (second_order, willis)
}
