use excloak::elastica::{
    measure_k, resonance_proximity, torque_response_error, torque_spring_constant, transform_material, willis_residuals,
    ElasticaError, ElasticityTensor4, Mass, Tensor3, TorqueSpringSpec, TransformJet,
};
use excloak::Complex64;
use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::config::{invalid, Settings};
use crate::manifest::{write_json, Manifest};

/// Relative tolerance of the condensation and tensor checks.
pub const TOLERANCE: f64 = 1e-10;
const TENSOR_TOLERANCE: f64 = 1e-12;
const WILLIS_TOLERANCE: f64 = 1e-6;

pub fn elastica_error(e: ElasticaError) -> anyhow::Error {
    match e {
        ElasticaError::InteriorResonance { .. } | ElasticaError::Resonance(_) | ElasticaError::Network(_) => {
            anyhow::Error::new(e)
        }
        other => invalid(other.to_string()),
    }
}

pub fn spec_from_settings(cfg: &Settings) -> anyhow::Result<TorqueSpringSpec> {
    let d = TorqueSpringSpec::default_2d();
    let mass = match cfg.raw("m") {
        None => d.mass,
        Some("pinned") => Mass::PINNED,
        Some(_) => Mass::Finite(cfg.positive("m", 1.0)?),
    };
    let spec = TorqueSpringSpec {
        x1: cfg.list_or("x1", &d.x1)?,
        x2: cfg.list_or("x2", &d.x2)?,
        v: cfg.list_or("v", &d.v)?,
        rho: cfg.f64_or("rho", d.rho)?,
        w: cfg.list_or("w", &d.w)?,
        k: cfg.f64_or("k", d.k)?,
        mass,
        omega: cfg.f64_or("omega", d.omega)?,
    };
    excloak::elastica::build_torque_spring(&spec).map_err(elastica_error)?;
    Ok(spec)
}

fn sample_c(dim: usize) -> ElasticityTensor4 {
    // Isotropic part plus a symmetric rank-one term, fully symmetric.
    let e = |i: usize, j: usize| 0.1 * (1 + i + j) as f64 + if i == j { 0.2 } else { 0.0 };
    ElasticityTensor4::from_fn(dim, |i, j, k, l| {
        let iso = 1.3 * f64::from(u8::from(i == j) * u8::from(k == l))
            + 0.7 * f64::from(u8::from(i == k) * u8::from(j == l) + u8::from(i == l) * u8::from(j == k));
        iso + e(i, j) * e(k, l)
    })
    .expect("dimension 2 or 3")
}

fn sample_a(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.2 - 0.1 * i as f64 } else { 0.05 * (i as f64 - 2.0 * j as f64) })
}

fn sample_g(dim: usize) -> Tensor3 {
    Tensor3::from_fn(dim, |i, j, k| 0.1 * ((i + 2 * j + 3 * k) % 5) as f64 - 0.2).expect("dimension 2 or 3")
}

fn max_diff4(a: &ElasticityTensor4, b: &ElasticityTensor4) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    worst = worst.max((a.get(i, j, k, l) - b.get(i, j, k, l)).abs());
                }
            }
        }
    }
    worst
}

fn tensor_checks(dim: usize, omega: f64) -> anyhow::Result<Value> {
    let c = sample_c(dim);
    let rho = 1.7;
    let scale = c.max_abs();

    let id = transform_material(&c, rho, &TransformJet::identity(dim).map_err(elastica_error)?, omega).map_err(elastica_error)?;
    let identity_error = max_diff4(&id.c, &c)
        .max(id.s.max_abs())
        .max(id.d.max_abs())
        .max((&id.rho - DMatrix::identity(dim, dim) * rho).abs().max())
        / scale;

    let a = sample_a(dim);
    let jet = TransformJet::new(a.clone(), DMatrix::identity(dim, dim), Tensor3::zeros(dim).map_err(elastica_error)?)
        .map_err(elastica_error)?;
    let m = transform_material(&c, rho, &jet, omega).map_err(elastica_error)?;
    let det = a.determinant();
    // C'_{ijkl} = a⁻¹ A_ip A_kr C_pjrl.
    let expected = ElasticityTensor4::from_fn(dim, |i, j, k, l| {
        let mut s = 0.0;
        for p in 0..dim {
            for r in 0..dim {
                s += a[(i, p)] * a[(k, r)] * c.get(p, j, r, l);
            }
        }
        s / det
    })
    .map_err(elastica_error)?;
    let b_identity_error = (max_diff4(&m.c, &expected) / expected.max_abs())
        .max(m.s.max_abs())
        .max(m.d.max_abs())
        .max((&m.rho - DMatrix::identity(dim, dim) * (rho / det)).abs().max());

    let jet = TransformJet::new(a.clone(), a, sample_g(dim)).map_err(elastica_error)?;
    let m = transform_material(&c, rho, &jet, omega).map_err(elastica_error)?;
    let (minor, major) = m.c.symmetry_defect();
    let mut mirror: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                mirror = mirror.max((m.d.get(k, i, j) - m.s.get(i, j, k)).abs());
            }
        }
    }
    let rel = m.c.max_abs();

    let map = |x: &[f64]| x.iter().enumerate().map(|(i, v)| v + 0.1 * x[(i + 1) % x.len()].powi(2)).collect::<Vec<f64>>();
    let bf = |x: &[f64]| DMatrix::from_fn(x.len(), x.len(), |i, j| if i == j { 1.0 + 0.2 * x[j] } else { 0.1 * x[i] * x[j] });
    let material_at = |y: &[f64]| {
        let jet = TransformJet::from_fields(y, map, bf, 1e-3).expect("smooth test jet");
        transform_material(&c, rho, &jet, omega).expect("valid test material")
    };
    let u = |y: &[f64]| -> Vec<Complex64> {
        (0..dim)
            .map(|j| {
                let t = 0.3 + 0.2 * j as f64;
                Complex64::new(1.0 + t * y[0] * y[0], -0.5 * y[dim - 1] + t * y[0] * y[dim - 1])
            })
            .collect()
    };
    let x: Vec<f64> = (0..dim).map(|i| 0.2 - 0.15 * i as f64).collect();
    let (second, willis) = willis_residuals(material_at, u, &x, 1e-3, omega);
    let willis_error = second
        .iter()
        .zip(&willis)
        .map(|(a, b)| (a + b).norm() / a.norm().max(1.0))
        .fold(0.0, f64::max);

    Ok(json!({
        "dim": dim,
        "identity_jet_error": identity_error,
        "b_identity_error": b_identity_error,
        "b_equal_a_minor_defect": minor / rel,
        "b_equal_a_major_defect": major / rel,
        "d_mirrors_s_error": mirror,
        "willis_equivalence_error": willis_error,
        "pass": identity_error < TENSOR_TOLERANCE
            && b_identity_error < TENSOR_TOLERANCE
            && minor / rel < TENSOR_TOLERANCE
            && major / rel < TENSOR_TOLERANCE
            && mirror < TENSOR_TOLERANCE
            && willis_error < WILLIS_TOLERANCE,
    }))
}

fn sweep_entry(spec: &TorqueSpringSpec, big_k: f64, m: f64) -> Value {
    let closed = torque_spring_constant(big_k, m, spec.omega);
    match (closed, torque_response_error(spec)) {
        (Ok(kp), Ok((_, err))) => json!({
            "omega": spec.omega,
            "k_prime": kp,
            "relative_error": err,
            "resonance_proximity": resonance_proximity(big_k, m, spec.omega),
            "positive": kp > 0.0,
            "resonance": false,
            "pass": err < TOLERANCE,
        }),
        (Err(e), _) | (_, Err(e)) => json!({
            "omega": spec.omega,
            "resonance": matches!(e, ElasticaError::Resonance(_) | ElasticaError::InteriorResonance { .. }),
            "error": e.to_string(),
            "pass": false,
        }),
    }
}

pub fn run(cfg: &Settings, manifest: &mut Manifest) -> anyhow::Result<()> {
    let spec = spec_from_settings(cfg)?;
    let omegas = cfg.list_or("omegas", &[0.05, 0.1, 0.15, 0.3, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0])?;
    if omegas.iter().any(|w| !(*w > 0.0)) {
        return Err(invalid("`omegas` must be positive"));
    }
    let big_k = measure_k(&spec).map_err(elastica_error)?;
    let m = match spec.mass {
        Mass::Finite(m) => m,
        Mass::Pinned(_) => f64::INFINITY,
    };
    let sweep: Vec<Value> =
        omegas.iter().map(|&omega| sweep_entry(&TorqueSpringSpec { omega, ..spec.clone() }, big_k, m)).collect();
    let pinned = sweep_entry(&spec.pinned(), big_k, f64::INFINITY);
    let tensors =
        [2, 3].iter().map(|&d| tensor_checks(d, spec.omega.max(0.5))).collect::<anyhow::Result<Vec<_>>>()?;
    let report = json!({
        "spec": serde_json::to_value(&spec)?,
        "measured_K": big_k,
        "resonant_omega": if m.is_finite() { json!((2.0 * big_k / m).sqrt()) } else { Value::Null },
        "sweep": sweep,
        "pinned": pinned,
        "tensor_checks": tensors,
    });
    write_json(&manifest.path("elastic_report.json"), &report)?;
    manifest.record("elastic_report.json", "torque-spring condensation and tensor transformation checks", json!({ "omegas": omegas }));
    Ok(())
}
