use std::f64::consts::PI;

use excloak::export::{linear_gray, write_pgm, Grid2D};
use excloak::laplace2d::{
    device_field, disk_total_field, probe_approximant, taylor_coefficients, AnalyticFunction, CloakPolynomial,
    region_threshold, DielectricDisk,
};
use excloak::Complex64;
use serde_json::json;

use crate::config::{invalid, Settings};
use crate::manifest::{write_json, Manifest};
use crate::poly::laplace_error;

/// Taylor coefficients of the ambient field about the disk centre.
const DISK_MODES: usize = 80;
const DISK_SAMPLES: usize = 512;

struct Preset {
    p: f64,
    r: f64,
    eps: f64,
    n: usize,
    s: usize,
    scale: f64,
}

fn preset(name: &str) -> anyhow::Result<Preset> {
    match name {
        "a" => Ok(Preset { p: 1.1, r: 0.2, eps: -0.99, n: 15, s: 15, scale: 10.0 }),
        "b" => Ok(Preset { p: 1.7, r: 0.9, eps: -0.998, n: 5, s: 25, scale: 35.0 }),
        other => Err(invalid(format!("`preset` = `{other}` must be `a` or `b`"))),
    }
}

/// Radius of the largest disk about 0 inside the origin lobe, attained on
/// the negative real axis: the root of `ρ (β + ρ)^L = threshold`.
fn origin_lobe_inradius(beta: f64, l: f64) -> f64 {
    let t = region_threshold(beta, l);
    let (mut lo, mut hi) = (0.0, beta);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * (beta + mid).powf(l) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn run(cfg: &Settings, manifest: &mut Manifest) -> anyhow::Result<()> {
    let base = preset(&cfg.string_or("preset", "a"))?;
    let p = cfg.positive("p", base.p)?;
    let r = cfg.positive("r", base.r)?;
    let eps = cfg.f64_or("eps", base.eps)?;
    let n = cfg.usize_or("n", base.n)?;
    let s = cfg.usize_or("s", base.s)?;
    let beta = cfg.positive("beta", 1.0)?;
    let degree = cfg.usize_or("degree", 40)?;
    let scale = cfg.positive("scale", base.scale)?;
    let half = cfg.positive("half_width", 1.5 * (p + r))?;
    let resolution = cfg.usize_or("resolution", 201)?;
    if n == 0 || s == 0 {
        return Err(invalid("`n` and `s` must be at least 1"));
    }
    if !(p > r) {
        return Err(invalid(format!("disk must exclude the origin: p = {p} <= r = {r}")));
    }
    if resolution < 2 {
        return Err(invalid("`resolution` must be at least 2"));
    }
    let disk = DielectricDisk::new(Complex64::new(p, 0.0), r, eps).map_err(laplace_error)?;
    let poly = CloakPolynomial::new(n, s, beta).map_err(laplace_error)?;

    // Kelvin image of the disk is B(c*, α); expand the mapped probe 1/w about β over it.
    let d = p * p - r * r;
    let (c_star, alpha) = (p / d, r / d);
    let q_radius = (c_star - beta).abs() + alpha;
    if !(1.25 * q_radius < beta) {
        return Err(invalid(format!("the disk image reaches w = 0: |c* - beta| + alpha = {q_radius}")));
    }
    let q0 = probe_approximant(|w: Complex64| w.inv(), Complex64::new(beta, 0.0), q_radius, degree).map_err(laplace_error)?;

    let u0 = |z: Complex64| z.re;
    let ud = |z: Complex64| device_field(&q0.poly, &poly, z).unwrap_or(f64::NAN);
    let g_active = |z: Complex64| {
        let w = z.inv();
        z + q0.poly.value(w) * poly.eval_minus_one(w)
    };
    let centre = Complex64::new(p, 0.0);
    let (a_active, _) = taylor_coefficients(g_active, centre, 1.02 * r, DISK_MODES, 0, DISK_SAMPLES);
    let a_inactive = vec![centre, Complex64::new(1.0, 0.0)];
    let total_active = |z: Complex64| disk_total_field(&disk, &a_active, |z| u0(z) + ud(z), z).unwrap_or(f64::NAN);
    let total_inactive = |z: Complex64| disk_total_field(&disk, &a_inactive, u0, z).unwrap_or(f64::NAN);

    let grid = Grid2D::square(half, resolution);
    let zs: Vec<Complex64> = grid.points().map(|(x, y)| Complex64::new(x, y)).collect();
    let active: Vec<f64> = zs.iter().map(|&z| total_active(z)).collect();
    let inactive: Vec<f64> = zs.iter().map(|&z| total_inactive(z)).collect();
    let device: Vec<f64> = zs.iter().map(|&z| ud(z)).collect();

    let params = json!({
        "p": p, "r": r, "eps": eps, "n": n, "s": s, "beta": beta, "degree": degree,
        "half_width": half, "resolution": resolution, "scale": scale,
    });
    let mut text = String::from("x,y,u_active,u_inactive,u_device\n");
    for (((z, a), b), c) in zs.iter().zip(&active).zip(&inactive).zip(&device) {
        text.push_str(&format!("{},{},{a},{b},{c}\n", z.re, z.im));
    }
    std::fs::write(manifest.path("laplace_fields.csv"), text)?;
    manifest.record("laplace_fields.csv", "total field with the device active and inactive, and the device field", params.clone());
    write_pgm(&manifest.path("total_active.pgm"), &grid, &linear_gray(&active, -scale, scale))?;
    manifest.record("total_active.pgm", "total field, device active, linear in [-scale, scale]", params.clone());
    write_pgm(&manifest.path("total_inactive.pgm"), &grid, &linear_gray(&inactive, -scale, scale))?;
    manifest.record("total_inactive.pgm", "total field, device inactive, linear in [-scale, scale]", params.clone());

    let far = cfg.positive("far_radius", 2.0 / origin_lobe_inradius(beta, s as f64 / n as f64))?;
    if !(far > p + r) {
        return Err(invalid(format!("`far_radius` = {far} must exceed p + r")));
    }
    let ring: Vec<Complex64> = (0..720).map(|j| Complex64::from_polar(far, 2.0 * PI * j as f64 / 720.0)).collect();
    let perturbation = |f: &dyn Fn(Complex64) -> f64| ring.iter().map(|&z| (f(z) - u0(z)).abs()).fold(0.0, f64::max);
    let disk_max = |f: &dyn Fn(Complex64) -> f64| {
        (0..64)
            .flat_map(|i| (0..8).map(move |j| (i, j)))
            .map(|(i, j)| centre + Complex64::from_polar(r * (j as f64 + 0.5) / 8.0, 2.0 * PI * i as f64 / 64.0))
            .map(|z| f(z).abs())
            .fold(0.0, f64::max)
    };
    let summary = json!({
        "reflection": disk.reflection(),
        "probe_residual": q0.residual,
        "far_radius": far,
        "far_perturbation_active": perturbation(&total_active),
        "far_perturbation_inactive": perturbation(&total_inactive),
        "disk_field_max_active": disk_max(&total_active),
        "disk_field_max_inactive": disk_max(&total_inactive),
    });
    write_json(&manifest.path("summary.json"), &summary)?;
    manifest.record("summary.json", "far-field perturbation and field inside the disk", params);
    Ok(())
}
