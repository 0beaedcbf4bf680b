use excloak::export::{linear_gray, write_json as write_sidecar, write_pgm, write_pgm_raw, write_slice_csv, SliceSidecar};
use excloak::helmholtz3d::{
    cloak_metrics, extended_device_analysis, multipole_coefficients, r_eff_star, slice_field, soundsoft_sphere_scatter,
    truncation_order, DeviceArray, FieldFn, HelmholtzError, PlaneWave, ScalarField, TetraCloakGeometry, WaveField,
    ZeroField,
};
use excloak::specfun::{WaveContext, MAX_DEGREE};
use excloak::Complex64;
use log::info;
use nalgebra::Vector3;
use serde_json::{json, Value};

use crate::config::{invalid, Settings};
use crate::manifest::{write_json, Manifest};

pub fn helmholtz_error(e: HelmholtzError) -> anyhow::Error {
    match e {
        HelmholtzError::Geometry(_) | HelmholtzError::InvalidParameter(_) => invalid(e.to_string()),
        other => anyhow::Error::new(other),
    }
}

/// Parameters shared by the Helmholtz commands, all lengths absolute.
pub struct HelmParams {
    pub ctx: WaveContext,
    pub lambda: f64,
    pub geometry: TetraCloakGeometry,
    pub nmax: usize,
    pub spacing: f64,
    pub incident_dir: Vector3<f64>,
    pub zero_incident: bool,
    pub max_nodes: usize,
}

impl HelmParams {
    /// `delta` defaults to `6λ`, `sigma` to `δ/3`; `spacing` is in wavelengths.
    pub fn from_settings(cfg: &Settings, delta_override: Option<f64>) -> anyhow::Result<Self> {
        let lambda = cfg.positive("lambda", 1.0)?;
        let ctx = WaveContext::new(lambda).map_err(|e| invalid(e.to_string()))?;
        let delta = match delta_override {
            Some(d) => d,
            None => cfg.positive("delta", 6.0 * lambda)?,
        };
        let sigma = match cfg.opt_f64("sigma")? {
            Some(s) if delta_override.is_none() => s,
            _ => cfg.positive("sigma_ratio", 1.0 / 3.0)? * delta,
        };
        let geometry = TetraCloakGeometry::new(sigma, delta).map_err(helmholtz_error)?;
        let nmax = match cfg.raw("n_order") {
            Some(_) => cfg.usize_or("n_order", 0)?,
            None => truncation_order(delta, &ctx),
        };
        if nmax > MAX_DEGREE {
            return Err(invalid(format!("truncation order {nmax} exceeds {MAX_DEGREE}")));
        }
        let spacing = cfg.positive("spacing", 0.125)? * lambda;
        let incident_dir = cfg.direction_or("incident_dir", Vector3::new(1.0, 1.0, 1.0))?;
        let zero_incident = match cfg.string_or("incident", "plane").as_str() {
            "plane" => false,
            "zero" => true,
            other => return Err(invalid(format!("`incident` = `{other}` must be `plane` or `zero`"))),
        };
        let max_nodes = cfg.usize_or("max_nodes", 200_000)?;
        Ok(Self { ctx, lambda, geometry, nmax, spacing, incident_dir, zero_incident, max_nodes })
    }

    /// Face quadrature nodes the refinement will produce.
    pub fn estimated_nodes(&self) -> usize {
        let m = (self.geometry.edge_length() / self.spacing).ceil().max(1.0) as usize;
        4 * 3 * m * (m + 1) / 2
    }

    pub fn check_budget(&self) -> anyhow::Result<()> {
        let nodes = self.estimated_nodes();
        if nodes > self.max_nodes {
            return Err(invalid(format!(
                "face quadrature would use {nodes} nodes (delta = {}, spacing = {}), above max_nodes = {}; \
                 raise max_nodes or coarsen spacing",
                self.geometry.delta(),
                self.spacing,
                self.max_nodes
            )));
        }
        Ok(())
    }

    pub fn incident(&self) -> anyhow::Result<Box<dyn WaveField>> {
        if self.zero_incident {
            Ok(Box::new(ZeroField))
        } else {
            Ok(Box::new(PlaneWave::new(self.incident_dir, &self.ctx).map_err(helmholtz_error)?))
        }
    }

    pub fn devices(&self, incident: &dyn WaveField) -> anyhow::Result<DeviceArray> {
        let faces = self.geometry.face_quadratures(self.spacing).map_err(helmholtz_error)?;
        multipole_coefficients(self.geometry.devices(), &faces, incident, self.nmax, &self.ctx).map_err(helmholtz_error)
    }

    fn describe(&self) -> Value {
        json!({
            "lambda": self.lambda,
            "delta": self.geometry.delta(),
            "sigma": self.geometry.sigma(),
            "N": self.nmax,
            "quad_spacing": self.spacing,
            "incident_dir": [self.incident_dir.x, self.incident_dir.y, self.incident_dir.z],
            "incident": if self.zero_incident { "zero" } else { "plane" },
        })
    }
}

fn vec3(v: &Vector3<f64>) -> Value {
    json!([v.x, v.y, v.z])
}

pub fn run_geometry(cfg: &Settings, manifest: &mut Manifest) -> anyhow::Result<()> {
    let p = HelmParams::from_settings(cfg, None)?;
    let g = &p.geometry;
    let r = g.ball_radius();
    // Vertex a_j lies on the faces of every device except x_j.
    let mut deviation: f64 = 0.0;
    for (j, a) in g.vertices().iter().enumerate() {
        for (l, x) in g.devices().iter().enumerate() {
            if l != j {
                deviation = deviation.max(((a - x).norm() - r).abs());
            }
        }
    }
    let report = json!({
        "lambda": p.lambda,
        "delta": g.delta(),
        "sigma": g.sigma(),
        "r": r,
        "r_over_delta": r / g.delta(),
        "r_eff": g.r_eff(),
        "r_eff_star": r_eff_star(g.delta()),
        "r_eff_star_over_delta": r_eff_star(g.delta()) / g.delta(),
        "edge_length": g.edge_length(),
        "vertices": g.vertices().iter().map(vec3).collect::<Vec<_>>(),
        "devices": g.devices().iter().map(vec3).collect::<Vec<_>>(),
        "is_optimal": g.is_optimal(),
        "vertex_tangency_max_deviation": deviation,
        "vertices_tangent": deviation <= 1e-12 * g.delta(),
        "N": p.nmax,
    });
    write_json(&manifest.path("geometry.json"), &report)?;
    manifest.record("geometry.json", "tetrahedron, device points, ball radii and tangency check", p.describe());
    Ok(())
}

pub fn run_slices(cfg: &Settings, manifest: &mut Manifest) -> anyhow::Result<()> {
    let p = HelmParams::from_settings(cfg, None)?;
    let resolution = cfg.usize_or("resolution", 128)?;
    let half = cfg.positive("half_width", 5.0)? * p.lambda;
    let heights = cfg.list_or("slice_z", &[-2.0, -1.0, 0.0, 1.0, 2.0])?;
    let scale = cfg.positive("scale", 1.0)?;
    let ball_factor = cfg.f64_or("ball_factor", 3.0)?;
    let scatter_order = cfg.usize_or("scatter_order", 25)?;
    let max_samples = cfg.usize_or("max_samples", 2_000_000)?;
    if resolution < 2 {
        return Err(invalid("`resolution` must be at least 2"));
    }
    if heights.is_empty() {
        return Err(invalid("`slice_z` is empty"));
    }
    if !(ball_factor >= 0.0) {
        return Err(invalid("`ball_factor` must be non-negative"));
    }
    p.check_budget()?;
    let samples = resolution * resolution * heights.len();
    if samples > max_samples {
        return Err(invalid(format!("{samples} slice samples exceed max_samples = {max_samples}")));
    }

    let incident = p.incident()?;
    info!("assembling device coefficients, N = {}", p.nmax);
    let devices = p.devices(incident.as_ref())?;
    let radius = ball_factor * r_eff_star(p.geometry.delta());
    let scatterers = if radius > 0.0 {
        let active_ambient = FieldFn(|x: &Vector3<f64>| incident.value(x) + devices.value(x));
        let active = soundsoft_sphere_scatter(&active_ambient, radius, scatter_order, &p.ctx).map_err(helmholtz_error)?;
        let inactive = soundsoft_sphere_scatter(incident.as_ref(), radius, scatter_order, &p.ctx).map_err(helmholtz_error)?;
        Some((active, inactive))
    } else {
        None
    };

    let mut params = p.describe();
    params["resolution"] = json!(resolution);
    params["half_width"] = json!(half);
    params["ball_radius"] = json!(radius);
    params["scatter_order"] = json!(scatter_order);
    params["scale"] = json!(scale);

    let zero = Complex64::new(0.0, 0.0);
    for (idx, &h) in heights.iter().enumerate() {
        let z = h * p.geometry.sigma();
        info!("slice {} at z = {z}", idx + 1);
        let ui = slice_field(incident.as_ref(), z, half, resolution).map_err(helmholtz_error)?;
        let ud = slice_field(&devices, z, half, resolution).map_err(helmholtz_error)?;
        let grid = ui.grid.clone();
        let (active, inactive): (Vec<Complex64>, Vec<Complex64>) = match &scatterers {
            Some((sa, si)) => {
                let usa = slice_field(sa, z, half, resolution).map_err(helmholtz_error)?;
                let usi = slice_field(si, z, half, resolution).map_err(helmholtz_error)?;
                grid.points()
                    .enumerate()
                    .map(|(k, (x, y))| {
                        if (x * x + y * y + z * z).sqrt() < radius {
                            (zero, zero)
                        } else {
                            (ui.values[k] + ud.values[k] + usa.values[k], ui.values[k] + usi.values[k])
                        }
                    })
                    .unzip()
            }
            None => ui.values.iter().zip(&ud.values).map(|(a, b)| (a + b, *a)).unzip(),
        };
        for (row, values) in [("udev", &ud.values), ("utot_active", &active), ("utot_inactive", &inactive)] {
            let stem = format!("{row}_sl{}", idx + 1);
            let mut fp = params.clone();
            fp["z"] = json!(z);
            write_slice_csv(&manifest.path(&format!("{stem}.csv")), &grid, z, values)?;
            manifest.record(&format!("{stem}.csv"), &format!("{row} at z = {h} sigma"), fp.clone());
            let re: Vec<f64> = values.iter().map(|v| v.re).collect();
            write_pgm(&manifest.path(&format!("{stem}.pgm")), &grid, &linear_gray(&re, -scale, scale))?;
            manifest.record(&format!("{stem}.pgm"), &format!("real part of {row}, linear in [-scale, scale]"), fp.clone());
            let sidecar = SliceSidecar {
                min: -scale,
                max: scale,
                z,
                lambda: p.lambda,
                delta: p.geometry.delta(),
                sigma: p.geometry.sigma(),
                n: p.nmax,
            };
            write_sidecar(&manifest.path(&format!("{stem}.json")), &sidecar)?;
            manifest.record(&format!("{stem}.json"), "colour range of the raster", fp);
        }
    }
    Ok(())
}

pub fn run_perf(cfg: &Settings, manifest: &mut Manifest) -> anyhow::Result<()> {
    let lambda = cfg.positive("lambda", 1.0)?;
    let ratios = cfg.list_or("deltas", &[2.0, 4.0, 6.0])?;
    let level = cfg.positive("level", 100.0)?;
    let rows = cfg.usize_or("map_rows", 90)?;
    let cols = cfg.usize_or("map_cols", 180)?;
    let height = cfg.usize_or("map_height", 90)?;
    if rows == 0 || cols == 0 || height == 0 {
        return Err(invalid("`map_rows`, `map_cols` and `map_height` must be positive"));
    }
    if ratios.is_empty() {
        return Err(invalid("`deltas` is empty"));
    }
    // Validate every run before computing any of them.
    let runs = ratios
        .iter()
        .map(|&r| {
            if !(r > 0.0) {
                return Err(invalid(format!("`deltas` entry {r} must be positive")));
            }
            let p = HelmParams::from_settings(cfg, Some(r * lambda))?;
            p.check_budget()?;
            Ok((r, p))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let mut report = Vec::with_capacity(runs.len());
    for (ratio, p) in &runs {
        info!("delta = {ratio} lambda, N = {}", p.nmax);
        let incident = p.incident()?;
        let devices = p.devices(incident.as_ref())?;
        let metrics = cloak_metrics(&devices, incident.as_ref(), p.geometry.delta());
        let map = extended_device_analysis(&devices, level, &p.geometry, rows, cols, height).map_err(helmholtz_error)?;
        let name = format!("mollweide_d{ratio}.pgm");
        write_pgm_raw(&manifest.path(&name), map.raster.width, map.raster.height, &map.raster.pixels)?;
        let mut params = p.describe();
        params["level"] = json!(level);
        manifest.record(&name, "level set |u_d| >= level (255), region A (128), open (64) on S(0, sigma)", params);
        let m = p.nmax + 1;
        report.push(json!({
            "delta_over_lambda": ratio,
            "interior_residual": metrics.interior_residual,
            "exterior_leakage": metrics.exterior_leakage,
            "zero_incident": metrics.zero_incident,
            "open_area_percent": map.open_area_percent,
            "spot_count": map.spot_count(),
            "level": level,
            "N": p.nmax,
            "quad_spacing": p.spacing,
            "quad_nodes": p.estimated_nodes(),
            "sphere_quadrature": [m, 2 * m],
            "sigma": p.geometry.sigma(),
            "delta": p.geometry.delta(),
        }));
    }
    write_json(&manifest.path("metrics.json"), &Value::Array(report))?;
    manifest.record("metrics.json", "interior residual, exterior leakage and open area per delta", json!({ "deltas": ratios }));
    Ok(())
}
