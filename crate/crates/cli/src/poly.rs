use anyhow::Context;
use excloak::export::{linear_gray, write_pgm, Grid2D};
use excloak::laplace2d::{
    in_convergence_region, level_set_segments, region_threshold, CloakPolynomial, LaplaceError, RegionLabel,
};
use excloak::Complex64;
use serde_json::json;

use crate::config::{invalid, Settings};
use crate::manifest::{write_json, Manifest};

/// Level drawn around both lobes.
pub const LEVEL: f64 = 1e-2;

pub fn laplace_error(e: LaplaceError) -> anyhow::Error {
    match e {
        LaplaceError::Geometry(_) | LaplaceError::InvalidParameter(_) | LaplaceError::DegreeCap { .. } => {
            invalid(e.to_string())
        }
        other => anyhow::Error::new(other),
    }
}

pub struct PolyParams {
    pub n: usize,
    pub s: usize,
    pub beta: f64,
    pub window: [f64; 4],
    pub resolution: usize,
}

impl PolyParams {
    pub fn from_settings(cfg: &Settings) -> anyhow::Result<Self> {
        let n = cfg.usize_or("n", 15)?;
        let s = cfg.usize_or("s", 15)?;
        if n == 0 || s == 0 {
            return Err(invalid(format!("`n` = {n} and `s` = {s} must be at least 1")));
        }
        let beta = cfg.positive("beta", 1.0)?;
        let w = cfg.list_or("window", &[-0.5 * beta, 1.75 * beta, -0.9 * beta, 0.9 * beta])?;
        if w.len() != 4 || !(w[1] > w[0]) || !(w[3] > w[2]) {
            return Err(invalid("`window` must be xmin,xmax,ymin,ymax with xmin < xmax and ymin < ymax"));
        }
        let resolution = cfg.usize_or("resolution", 256)?;
        if resolution < 2 {
            return Err(invalid("`resolution` must be at least 2"));
        }
        Ok(Self { n, s, beta, window: [w[0], w[1], w[2], w[3]], resolution })
    }
}

fn label_byte(l: RegionLabel) -> u8 {
    match l {
        RegionLabel::Outside => 0,
        RegionLabel::OriginSide => 128,
        RegionLabel::StarSide => 255,
    }
}

pub fn run(cfg: &Settings, manifest: &mut Manifest) -> anyhow::Result<()> {
    let p = PolyParams::from_settings(cfg)?;
    let poly = CloakPolynomial::new(p.n, p.s, p.beta).map_err(laplace_error)?;
    let l = p.s as f64 / p.n as f64;
    let [x0, x1, y0, y1] = p.window;
    let grid = Grid2D::new(x0, x1, y0, y1, p.resolution, p.resolution);

    let zs: Vec<Complex64> = grid.points().map(|(x, y)| Complex64::new(x, y)).collect();
    let vals: Vec<Complex64> = zs.iter().map(|&z| poly.eval(z)).collect();
    let abs_p: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    let abs_p1: Vec<f64> = zs.iter().map(|&z| poly.eval_minus_one(z).norm()).collect();
    let labels: Vec<RegionLabel> = zs.iter().map(|&z| in_convergence_region(z, p.beta, l)).collect();
    let threshold = region_threshold(p.beta, l);
    let d_ratio: Vec<f64> = zs.iter().map(|&z| (z - p.beta).norm().powf(l) * z.norm() / threshold).collect();

    let csv = manifest.path("poly_map.csv");
    let mut text = String::from("x,y,abs_p,abs_p_minus_1,region\n");
    for (((z, a), b), lab) in zs.iter().zip(&abs_p).zip(&abs_p1).zip(&labels) {
        let name = serde_json::to_value(lab)?;
        text.push_str(&format!("{},{},{a},{b},{}\n", z.re, z.im, name.as_str().unwrap_or("")));
    }
    std::fs::write(&csv, text).with_context(|| csv.display().to_string())?;
    let params = json!({ "n": p.n, "s": p.s, "beta": p.beta, "window": p.window, "resolution": p.resolution });
    manifest.record("poly_map.csv", "|P_{n,s}|, |P_{n,s} - 1| and region label per grid point", params.clone());

    let log_p: Vec<f64> = abs_p.iter().map(|v| v.log10()).collect();
    write_pgm(&manifest.path("abs_p_log.pgm"), &grid, &linear_gray(&log_p, -2.0, 2.0))?;
    manifest.record("abs_p_log.pgm", "log10 |P| mapped linearly from -2 to 2", params.clone());
    let mask = |v: &[f64]| v.iter().map(|&a| if a < LEVEL { 255 } else { 0 }).collect::<Vec<u8>>();
    write_pgm(&manifest.path("mask_p.pgm"), &grid, &mask(&abs_p))?;
    manifest.record("mask_p.pgm", "255 where |P| < 1e-2", params.clone());
    write_pgm(&manifest.path("mask_p_minus_1.pgm"), &grid, &mask(&abs_p1))?;
    manifest.record("mask_p_minus_1.pgm", "255 where |P - 1| < 1e-2", params.clone());
    let region: Vec<u8> = labels.iter().map(|&l| label_byte(l)).collect();
    write_pgm(&manifest.path("region.pgm"), &grid, &region)?;
    manifest.record("region.pgm", "convergence region: 0 outside, 128 origin side, 255 star side", params.clone());

    let mut contours = String::from("curve,x0,y0,x1,y1\n");
    for (name, values, level) in [("abs_p", &abs_p, LEVEL), ("abs_p_minus_1", &abs_p1, LEVEL), ("region_boundary", &d_ratio, 1.0)]
    {
        for (a, b) in level_set_segments(&grid, values, level) {
            contours.push_str(&format!("{name},{},{},{},{}\n", a.re, a.im, b.re, b.im));
        }
    }
    std::fs::write(manifest.path("contours.csv"), contours)?;
    manifest.record("contours.csv", "level-set segments of |P| and |P - 1| at 1e-2 and the region boundary", params.clone());

    let count = |lab: RegionLabel| labels.iter().filter(|&&x| x == lab).count();
    let summary = json!({
        "n": p.n, "s": p.s, "beta": p.beta, "L": l,
        "region_threshold": threshold,
        "cells_origin_side": count(RegionLabel::OriginSide),
        "cells_star_side": count(RegionLabel::StarSide),
        "cells_outside": count(RegionLabel::Outside),
        "cells_abs_p_below_level": abs_p.iter().filter(|&&a| a < LEVEL).count(),
        "cells_abs_p_minus_1_below_level": abs_p1.iter().filter(|&&a| a < LEVEL).count(),
    });
    write_json(&manifest.path("summary.json"), &summary)?;
    manifest.record("summary.json", "cell counts per label and level", params);
    Ok(())
}
