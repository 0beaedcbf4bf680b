use std::f64::consts::{PI, SQRT_2};

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::ScalarField;
use super::geometry::{r_eff_star, TetraCloakGeometry};
use super::multipole::DeviceArray;
use super::quadrature::SphereQuadrature;
use super::HelmholtzError;
use crate::specfun::UnitDirection;

pub const RASTER_OUTSIDE: u8 = 0;
pub const RASTER_OPEN: u8 = 64;
pub const RASTER_REGION_A: u8 = 128;
pub const RASTER_DEVICE: u8 = 255;

/// Relative L² errors on spheres about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloakMetrics {
    /// `‖u_i + u_d‖ / ‖u_i‖` on `S(0, r_eff*)`.
    pub interior_residual: f64,
    /// `‖u_d‖ / ‖u_i‖` on `S(0, 2δ)`.
    pub exterior_leakage: f64,
    /// The incident field vanished on a sphere; both metrics are reported as 0.
    pub zero_incident: bool,
}

fn sphere_norms<F, G>(quad: &SphereQuadrature, radius: f64, num: F, den: G) -> (f64, f64)
where
    F: Fn(&Vector3<f64>) -> Complex64 + Sync,
    G: Fn(&Vector3<f64>) -> Complex64 + Sync,
{
    let (a, b) = quad
        .directions()
        .par_iter()
        .zip(quad.weights().par_iter())
        .map(|(d, &w)| {
            let x = d.cartesian() * radius;
            (w * num(&x).norm_sqr(), w * den(&x).norm_sqr())
        })
        .reduce(|| (0.0, 0.0), |p, q| (p.0 + q.0, p.1 + q.1));
    (a.sqrt(), b.sqrt())
}

/// Interior residual and exterior leakage with a Gauss–Legendre × uniform
/// rule of `2(N+1)²` nodes per sphere.
pub fn cloak_metrics<F: ScalarField + ?Sized>(devices: &DeviceArray, incident: &F, delta: f64) -> CloakMetrics {
    let n = devices.nmax() + 1;
    let quad = SphereQuadrature::new(n, 2 * n);
    let (res, inc_in) = sphere_norms(&quad, r_eff_star(delta), |x| incident.value(x) + devices.value(x), |x| {
        incident.value(x)
    });
    let (leak, inc_out) = sphere_norms(&quad, 2.0 * delta, |x| devices.value(x), |x| incident.value(x));
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    CloakMetrics {
        interior_residual: ratio(res, inc_in),
        exterior_leakage: ratio(leak, inc_out),
        zero_incident: inc_in == 0.0 || inc_out == 0.0,
    }
}

/// `(latitude, longitude)` for a point of the Mollweide ellipse
/// `x ∈ [-2√2, 2√2]`, `y ∈ [-√2, √2]`, or `None` outside it.
pub fn mollweide_inverse(x: f64, y: f64) -> Option<(f64, f64)> {
    if (x / (2.0 * SQRT_2)).powi(2) + (y / SQRT_2).powi(2) > 1.0 {
        return None;
    }
    let aux = (y / SQRT_2).clamp(-1.0, 1.0).asin();
    let lat = ((2.0 * aux + (2.0 * aux).sin()) / PI).clamp(-1.0, 1.0).asin();
    let c = aux.cos();
    let lon = if c > 0.0 { (PI * x / (2.0 * SQRT_2 * c)).clamp(-PI, PI) } else { 0.0 };
    Some((lat, lon))
}

/// 8-bit Mollweide image, top row first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MollweideRaster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

/// Level-set cross-section of `|u_d|` on `S(0, σ)`.
///
/// Cells are equal-area: uniform in `cos θ` (rows, north first) and `φ`
/// (columns, from `φ = -π`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtendedDeviceReport {
    pub level: f64,
    pub radius: f64,
    pub rows: usize,
    pub cols: usize,
    /// `|u_d| >= level` per cell.
    pub mask: Vec<bool>,
    /// Cell also lies in region `A`.
    pub in_region_a: Vec<bool>,
    pub open_area_percent: f64,
    pub raster: MollweideRaster,
}

impl ExtendedDeviceReport {
    fn cell_direction(&self, row: usize, col: usize) -> UnitDirection {
        cell_direction(self.rows, self.cols, row, col)
    }

    /// Connected components of the level set on the sphere, with the
    /// azimuth wrapping and each polar row joined around the pole.
    pub fn spot_count(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut label = vec![0usize; rows * cols];
        let mut count = 0;
        for start in 0..rows * cols {
            if !self.mask[start] || label[start] != 0 {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            while let Some(p) = stack.pop() {
                if !self.mask[p] || label[p] != 0 {
                    continue;
                }
                label[p] = count;
                let (r, c) = (p / cols, p % cols);
                stack.push(r * cols + (c + 1) % cols);
                stack.push(r * cols + (c + cols - 1) % cols);
                if r > 0 {
                    stack.push((r - 1) * cols + c);
                }
                if r + 1 < rows {
                    stack.push((r + 1) * cols + c);
                }
                if r == 0 || r + 1 == rows {
                    stack.push(r * cols + (c + cols / 2) % cols);
                }
            }
        }
        count
    }

    /// Direction at the centre of cell `(row, col)`.
    pub fn direction(&self, row: usize, col: usize) -> Vector3<f64> {
        self.cell_direction(row, col).cartesian()
    }
}

fn cell_direction(rows: usize, cols: usize, row: usize, col: usize) -> UnitDirection {
    let cos = 1.0 - 2.0 * (row as f64 + 0.5) / rows as f64;
    let phi = -PI + 2.0 * PI * (col as f64 + 0.5) / cols as f64;
    UnitDirection::from_angles(cos.acos(), phi)
}

/// Samples `|u_d|` on an equal-area `rows × cols` grid of `S(0, σ)`,
/// thresholds it at `level` and renders a `2·height × height` Mollweide
/// image: [`RASTER_DEVICE`] on the level set, [`RASTER_REGION_A`] elsewhere
/// in `A`, [`RASTER_OPEN`] on the rest of the sphere and [`RASTER_OUTSIDE`]
/// off the ellipse.
pub fn extended_device_analysis(
    devices: &DeviceArray,
    level: f64,
    geometry: &TetraCloakGeometry,
    rows: usize,
    cols: usize,
    height: usize,
) -> Result<ExtendedDeviceReport, HelmholtzError> {
    if !(level > 0.0) {
        return Err(HelmholtzError::InvalidParameter(format!("level {level}")));
    }
    if rows == 0 || cols == 0 || height == 0 {
        return Err(HelmholtzError::InvalidParameter("empty grid".into()));
    }
    let radius = geometry.sigma();
    let cells: Vec<(bool, bool)> = (0..rows * cols)
        .into_par_iter()
        .map(|p| {
            let x = cell_direction(rows, cols, p / cols, p % cols).cartesian() * radius;
            let v = devices.value(&x).norm();
            // NaN at a device point counts as inside the level set.
            (!(v < level), geometry.region_a_contains(&x))
        })
        .collect();
    let mask: Vec<bool> = cells.iter().map(|c| c.0).collect();
    let in_region_a: Vec<bool> = cells.iter().map(|c| c.1).collect();
    let open = mask.iter().filter(|m| !**m).count();
    let open_area_percent = 100.0 * open as f64 / mask.len() as f64;

    let width = 2 * height;
    let mut pixels = vec![RASTER_OUTSIDE; width * height];
    for py in 0..height {
        let y = SQRT_2 * (1.0 - 2.0 * (py as f64 + 0.5) / height as f64);
        for px in 0..width {
            let x = 2.0 * SQRT_2 * (2.0 * (px as f64 + 0.5) / width as f64 - 1.0);
            let Some((lat, lon)) = mollweide_inverse(x, y) else { continue };
            let cos = lat.sin();
            let row = (((1.0 - cos) / 2.0 * rows as f64) as usize).min(rows - 1);
            let col = (((lon + PI) / (2.0 * PI) * cols as f64) as usize).min(cols - 1);
            let cell = row * cols + col;
            pixels[py * width + px] = if mask[cell] {
                RASTER_DEVICE
            } else if in_region_a[cell] {
                RASTER_REGION_A
            } else {
                RASTER_OPEN
            };
        }
    }
    Ok(ExtendedDeviceReport {
        level,
        radius,
        rows,
        cols,
        mask,
        in_region_a,
        open_area_percent,
        raster: MollweideRaster { width, height, pixels },
    })
}
