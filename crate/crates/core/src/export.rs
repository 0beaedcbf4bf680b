//! File writers for field maps, raster masks and JSON reports.
//!
//! Grids are sampled row-major: the outer loop runs over `y` (ascending),
//! the inner loop over `x` (ascending). CSV files follow that order.
//! PGM rasters are written top row first, i.e. with `y` descending, so that
//! image viewers show the usual orientation.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A rectangular grid of sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2D {
    /// Panics unless `nx, ny >= 2`.
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Self {
        assert!(nx >= 2 && ny >= 2, "grid needs at least two samples per axis");
        Self { x_min, x_max, y_min, y_max, nx, ny }
    }

    /// Square grid `[-h, h]²` with `resolution` samples per axis.
    pub fn square(half_width: f64, resolution: usize) -> Self {
        Self::new(-half_width, half_width, -half_width, half_width, resolution, resolution)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * j as f64 / (self.ny - 1) as f64
    }

    /// Sample points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (self.x(i), self.y(j))))
    }
}

fn create(path: &Path) -> io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn check_len(grid: &Grid2D, n: usize) -> io::Result<()> {
    if grid.len() != n {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("grid has {} points but {} values were supplied", grid.len(), n),
        ));
    }
    Ok(())
}

/// Writes a real 2-D potential map with header `x,y,re_u`.
pub fn write_planar_csv(path: &Path, grid: &Grid2D, values: &[f64]) -> io::Result<()> {
    check_len(grid, values.len())?;
    let mut w = create(path)?;
    writeln!(w, "x,y,re_u")?;
    for ((x, y), v) in grid.points().zip(values) {
        writeln!(w, "{x},{y},{v}")?;
    }
    w.flush()
}

/// Writes a complex field slice at height `z` with header `x,y,z,re_u,im_u`.
pub fn write_slice_csv(path: &Path, grid: &Grid2D, z: f64, values: &[Complex64]) -> io::Result<()> {
    check_len(grid, values.len())?;
    let mut w = create(path)?;
    writeln!(w, "x,y,z,re_u,im_u")?;
    for ((x, y), v) in grid.points().zip(values) {
        writeln!(w, "{x},{y},{z},{},{}", v.re, v.im)?;
    }
    w.flush()
}

/// Writes a binary PGM (P5) image from row-major grid data (`y` ascending).
pub fn write_pgm(path: &Path, grid: &Grid2D, pixels: &[u8]) -> io::Result<()> {
    check_len(grid, pixels.len())?;
    let mut w = create(path)?;
    write!(w, "P5\n{} {}\n255\n", grid.nx, grid.ny)?;
    for row in pixels.chunks(grid.nx).rev() {
        w.write_all(row)?;
    }
    w.flush()
}

/// Writes an already top-row-first raster of `width × height` bytes.
pub fn write_pgm_raw(path: &Path, width: usize, height: usize, pixels: &[u8]) -> io::Result<()> {
    if width * height != pixels.len() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "raster size mismatch"));
    }
    let mut w = create(path)?;
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(pixels)?;
    w.flush()
}

/// 255 where `|value| > level`, 0 elsewhere.
pub fn threshold_mask<T: Copy>(values: &[T], level: f64, magnitude: impl Fn(T) -> f64) -> Vec<u8> {
    values.iter().map(|&v| if magnitude(v) > level { 255 } else { 0 }).collect()
}

/// Linear grey map of `values` from `[min, max]` onto `0..=255`.
pub fn linear_gray(values: &[f64], min: f64, max: f64) -> Vec<u8> {
    let span = max - min;
    values
        .iter()
        .map(|&v| {
            if !(span > 0.0) || !v.is_finite() {
                return 0;
            }
            ((v - min) / span * 255.0).round().clamp(0.0, 255.0) as u8
        })
        .collect()
}

/// Finite minimum and maximum of `values`, or `(0, 0)` if there are none.
pub fn finite_range(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values.iter().filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 0.0)
    } else {
        (lo, hi)
    }
}

/// Colour-range sidecar for a Helmholtz slice raster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSidecar {
    pub min: f64,
    pub max: f64,
    pub z: f64,
    pub lambda: f64,
    pub delta: f64,
    pub sigma: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

/// Pretty-printed JSON.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> io::Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_row_major() {
        let g = Grid2D::new(0.0, 1.0, 10.0, 12.0, 2, 3);
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts, vec![(0.0, 10.0), (1.0, 10.0), (0.0, 11.0), (1.0, 11.0), (0.0, 12.0), (1.0, 12.0)]);
    }

    #[test]
    fn csv_headers_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid2D::square(1.0, 2);
        let p = dir.path().join("a.csv");
        write_planar_csv(&p, &g, &[1.0, 2.0, 3.0, 4.5]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x,y,re_u");
        assert_eq!(lines[4], "1,1,4.5");
        let p = dir.path().join("b.csv");
        write_slice_csv(&p, &g, 0.5, &[Complex64::new(1.0, -2.0); 4]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("x,y,z,re_u,im_u\n-1,-1,0.5,1,-2\n"));
        assert!(write_planar_csv(&p, &g, &[1.0]).is_err());
    }

    #[test]
    fn pgm_layout() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid2D::new(0.0, 1.0, 0.0, 1.0, 3, 2);
        let p = dir.path().join("m.pgm");
        let mask = threshold_mask(&[0.0, 2.0, 0.5, 3.0, 0.0, 0.0], 1.0, |v: f64| v.abs());
        write_pgm(&p, &g, &mask).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        let header = b"P5\n3 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        // Top row first: the y = 1 row comes before the y = 0 row.
        assert_eq!(&bytes[header.len()..], &[255, 0, 0, 0, 255, 0]);
    }

    #[test]
    fn sidecar_keys() {
        let s = SliceSidecar { min: -1.0, max: 1.0, z: 0.0, lambda: 1.0, delta: 6.0, sigma: 2.0, n: 57 };
        let v = serde_json::to_value(&s).unwrap();
        for key in ["min", "max", "z", "lambda", "delta", "sigma", "N"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn gray_mapping_clamps() {
        assert_eq!(linear_gray(&[-1.0, 0.0, 0.5, 1.0, 2.0], 0.0, 1.0), vec![0, 0, 128, 255, 255]);
        assert_eq!(finite_range(&[f64::NAN, 2.0, -3.0]), (-3.0, 2.0));
    }
}
