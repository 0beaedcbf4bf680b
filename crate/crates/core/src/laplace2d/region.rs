//! The conjectured convergence region
//!
//! ```text
//! D_{β,L} = { z : |z - β|^L |z| < β^{L+1} L^L / (L+1)^{L+1} }
//! ```
//!
//! and its two components. The level set pinches at the real saddle
//! `z = β/(L+1)`, where `|z - β|^L |z|` attains exactly the threshold.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::export::Grid2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionLabel {
    /// Component containing the origin.
    OriginSide,
    /// Component containing `c* = β`.
    StarSide,
    /// Outside the open region, including its boundary.
    Outside,
}

impl RegionLabel {
    pub fn is_inside(&self) -> bool {
        !matches!(self, RegionLabel::Outside)
    }
}

/// `β^{L+1} L^L / (L+1)^{L+1}`.
pub fn region_threshold(beta: f64, l: f64) -> f64 {
    beta.powf(l + 1.0) * l.powf(l) / (l + 1.0).powf(l + 1.0)
}

/// Real critical point of `|z - β|^L |z|` between `0` and `β`.
pub fn saddle_point(beta: f64, l: f64) -> f64 {
    beta / (l + 1.0)
}

/// Membership in `D_{β,L}` and the component label.
///
/// Inside the region the components are separated by the steepest-ascent
/// curve through the saddle, on which `L arg(z - β) + arg z = Lπ` (arguments
/// taken in `[0, π]` after reflecting to the upper half plane). Larger values
/// lie on the origin side.
pub fn in_convergence_region(z: Complex64, beta: f64, l: f64) -> RegionLabel {
    let f = (z - beta).norm().powf(l) * z.norm();
    if !(f < region_threshold(beta, l)) {
        return RegionLabel::Outside;
    }
    let zu = if z.im < 0.0 { z.conj() } else { z };
    if zu.im == 0.0 {
        return if zu.re < saddle_point(beta, l) { RegionLabel::OriginSide } else { RegionLabel::StarSide };
    }
    let g = l * (zu - beta).arg() + zu.arg();
    if g > l * PI {
        RegionLabel::OriginSide
    } else {
        RegionLabel::StarSide
    }
}

/// Marching-squares segments of the level set `values = level` on a
/// row-major grid, as pairs of end points.
pub fn level_set_segments(grid: &Grid2D, values: &[f64], level: f64) -> Vec<(Complex64, Complex64)> {
    assert_eq!(grid.len(), values.len(), "grid/value length mismatch");
    let at = |i: usize, j: usize| values[j * grid.nx + i] - level;
    let lerp = |p: Complex64, q: Complex64, a: f64, b: f64| p + (q - p) * (a / (a - b));
    let mut out = Vec::new();
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let corners = [
                (Complex64::new(grid.x(i), grid.y(j)), at(i, j)),
                (Complex64::new(grid.x(i + 1), grid.y(j)), at(i + 1, j)),
                (Complex64::new(grid.x(i + 1), grid.y(j + 1)), at(i + 1, j + 1)),
                (Complex64::new(grid.x(i), grid.y(j + 1)), at(i, j + 1)),
            ];
            if corners.iter().any(|c| !c.1.is_finite()) {
                continue;
            }
            let mut crossings = Vec::with_capacity(4);
            for e in 0..4 {
                let (p, a) = corners[e];
                let (q, b) = corners[(e + 1) % 4];
                if (a < 0.0) != (b < 0.0) {
                    crossings.push(lerp(p, q, a, b));
                }
            }
            match crossings.len() {
                2 => out.push((crossings[0], crossings[1])),
                4 => {
                    // Saddle cell: resolve with the cell-centre value.
                    let centre = corners.iter().map(|c| c.1).sum::<f64>() / 4.0;
                    if (centre < 0.0) == (corners[0].1 < 0.0) {
                        out.push((crossings[0], crossings[3]));
                        out.push((crossings[1], crossings[2]));
                    } else {
                        out.push((crossings[0], crossings[1]));
                        out.push((crossings[2], crossings[3]));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn saddle_is_on_the_boundary() {
        let beta = 1.0;
        assert_eq!(in_convergence_region(c(0.5, 0.0), beta, 1.0), RegionLabel::Outside);
        for l in [0.5, 1.0, 2.0, 5.0] {
            let x = saddle_point(beta, l);
            let f = (1.0 - x).powf(l) * x;
            assert!((f / region_threshold(beta, l) - 1.0).abs() < 1e-14, "L={l}");
        }
    }

    #[test]
    fn substituted_points() {
        assert_eq!(in_convergence_region(c(0.2, 0.0), 1.0, 1.0), RegionLabel::OriginSide);
        assert_eq!(in_convergence_region(c(0.2, 0.0) * 3.0, 3.0, 1.0), RegionLabel::OriginSide);
        assert_eq!(in_convergence_region(c(1.0, 0.0), 1.0, 1.0), RegionLabel::StarSide);
        assert_eq!(in_convergence_region(c(10.0, 5.0), 1.0, 1.0), RegionLabel::Outside);
        assert_eq!(in_convergence_region(c(-3.0, 0.0), 1.0, 1.0), RegionLabel::Outside);
    }

    #[test]
    fn labels_agree_with_flood_fill() {
        // Independent labelling: grow each component from its seed on a grid.
        for (beta, l) in [(1.0, 1.0), (1.0, 5.0), (2.0, 0.4)] {
            let n = 241;
            let t = region_threshold(beta, l);
            let grid = Grid2D::new(-0.5 * beta, 2.0 * beta, -1.0 * beta, 1.0 * beta, n, n);
            let inside: Vec<bool> = grid
                .points()
                .map(|(x, y)| {
                    let z = c(x, y);
                    (z - beta).norm().powf(l) * z.norm() < t
                })
                .collect();
            let seed = |zx: f64| {
                let i = ((zx - grid.x_min) / (grid.x_max - grid.x_min) * (n - 1) as f64).round() as usize;
                (n / 2) * n + i
            };
            // Near the saddle the two lobes are separated by a single point, so
            // the one grid edge on the real axis that straddles it is cut.
            let s = saddle_point(beta, l);
            let crosses = |p: usize, q: usize| {
                let (j, a, b) = (p / n, grid.x(p % n), grid.x(q % n));
                grid.y(j).abs() < 1e-12 && (a - s) * (b - s) < 0.0
            };
            let mut comp = vec![0u8; n * n];
            for (label, start) in [(1u8, seed(0.0)), (2u8, seed(beta))] {
                let mut stack = vec![start];
                while let Some(p) = stack.pop() {
                    if comp[p] != 0 || !inside[p] {
                        continue;
                    }
                    comp[p] = label;
                    let (i, j) = (p % n, p / n);
                    if i > 0 && !crosses(p, p - 1) {
                        stack.push(p - 1);
                    }
                    if i + 1 < n && !crosses(p, p + 1) {
                        stack.push(p + 1);
                    }
                    if j > 0 {
                        stack.push(p - n);
                    }
                    if j + 1 < n {
                        stack.push(p + n);
                    }
                }
            }
            for (p, (x, y)) in grid.points().enumerate() {
                let expect = match comp[p] {
                    1 => RegionLabel::OriginSide,
                    2 => RegionLabel::StarSide,
                    _ => continue,
                };
                assert_eq!(in_convergence_region(c(x, y), beta, l), expect, "beta={beta} L={l} z=({x},{y})");
            }
        }
    }

    #[test]
    fn circle_level_set() {
        let g = Grid2D::square(2.0, 81);
        let v: Vec<f64> = g.points().map(|(x, y)| x.hypot(y)).collect();
        let segs = level_set_segments(&g, &v, 1.0);
        assert!(!segs.is_empty());
        for (a, b) in segs {
            assert!((a.norm() - 1.0).abs() < 2e-3 && (b.norm() - 1.0).abs() < 2e-3);
        }
    }
}
