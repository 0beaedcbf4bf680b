use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use super::fields::ScalarField;
use super::HelmholtzError;
use crate::export::Grid2D;

/// Row-major samples of a field on the square `|x|, |y| <= half_width` at
/// height `z`.
#[derive(Debug, Clone)]
pub struct FieldSlice {
    pub grid: Grid2D,
    pub z: f64,
    pub values: Vec<Complex64>,
}

pub fn slice_field<F: ScalarField + ?Sized>(
    field: &F,
    z: f64,
    half_width: f64,
    resolution: usize,
) -> Result<FieldSlice, HelmholtzError> {
    if resolution < 2 || !(half_width > 0.0) {
        return Err(HelmholtzError::InvalidParameter(format!(
            "slice resolution {resolution}, half width {half_width}"
        )));
    }
    let grid = Grid2D::square(half_width, resolution);
    let points: Vec<(f64, f64)> = grid.points().collect();
    let values = points.par_iter().map(|&(x, y)| field.value(&Vector3::new(x, y, z))).collect();
    Ok(FieldSlice { grid, z, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helmholtz3d::fields::{FieldFn, PlaneWave};
    use crate::specfun::WaveContext;

    #[test]
    fn constant_and_plane_wave() {
        let c = slice_field(&FieldFn(|_: &Vector3<f64>| Complex64::new(2.0, 1.0)), 0.0, 1.0, 5).unwrap();
        assert!(c.values.iter().all(|v| *v == Complex64::new(2.0, 1.0)));
        let ctx = WaveContext::new(1.0).unwrap();
        let u = PlaneWave::new(Vector3::new(1.0, 1.0, 1.0).normalize(), &ctx).unwrap();
        let s = slice_field(&u, 0.3, 5.0, 16).unwrap();
        for (v, (x, y)) in s.values.iter().zip(s.grid.points()) {
            assert_eq!(*v, u.value(&Vector3::new(x, y, 0.3)));
        }
        assert!(slice_field(&u, 0.0, 1.0, 1).is_err());
    }
}
