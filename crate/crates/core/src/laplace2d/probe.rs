use std::f64::consts::PI;

use num_complex::Complex64;

use super::polynomial::{ComplexPolynomial, TaylorPolynomial};
use super::LaplaceError;

/// Relative size of negative-frequency content that marks a singularity
/// inside the sampling circle.
const NEGATIVE_FREQUENCY_TOLERANCE: f64 = 1e-8;
/// Scaled coefficients beyond the requested degree larger than this fraction
/// of the leading ones mean the series is not converging.
const TAIL_TOLERANCE: f64 = 0.5;
/// Scaled coefficients below this fraction of the largest are rounding noise.
const ROUNDING_FLOOR: f64 = 1e-14;

/// Degree-`d` Taylor approximation of a probe about `c*`, with its sup-norm
/// error on `∂B(c*, α)`.
#[derive(Debug, Clone)]
pub struct ProbeApproximant {
    pub poly: TaylorPolynomial,
    pub residual: f64,
    pub contour_radius: f64,
}

/// Trapezoid-rule Taylor coefficients of `f` about `center` from `points`
/// samples on the circle of radius `radius`.
///
/// Returns `(a_0..a_count-1, b_1..b_{neg})` where `b_k ρ^{-k}` is the
/// coefficient of `(w - c)^{-k}` seen by the same samples; for an analytic
/// input the `b_k` vanish up to aliasing.
pub fn taylor_coefficients<F>(
    f: F,
    center: Complex64,
    radius: f64,
    count: usize,
    negative: usize,
    points: usize,
) -> (Vec<Complex64>, Vec<Complex64>)
where
    F: Fn(Complex64) -> Complex64,
{
    let samples: Vec<Complex64> = (0..points)
        .map(|j| f(center + Complex64::from_polar(radius, 2.0 * PI * j as f64 / points as f64)))
        .collect();
    let mode = |k: i64| -> Complex64 {
        let s: Complex64 = samples
            .iter()
            .enumerate()
            .map(|(j, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((k * j as i64).rem_euclid(points as i64)) as f64 / points as f64))
            .sum();
        s / points as f64
    };
    let pos = (0..count).map(|k| mode(k as i64) / radius.powi(k as i32)).collect();
    let neg = (1..=negative).map(|k| mode(-(k as i64)) * radius.powi(k as i32)).collect();
    (pos, neg)
}

/// [`probe_approximant_with_margin`] with the sampling circle `25 %` larger
/// than `α`.
pub fn probe_approximant<F>(u0: F, center: Complex64, alpha: f64, degree: usize) -> Result<ProbeApproximant, LaplaceError>
where
    F: Fn(Complex64) -> Complex64,
{
    probe_approximant_with_margin(u0, center, alpha, degree, 0.25 * alpha)
}

/// Taylor coefficients of the analytic probe `u0` about `center` up to
/// `degree`, computed by the trapezoid rule on `|w - center| = α + margin`.
pub fn probe_approximant_with_margin<F>(
    u0: F,
    center: Complex64,
    alpha: f64,
    degree: usize,
    margin: f64,
) -> Result<ProbeApproximant, LaplaceError>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(alpha > 0.0) || !(margin >= 0.0) {
        return Err(LaplaceError::InvalidParameter(format!("alpha = {alpha}, margin = {margin}")));
    }
    let rho = alpha + margin;
    let points = 64.max(4 * (degree + 1));
    let (coeffs, neg) = taylor_coefficients(&u0, center, rho, 2 * degree + 1, degree.max(1), points);

    let scaled: Vec<f64> = coeffs.iter().enumerate().map(|(k, a)| a.norm() * rho.powi(k as i32)).collect();
    let neg_scaled = neg.iter().enumerate().map(|(k, b)| b.norm() / rho.powi(k as i32 + 1)).fold(0.0, f64::max);
    let head = scaled[..=degree].iter().copied().fold(0.0, f64::max);
    let tail = scaled[degree + 1..].iter().copied().fold(0.0, f64::max);
    let scale = head.max(tail).max(neg_scaled);
    if scale > 0.0 {
        if neg_scaled > NEGATIVE_FREQUENCY_TOLERANCE * scale {
            return Err(LaplaceError::NonAnalytic(neg_scaled / scale));
        }
        if degree > 0 && tail > TAIL_TOLERANCE * head {
            return Err(LaplaceError::NonAnalytic(tail / head));
        }
    }

    // Coefficients at rounding level are dropped so exact low-degree inputs
    // come back with their true degree.
    let mut kept = degree + 1;
    while kept > 0 && scaled[kept - 1] <= ROUNDING_FLOOR * scale {
        kept -= 1;
    }
    let poly = TaylorPolynomial { center, poly: ComplexPolynomial::new(coeffs[..kept].to_vec())? };
    let residual = (0..256)
        .map(|j| {
            let w = center + Complex64::from_polar(alpha, 2.0 * PI * j as f64 / 256.0);
            (u0(w) - poly.eval(w)).norm()
        })
        .fold(0.0, f64::max);
    Ok(ProbeApproximant { poly, residual, contour_radius: rho })
}
