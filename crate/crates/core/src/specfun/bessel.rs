//! Spherical Bessel and Hankel functions of real positive argument.
//!
//! `j_n` is computed by Miller's downward recurrence
//!
//! ```text
//! f_{n-1}(t) = (2n+1)/t · f_n(t) - f_{n+1}(t)
//! ```
//!
//! normalised against whichever of the closed forms `j_0`, `j_1` is larger in
//! magnitude, so no zero of `j_0` can spoil the scale. `y_n` is computed by
//! upward recurrence from `y_0`, `y_1`, the stable direction for the
//! irregular solution.

use num_complex::Complex64;

use super::{SpecFunError, MAX_DEGREE};

const RESCALE_THRESHOLD: f64 = 1e200;

fn check(nmax: usize, t: f64) -> Result<(), SpecFunError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(SpecFunError::NonPositiveArgument(t));
    }
    if nmax > MAX_DEGREE {
        return Err(SpecFunError::DegreeTooLarge(nmax));
    }
    Ok(())
}

/// Closed forms of `j_0` and `j_1`, using the power series where the closed
/// form of `j_1` suffers cancellation.
fn j0_j1(t: f64) -> (f64, f64) {
    if t < 0.25 {
        let t2 = t * t;
        // Series through t^10 is exact to rounding for t < 0.25.
        let j0 = 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0 * (1.0 - t2 / 110.0))));
        let j1 = t / 3.0 * (1.0 - t2 / 10.0 * (1.0 - t2 / 28.0 * (1.0 - t2 / 54.0 * (1.0 - t2 / 88.0))));
        (j0, j1)
    } else {
        let (s, c) = t.sin_cos();
        (s / t, (s / t - c) / t)
    }
}

/// Starting index for the downward recurrence.
fn miller_start(nmax: usize, t: f64) -> usize {
    let m = nmax.max(t.ceil() as usize);
    m + 40 + (2.0 * (m as f64).sqrt()).ceil() as usize
}

/// `j_0(t), …, j_nmax(t)` without argument validation.
pub(crate) fn j_table(nmax: usize, t: f64) -> Vec<f64> {
    let start = miller_start(nmax, t);
    let mut f = vec![0.0; start + 2];
    f[start] = 1e-200;
    for k in (1..=start).rev() {
        let next = (2 * k + 1) as f64 / t * f[k] - f[k + 1];
        f[k - 1] = next;
        if next.abs() > RESCALE_THRESHOLD {
            for v in &mut f[k - 1..=start] {
                *v /= RESCALE_THRESHOLD;
            }
        }
    }
    let (j0, j1) = j0_j1(t);
    let scale = if j0.abs() >= j1.abs() { j0 / f[0] } else { j1 / f[1] };
    f.truncate(nmax + 1);
    for v in &mut f {
        *v *= scale;
    }
    f
}

/// `y_0(t), …, y_nmax(t)` without argument validation. Overflow saturates to
/// `-∞`, the sign of `y_n` for small arguments.
pub(crate) fn y_table(nmax: usize, t: f64) -> Vec<f64> {
    let (s, c) = t.sin_cos();
    let mut y = Vec::with_capacity(nmax + 1);
    y.push(-c / t);
    if nmax >= 1 {
        y.push(-c / (t * t) - s / t);
    }
    for n in 1..nmax {
        let next = (2 * n + 1) as f64 / t * y[n] - y[n - 1];
        if !next.is_finite() {
            y.resize(nmax + 1, f64::NEG_INFINITY);
            break;
        }
        y.push(next);
    }
    y
}

/// Spherical Bessel function `j_n(t)` for `t > 0`.
pub fn spherical_bessel_j(n: usize, t: f64) -> Result<f64, SpecFunError> {
    check(n, t)?;
    Ok(j_table(n, t)[n])
}

/// All of `j_0(t), …, j_nmax(t)`.
pub fn spherical_bessel_j_upto(nmax: usize, t: f64) -> Result<Vec<f64>, SpecFunError> {
    check(nmax, t)?;
    Ok(j_table(nmax, t))
}

/// All of `y_0(t), …, y_nmax(t)`.
pub fn spherical_bessel_y_upto(nmax: usize, t: f64) -> Result<Vec<f64>, SpecFunError> {
    check(nmax, t)?;
    Ok(y_table(nmax, t))
}

/// All of `h_0^{(1)}(t), …, h_nmax^{(1)}(t)` with `h = j + i y`.
pub fn spherical_hankel1_upto(nmax: usize, t: f64) -> Result<Vec<Complex64>, SpecFunError> {
    check(nmax, t)?;
    Ok(h_table(nmax, t))
}

pub(crate) fn h_table(nmax: usize, t: f64) -> Vec<Complex64> {
    j_table(nmax, t)
        .into_iter()
        .zip(y_table(nmax, t))
        .map(|(j, y)| Complex64::new(j, y))
        .collect()
}

/// Spherical Hankel function of the first kind `h_n^{(1)}(t)`.
pub fn spherical_hankel1(n: usize, t: f64) -> Result<Complex64, SpecFunError> {
    check(n, t)?;
    Ok(Complex64::new(j_table(n, t)[n], y_table(n, t)[n]))
}

/// Derivatives of a table `f_0..f_{len-2}` of any spherical Bessel family
/// using `f_n' = f_{n-1} - (n+1)/t · f_n` and `f_0' = -f_1`.
///
/// The input must extend one degree past the last derivative wanted; the
/// returned table is one entry shorter than `values`.
pub fn derivative_table<T>(values: &[T], t: f64) -> Vec<T>
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Neg<Output = T>,
{
    let len = values.len().saturating_sub(1);
    let mut out = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            out.push(-values[1]);
        } else {
            out.push(values[n - 1] - values[n] * ((n + 1) as f64 / t));
        }
    }
    out
}

/// `j_n'(t)`.
pub fn spherical_bessel_j_prime(n: usize, t: f64) -> Result<f64, SpecFunError> {
    check(n + 1, t)?;
    let j = j_table(n + 1, t);
    Ok(if n == 0 { -j[1] } else { j[n - 1] - (n + 1) as f64 / t * j[n] })
}

/// `h_n^{(1)'}(t)`.
pub fn spherical_hankel1_prime(n: usize, t: f64) -> Result<Complex64, SpecFunError> {
    check(n + 1, t)?;
    let h = h_table(n + 1, t);
    Ok(if n == 0 { -h[1] } else { h[n - 1] - h[n] * ((n + 1) as f64 / t) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Power series `j_n(t) = t^n Σ_k (-t²/2)^k / (k! (2n+2k+1)!!)`.
    fn j_series(n: usize, t: f64) -> f64 {
        let mut lead = 1.0;
        for i in 0..n {
            lead *= t / (2 * i + 3) as f64;
        }
        let mut term = lead;
        let mut sum = term;
        for k in 1..200 {
            term *= -t * t / (2.0 * k as f64 * (2 * n + 2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-30 * sum.abs() {
                break;
            }
        }
        sum
    }

    #[test]
    fn j0_vanishes_at_pi() {
        assert!(spherical_bessel_j(0, PI).unwrap().abs() < 1e-16);
    }

    #[test]
    fn j1_small_argument_limit() {
        let t = 1e-6;
        let v = spherical_bessel_j(1, t).unwrap();
        assert!((v / (t / 3.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn j5_at_two_matches_series() {
        let v = spherical_bessel_j(5, 2.0).unwrap();
        let oracle = j_series(5, 2.0);
        assert!(((v - oracle) / oracle).abs() < 1e-12, "{v} vs {oracle}");
    }

    #[test]
    fn h0_closed_form() {
        let h = spherical_hankel1(0, 1.0).unwrap();
        let expect = -Complex64::i() * Complex64::from_polar(1.0, 1.0);
        assert!((h - expect).norm() < 1e-15);
        assert!((h.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn j0_prime_is_minus_j1() {
        for t in [1.0, 2.0, 5.0] {
            let d = spherical_bessel_j_prime(0, t).unwrap();
            let j1 = spherical_bessel_j(1, t).unwrap();
            assert!((d + j1).abs() < 1e-15);
        }
    }

    #[test]
    fn h0_prime_from_closed_forms() {
        // h_0 = -i e^{it}/t, h_0' = e^{it}/t + i e^{it}/t² = -h_1.
        let t = 1.0;
        let e = Complex64::from_polar(1.0, t);
        let expect = e / t + Complex64::i() * e / (t * t);
        let d = spherical_hankel1_prime(0, t).unwrap();
        assert!((d - expect).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(spherical_bessel_j(0, 0.0).is_err());
        assert!(spherical_bessel_j(0, -1.0).is_err());
        assert!(spherical_hankel1(2, f64::NAN).is_err());
        assert!(spherical_bessel_j(MAX_DEGREE + 1, 1.0).is_err());
    }

    #[test]
    fn normalisation_survives_zero_of_j0() {
        // At t = π, j_0 vanishes; the j_1 branch must carry the scale.
        let j = spherical_bessel_j_upto(10, PI).unwrap();
        for n in 1..=10 {
            let oracle = j_series(n, PI);
            assert!(((j[n] - oracle) / oracle).abs() < 1e-11, "n={n}");
        }
    }

    #[test]
    fn tiny_argument_high_degree_does_not_overflow() {
        let j = spherical_bessel_j_upto(200, 1e-3).unwrap();
        assert!(j.iter().all(|v| v.is_finite()));
        assert!((j[1] / (1e-3 / 3.0) - 1.0).abs() < 1e-6);
        let y = spherical_bessel_y_upto(200, 1e-3).unwrap();
        assert_eq!(y[200], f64::NEG_INFINITY);
    }

    /// Reference values from 50-digit evaluation of the half-integer
    /// cylinder functions: `(n, t, j_n(t), y_n(t))`.
    const REFERENCE: [(usize, f64, f64, f64); 11] = [
        (0, 0.01, 9.9998333341666646825e-1, -9.9995000041666525696e+1),
        (3, 0.5, 1.174035443867557309e-3, -2.4613004692361646071e+2),
        (10, 1.0, 7.116552640047313024e-11, -6.722150082562084436e+8),
        (25, 30.0, 3.0615186663678257339e-2, 3.3661530316510027786e-2),
        (57, 40.0, 2.7837857815563851757e-7, -1.0877169363137187658e+3),
        (100, 7.5, 2.083694353916364314e-102, -3.1924308276902486218e+98),
        (150, 300.0, 2.2619825026393072092e-3, 2.7798667115395980747e-3),
        (200, 500.0, 8.3805513368081594588e-4, -1.9141832933567365377e-3),
        (200, 150.0, 5.5193131111327919038e-15, -4.5398810500144530633e+9),
        (1, 499.0, 1.7477878972928817954e-3, -9.8045995483745569511e-4),
        (40, 39.9, 2.1783270821984475131e-2, -5.2225655280670538864e-2),
    ];

    #[test]
    fn matches_reference_table() {
        for (n, t, j, y) in REFERENCE {
            let h = spherical_hankel1(n, t).unwrap();
            assert!(((h.re - j) / j).abs() < 1e-12, "j_{n}({t}): {} vs {j}", h.re);
            assert!(((h.im - y) / y).abs() < 1e-12, "y_{n}({t}): {} vs {y}", h.im);
        }
    }

    /// `h_n(t) = (-i)^{n+1} e^{it}/t · Σ_{k<=n} i^k (n+k)! / (k! (n-k)! (2t)^k)`.
    fn hankel_finite_sum(n: usize, t: f64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut coef = 1.0;
        for k in 0..=n {
            if k > 0 {
                coef *= ((n + k) * (n - k + 1)) as f64 / (k as f64 * 2.0 * t);
            }
            sum += Complex64::i().powu(k as u32) * coef;
        }
        (-Complex64::i()).powu(n as u32 + 1) * Complex64::from_polar(1.0 / t, t) * sum
    }

    #[test]
    fn hankel_matches_finite_sum() {
        for (n, t) in [(0, 1.0), (3, 0.5), (5, 7.0), (12, 20.0), (30, 45.0)] {
            let h = spherical_hankel1(n, t).unwrap();
            let oracle = hankel_finite_sum(n, t);
            assert!((h - oracle).norm() < 1e-12 * oracle.norm(), "n={n} t={t}");
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let h = 1e-5;
        for (n, t) in [(0, 1.3), (2, 0.7), (7, 5.0), (20, 18.0)] {
            let fd = (spherical_bessel_j(n, t + h).unwrap() - spherical_bessel_j(n, t - h).unwrap()) / (2.0 * h);
            let d = spherical_bessel_j_prime(n, t).unwrap();
            assert!((fd - d).abs() < 1e-8 * d.abs().max(1.0), "j' n={n}");
            let fd = (spherical_hankel1(n, t + h).unwrap() - spherical_hankel1(n, t - h).unwrap()) / (2.0 * h);
            let d = spherical_hankel1_prime(n, t).unwrap();
            assert!((fd - d).norm() < 1e-8 * d.norm().max(1.0), "h' n={n}");
        }
    }

    #[test]
    fn repeated_evaluation_is_bit_identical() {
        let a = spherical_hankel1_upto(80, 33.3).unwrap();
        let b = spherical_hankel1_upto(80, 33.3).unwrap();
        assert_eq!(a, b);
    }
}
