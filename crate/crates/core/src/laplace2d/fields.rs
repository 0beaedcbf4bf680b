use num_complex::Complex64;

use super::geometry::kelvin_map;
use super::polynomial::{ComplexPolynomial, TaylorPolynomial};
use super::LaplaceError;

/// A complex-analytic function of the Kelvin variable `w`.
pub trait AnalyticFunction {
    fn value(&self, w: Complex64) -> Complex64;

    /// `value(w) - 1`; implementors close to 1 override this to avoid cancellation.
    fn value_minus_one(&self, w: Complex64) -> Complex64 {
        self.value(w) - 1.0
    }
}

impl AnalyticFunction for ComplexPolynomial {
    fn value(&self, w: Complex64) -> Complex64 {
        self.eval(w)
    }
}

impl AnalyticFunction for TaylorPolynomial {
    fn value(&self, w: Complex64) -> Complex64 {
        self.eval(w)
    }
}

/// Adapter for closures.
pub struct AnalyticFn<F>(pub F);

impl<F: Fn(Complex64) -> Complex64> AnalyticFunction for AnalyticFn<F> {
    fn value(&self, w: Complex64) -> Complex64 {
        (self.0)(w)
    }
}

/// Device potential `Re[Q0 (P - 1)](1/z)` at a physical point.
///
/// The two factors are evaluated separately rather than expanding the
/// product, which keeps high-degree `P` accurate.
pub fn device_field<Q, P>(q0: &Q, p: &P, z: Complex64) -> Result<f64, LaplaceError>
where
    Q: AnalyticFunction + ?Sized,
    P: AnalyticFunction + ?Sized,
{
    let w = kelvin_map(z)?;
    Ok((q0.value(w) * p.value_minus_one(w)).re)
}

/// Illusion potential `Re[Q1 P + Q0 (P - 1)](1/z)`: close to `Re Q1(1/z)`
/// where `P ≈ 1` and close to `-Re Q0(1/z)` where `P ≈ 0`.
pub fn illusion_field<Q, R, P>(q0: &Q, q1: &R, p: &P, z: Complex64) -> Result<f64, LaplaceError>
where
    Q: AnalyticFunction + ?Sized,
    R: AnalyticFunction + ?Sized,
    P: AnalyticFunction + ?Sized,
{
    let w = kelvin_map(z)?;
    Ok((q1.value(w) * p.value(w) + q0.value(w) * p.value_minus_one(w)).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplace2d::CloakPolynomial;

    #[test]
    fn unit_polynomial_gives_no_field() {
        let q0 = ComplexPolynomial::from_real(&[0.3, -1.0, 2.0]).unwrap();
        let p = ComplexPolynomial::one();
        for z in [Complex64::new(0.5, 0.2), Complex64::new(-3.0, 1.0)] {
            assert_eq!(device_field(&q0, &p, z).unwrap(), 0.0);
        }
        assert!(device_field(&q0, &p, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn zero_illusion_reduces_to_device_field() {
        let q0 = ComplexPolynomial::from_real(&[0.3, -1.0, 2.0]).unwrap();
        let p = CloakPolynomial::new(8, 8, 1.0).unwrap();
        let zero = ComplexPolynomial::zero();
        for z in [Complex64::new(0.9, 0.1), Complex64::new(4.0, -2.0)] {
            assert_eq!(illusion_field(&q0, &zero, &p, z).unwrap(), device_field(&q0, &p, z).unwrap());
        }
    }

    #[test]
    fn closures_are_analytic_functions() {
        let f = AnalyticFn(|w: Complex64| w * w);
        assert_eq!(f.value(Complex64::new(0.0, 1.0)), Complex64::new(-1.0, 0.0));
    }
}
