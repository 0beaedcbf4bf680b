use std::ops::{Add, Mul, Sub};

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use twofloat::TwoFloat;

use super::LaplaceError;

/// Largest polynomial degree accepted by the constructors in this module.
pub const MAX_POLY_DEGREE: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense polynomial `c_0 + c_1 z + … + c_d z^d` with complex coefficients.
///
/// Trailing zero coefficients are trimmed, so the zero polynomial has an
/// empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self, LaplaceError> {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_POLY_DEGREE + 1 {
            return Err(LaplaceError::DegreeCap { degree: coeffs.len() - 1, cap: MAX_POLY_DEGREE });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, LaplaceError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c]).expect("degree 0")
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `Σ |c_k|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect()).expect("degree unchanged")
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
            .expect("degree decreases")
    }

    /// Synthetic division by `(z - root)`: returns the quotient and the
    /// remainder, which equals the value at `root`.
    pub fn deflate(&self, root: Complex64) -> (Self, Complex64) {
        if self.coeffs.is_empty() {
            return (Self::zero(), ZERO);
        }
        let d = self.coeffs.len() - 1;
        let mut q = vec![ZERO; d];
        let mut acc = self.coeffs[d];
        for k in (0..d).rev() {
            q[k] = acc;
            acc = acc * root + self.coeffs[k];
        }
        (Self::new(q).expect("degree decreases"), acc)
    }

    /// Divides by `(z - root)` `count` times, carrying the intermediate
    /// quotients in double-double arithmetic. Returns the final quotient and
    /// the remainder of each division, i.e. the Taylor coefficients of `self`
    /// about `root` through order `count - 1`.
    pub fn deflate_repeated(&self, root: Complex64, count: usize) -> (Self, Vec<Complex64>) {
        let dd = |c: Complex64| Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im));
        let root = dd(root);
        let mut q: Vec<Complex<TwoFloat>> = self.coeffs.iter().map(|&c| dd(c)).collect();
        let mut remainders = Vec::with_capacity(count);
        for _ in 0..count {
            let Some(mut acc) = q.pop() else {
                remainders.push(ZERO);
                continue;
            };
            for k in (0..q.len()).rev() {
                let next = acc * root + q[k];
                q[k] = acc;
                acc = next;
            }
            remainders.push(Complex64::new(acc.re.into(), acc.im.into()));
        }
        let quotient = q.iter().map(|c| Complex64::new(c.re.into(), c.im.into())).collect();
        (Self::new(quotient).expect("degree decreases"), remainders)
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect()).expect("degree bounded")
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect()).expect("degree bounded")
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    /// # Panics
    /// If the product exceeds [`MAX_POLY_DEGREE`].
    fn mul(self, rhs: Self) -> ComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out).expect("product degree within cap")
    }
}

/// Polynomial in powers of `(w - center)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorPolynomial {
    pub center: Complex64,
    pub poly: ComplexPolynomial,
}

impl TaylorPolynomial {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.poly.eval(w - self.center)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn trims_and_reports_degree() {
        let p = ComplexPolynomial::from_real(&[1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 1);
        assert!(ComplexPolynomial::from_real(&[0.0]).unwrap().is_zero());
    }

    #[test]
    fn arithmetic() {
        let p = ComplexPolynomial::from_real(&[1.0, 1.0]).unwrap();
        let q = ComplexPolynomial::from_real(&[-1.0, 1.0]).unwrap();
        assert_eq!(&p * &q, ComplexPolynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap());
        assert_eq!(&p + &q, ComplexPolynomial::from_real(&[0.0, 2.0]).unwrap());
        assert_eq!(&p - &p, ComplexPolynomial::zero());
        assert_eq!((&p * &p).derivative(), ComplexPolynomial::from_real(&[2.0, 2.0]).unwrap());
    }

    #[test]
    fn deflation_recovers_factor() {
        // (z - 2)(z² + 1) = z³ - 2z² + z - 2
        let p = ComplexPolynomial::from_real(&[-2.0, 1.0, -2.0, 1.0]).unwrap();
        let (q, r) = p.deflate(c(2.0));
        assert_eq!(r, c(0.0));
        assert_eq!(q, ComplexPolynomial::from_real(&[1.0, 0.0, 1.0]).unwrap());
        let (_, r) = p.deflate(c(1.0));
        assert_eq!(r, p.eval(c(1.0)));
    }

    #[test]
    fn repeated_deflation_returns_taylor_coefficients() {
        // z² + 1 about i: 0 + 2i (z - i) + (z - i)².
        let p = ComplexPolynomial::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let (q, r) = p.deflate_repeated(i, 2);
        assert_eq!(r, vec![c(0.0), 2.0 * i]);
        assert_eq!(q, ComplexPolynomial::one());
        let (q, r) = p.deflate_repeated(c(3.0), 4);
        assert_eq!(r, vec![c(10.0), c(6.0), c(1.0), c(0.0)]);
        assert!(q.is_zero());
    }

    #[test]
    fn repeated_deflation_resolves_high_multiplicity() {
        // (z - 1)^25 has alternating binomial coefficients up to 5.2e6.
        let mut coeffs = vec![1.0];
        for _ in 0..25 {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k] -= a;
                next[k + 1] += a;
            }
            coeffs = next;
        }
        let p = ComplexPolynomial::from_real(&coeffs).unwrap();
        let (q, r) = p.deflate_repeated(c(1.0), 25);
        assert!(r.iter().all(|v| v.norm() == 0.0), "{r:?}");
        assert_eq!(q, ComplexPolynomial::one());
    }

    #[test]
    fn taylor_shift_evaluates_about_centre() {
        let t = TaylorPolynomial { center: c(1.0), poly: ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]).unwrap() };
        assert_eq!(t.eval(c(3.0)), c(4.0));
    }
}
