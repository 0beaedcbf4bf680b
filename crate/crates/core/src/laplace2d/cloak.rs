//! The cloaking polynomials
//!
//! ```text
//! P_{n,s}(z) = (1 - z/β)^s Σ_{j<n} binom(s+j-1, j) (z/β)^j
//! ```
//!
//! `P_{n,s}` is 1 to order `n` at the origin and vanishes to order `s` at `β`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::fields::AnalyticFunction;
use super::polynomial::{ComplexPolynomial, MAX_POLY_DEGREE};
use super::LaplaceError;

/// Largest `n + s` accepted by [`cloak_polynomial_hermite_oracle`].
pub const HERMITE_ORACLE_MAX_DEGREE: usize = 60;

fn validate(n: usize, s: usize, beta: f64) -> Result<(), LaplaceError> {
    if n == 0 || s == 0 {
        return Err(LaplaceError::InvalidParameter(format!("n = {n} and s = {s} must be at least 1")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(LaplaceError::InvalidParameter(format!("beta = {beta} must be positive")));
    }
    if n + s - 1 > MAX_POLY_DEGREE {
        return Err(LaplaceError::DegreeCap { degree: n + s - 1, cap: MAX_POLY_DEGREE });
    }
    Ok(())
}

/// `binom(s + j - 1, j)` for `j = 0..n`.
fn tail_binomials(n: usize, s: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n);
    let mut b = BigInt::one();
    for j in 0..n {
        if j > 0 {
            b = b * BigInt::from(s + j - 1) / BigInt::from(j);
        }
        out.push(b.clone());
    }
    out
}

/// Exact integer coefficients of `P_{n,s}` in the variable `x = z/β`.
fn integer_coefficients(n: usize, s: usize) -> Vec<BigInt> {
    let mut factor = Vec::with_capacity(s + 1);
    let mut b = BigInt::one();
    for i in 0..=s {
        if i > 0 {
            b = b * BigInt::from(s + 1 - i) / BigInt::from(i);
        }
        factor.push(if i % 2 == 0 { b.clone() } else { -b.clone() });
    }
    let tail = tail_binomials(n, s);
    let mut out = vec![BigInt::zero(); n + s];
    for (i, f) in factor.iter().enumerate() {
        for (j, t) in tail.iter().enumerate() {
            out[i + j] += f * t;
        }
    }
    out
}

/// Monomial coefficients of `P_{n,s}`, expanded in exact integer arithmetic
/// and rounded once to floating point.
pub fn cloak_polynomial(n: usize, s: usize, beta: f64) -> Result<ComplexPolynomial, LaplaceError> {
    validate(n, s, beta)?;
    let mut coeffs = Vec::with_capacity(n + s);
    for (k, c) in integer_coefficients(n, s).into_iter().enumerate() {
        let v = c.to_f64().filter(|v| v.is_finite()).ok_or(LaplaceError::Overflow { n, s })?;
        let scaled = v / beta.powi(k as i32);
        if !scaled.is_finite() {
            return Err(LaplaceError::Overflow { n, s });
        }
        coeffs.push(Complex64::new(scaled, 0.0));
    }
    ComplexPolynomial::new(coeffs)
}

/// The same polynomial obtained from its Hermite interpolation conditions
///
/// ```text
/// P(0) = 1,  P^(k)(0) = 0 for 1 <= k < n,  P^(k)(β) = 0 for 0 <= k < s,
/// ```
///
/// solved exactly over the rationals (with `β` converted exactly from its
/// binary value). Intended as a test oracle for `n + s <= 60`.
pub fn cloak_polynomial_hermite_oracle(n: usize, s: usize, beta: f64) -> Result<ComplexPolynomial, LaplaceError> {
    validate(n, s, beta)?;
    if n + s > HERMITE_ORACLE_MAX_DEGREE {
        return Err(LaplaceError::DegreeCap { degree: n + s - 1, cap: HERMITE_ORACLE_MAX_DEGREE - 1 });
    }
    let b = BigRational::from_float(beta).ok_or_else(|| LaplaceError::InvalidParameter("beta".into()))?;
    // Unknowns c_n … c_{n+s-1}. Row k: Σ_j binom(j, k) β^{j-k} c_j = -δ_{k0}.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(s);
    for k in 0..s {
        let mut row = Vec::with_capacity(s + 1);
        for j in n..n + s {
            if j < k {
                row.push(BigRational::zero());
            } else {
                row.push(BigRational::from_integer(binomial(j, k)) * pow(&b, j - k));
            }
        }
        row.push(if k == 0 { -BigRational::one() } else { BigRational::zero() });
        rows.push(row);
    }
    let sol = solve_exact(rows)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + s];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (i, v) in sol.into_iter().enumerate() {
        let f = v.to_f64().filter(|f| f.is_finite()).ok_or(LaplaceError::Overflow { n, s })?;
        coeffs[n + i] = Complex64::new(f, 0.0);
    }
    ComplexPolynomial::new(coeffs)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

fn pow(b: &BigRational, e: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= b;
    }
    out
}

/// Gauss–Jordan elimination on an augmented matrix.
fn solve_exact(mut a: Vec<Vec<BigRational>>) -> Result<Vec<BigRational>, LaplaceError> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !a[r][col].is_zero()).ok_or(LaplaceError::SingularSystem)?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[m].clone()).collect())
}

/// `P_{n,s}` with both its monomial expansion and a factored evaluator.
///
/// The monomial coefficients grow like `binom(n+s, n)` and cancel heavily,
/// so [`CloakPolynomial::eval`] uses the product form instead of Horner on
/// the expansion, and [`CloakPolynomial::eval_minus_one`] uses the
/// complementary form `P - 1 = -x^n Σ_{i<s} binom(n+i-1, i) (1 - x)^i`,
/// which stays accurate where `P ≈ 1`.
#[derive(Debug, Clone)]
pub struct CloakPolynomial {
    n: usize,
    s: usize,
    beta: f64,
    tail: Vec<f64>,
    complement: Vec<f64>,
    expanded: ComplexPolynomial,
}

impl CloakPolynomial {
    pub fn new(n: usize, s: usize, beta: f64) -> Result<Self, LaplaceError> {
        let expanded = cloak_polynomial(n, s, beta)?;
        let to_f64 = |v: Vec<BigInt>| {
            v.into_iter()
                .map(|b| b.to_f64().filter(|v| v.is_finite()).ok_or(LaplaceError::Overflow { n, s }))
                .collect::<Result<Vec<f64>, _>>()
        };
        let tail = to_f64(tail_binomials(n, s))?;
        let complement = to_f64(tail_binomials(s, n))?;
        Ok(Self { n, s, beta, tail, complement, expanded })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Monomial coefficients.
    pub fn expanded(&self) -> &ComplexPolynomial {
        &self.expanded
    }

    /// `P_{n,s}(z)` from the product form.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let x = z / self.beta;
        let sum = self.tail.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &b| acc * x + b);
        (Complex64::new(1.0, 0.0) - x).powu(self.s as u32) * sum
    }

    /// `P_{n,s}(z) - 1` without the cancellation of subtracting 1.
    pub fn eval_minus_one(&self, z: Complex64) -> Complex64 {
        let x = z / self.beta;
        let y = Complex64::new(1.0, 0.0) - x;
        let sum = self.complement.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &b| acc * y + b);
        -x.powu(self.n as u32) * sum
    }
}

impl AnalyticFunction for CloakPolynomial {
    fn value(&self, w: Complex64) -> Complex64 {
        self.eval(w)
    }

    fn value_minus_one(&self, w: Complex64) -> Complex64 {
        self.eval_minus_one(w)
    }
}
