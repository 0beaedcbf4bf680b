//! Associated Legendre functions without the Condon–Shortley phase.

use super::{SpecFunError, MAX_DEGREE};
use std::f64::consts::PI;

/// `P_n^m(t) = (1-t²)^{m/2} d^m P_n/dt^m` with `P_n(1) = 1`.
///
/// Computed from `P_m^m = (2m-1)!! (1-t²)^{m/2}` by the three-term recurrence
/// in `n`. The unnormalised values overflow for `m` beyond about 150; use
/// [`NormalizedLegendre`] for spherical-harmonic work.
pub fn assoc_legendre(n: usize, m: usize, t: f64) -> Result<f64, SpecFunError> {
    if m > n {
        return Err(SpecFunError::InvalidOrder { n, m: m as i64 });
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(SpecFunError::LegendreDomain(t));
    }
    if n > MAX_DEGREE {
        return Err(SpecFunError::DegreeTooLarge(n));
    }
    let s = ((1.0 - t) * (1.0 + t)).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= (2 * k + 1) as f64 * s;
    }
    if n == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = (2 * m + 1) as f64 * t * pmm;
    for l in (m + 1)..n {
        let next = ((2 * l + 1) as f64 * t * cur - (l + m) as f64 * prev) / (l + 1 - m) as f64;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Table of fully normalised Legendre functions at one elevation,
///
/// ```text
/// P̄_n^m(cos θ) = sqrt((2n+1)/(4π) · (n-m)!/(n+m)!) · P_n^m(cos θ),   0 <= m <= n <= nmax,
/// ```
///
/// together with `P̄_n^m / sin θ` (for `m >= 1`) and `dP̄_n^m/dθ`.
///
/// `P̄/sin θ` is produced by running the same recurrence from a seed with
/// one fewer power of `sin θ`, so it stays finite at the poles.
#[derive(Debug, Clone)]
pub struct NormalizedLegendre {
    nmax: usize,
    p: Vec<f64>,
    p_over_sin: Vec<f64>,
    dp_dtheta: Vec<f64>,
}

#[inline]
fn tri(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

impl NormalizedLegendre {
    /// Builds the table from `cos θ` and `sin θ >= 0`.
    pub fn new(nmax: usize, cos_theta: f64, sin_theta: f64) -> Self {
        let size = tri(nmax, nmax) + 1;
        let mut p = vec![0.0; size];
        let mut q = vec![0.0; size];
        let t = cos_theta;
        let s = sin_theta;

        // Sectoral seeds: P̄_m^m = sqrt((2m+1)/(2m)) s P̄_{m-1}^{m-1}.
        let mut pmm = 0.5 / PI.sqrt();
        let mut qmm = 0.0;
        for m in 0..=nmax {
            if m > 0 {
                let f = ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
                // Q̄_m^m = P̄_m^m / s carries s^{m-1}.
                qmm = if m == 1 { f * pmm } else { f * s * qmm };
                pmm *= f * s;
            }
            fill_column(&mut p, nmax, m, t, pmm);
            if m > 0 {
                fill_column(&mut q, nmax, m, t, qmm);
            }
        }

        let mut dp = vec![0.0; size];
        for n in 0..=nmax {
            for m in 0..=n {
                let up = if m < n { p[tri(n, m + 1)] } else { 0.0 };
                dp[tri(n, m)] = if m == 0 {
                    -((n * (n + 1)) as f64).sqrt() * up
                } else {
                    let down = p[tri(n, m - 1)];
                    0.5 * (((n + m) * (n - m + 1)) as f64).sqrt() * down
                        - 0.5 * (((n + m + 1) * (n - m)) as f64).sqrt() * up
                };
            }
        }
        Self { nmax, p, p_over_sin: q, dp_dtheta: dp }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    /// `P̄_n^m(cos θ)`.
    #[inline]
    pub fn value(&self, n: usize, m: usize) -> f64 {
        self.p[tri(n, m)]
    }

    /// `P̄_n^m(cos θ) / sin θ`, defined for `m >= 1` (zero for `m = 0`).
    #[inline]
    pub fn over_sin(&self, n: usize, m: usize) -> f64 {
        self.p_over_sin[tri(n, m)]
    }

    /// `d P̄_n^m(cos θ) / dθ`.
    #[inline]
    pub fn d_theta(&self, n: usize, m: usize) -> f64 {
        self.dp_dtheta[tri(n, m)]
    }
}

/// Fills `P̄_n^m` for `n = m..=nmax` given the sectoral seed `P̄_m^m`.
fn fill_column(table: &mut [f64], nmax: usize, m: usize, t: f64, seed: f64) {
    table[tri(m, m)] = seed;
    if m == nmax {
        return;
    }
    table[tri(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * t * seed;
    let mf = m as f64;
    for n in (m + 2)..=nmax {
        let nf = n as f64;
        let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
        let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)).sqrt();
        table[tri(n, m)] = a * (t * table[tri(n - 1, m)] - b * table[tri(n - 2, m)]);
    }
}
