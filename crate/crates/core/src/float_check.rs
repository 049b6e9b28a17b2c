//! Double-precision evaluation of the literal root products, compared against
//! the exact values.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::families::{cos_pi_ratio, Family};
use crate::range::IntRange;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatCompareResult {
    pub family: Family,
    pub n: u32,
    pub m: i64,
    pub exact: Scalar,
    pub float_product: ComplexValue,
    /// `|re - exact| / max(1, |exact|)`.
    pub relative_error: f64,
    /// `|im|` of the product; nonzero only through rounding.
    pub imaginary_residual: f64,
}

impl FloatCompareResult {
    fn scale(&self) -> f64 {
        self.exact.to_f64().abs().max(1.0)
    }

    /// `imaginary_residual / max(1, |exact|)`.
    pub fn imaginary_ratio(&self) -> f64 {
        self.imaginary_residual / self.scale()
    }

    pub fn within(&self, tol: f64) -> bool {
        self.relative_error < tol && self.imaginary_ratio() < tol
    }
}

/// Multiplies the `n` factors `m + x(n, l)` in increasing `l`.
pub fn float_product(family: &Family, n: u32, m: i64) -> FloatCompareResult {
    let mf = m as f64;
    let z: Complex64 = family
        .roots_float(n)
        .into_iter()
        .fold(Complex64::new(1.0, 0.0), |acc, x| acc * (x + mf));
    let exact = family.x(n, m);
    let ef = exact.to_f64();
    FloatCompareResult {
        family: family.clone(),
        n,
        m,
        relative_error: (z.re - ef).abs() / ef.abs().max(1.0),
        imaginary_residual: z.im.abs(),
        exact,
        float_product: z.into(),
    }
}

/// `sum_{l=1}^{n} cos(l pi / (n + 1))`: the zeros of `U_n` sum to zero.
pub fn chebyshev_zero_sum(n: u32) -> f64 {
    (1..=n).map(|l| cos_pi_ratio(l, n + 1)).sum()
}

/// `F_n` as `prod_{l=1}^{floor((n-1)/2)} (3 + 2 cos(2 l pi / n))`, `n >= 2`.
pub fn fibonacci_cosine_product(n: u32) -> f64 {
    let d = f64::from(n);
    (1..=(n.saturating_sub(1)) / 2)
        .map(|l| 3.0 + 2.0 * (2.0 * f64::from(l) * PI / d).cos())
        .product()
}

/// `F_n` as `prod_{l=1}^{n-1} (1 - 2i cos(l pi / n))`, `n >= 2`.
pub fn fibonacci_complex_product(n: u32) -> Complex64 {
    complex_cosine_product(n, 1.0)
}

/// `P_n` as `2^floor(n/2) prod_{l=1}^{floor((n-1)/2)} (3 + cos(2 l pi / n))`.
pub fn pell_cosine_product(n: u32) -> f64 {
    let d = f64::from(n);
    let prod: f64 = (1..=(n.saturating_sub(1)) / 2)
        .map(|l| 3.0 + (2.0 * f64::from(l) * PI / d).cos())
        .product();
    2f64.powi((n / 2) as i32) * prod
}

/// `P_n` as `prod_{l=1}^{n-1} (2 - 2i cos(l pi / n))`.
pub fn pell_complex_product(n: u32) -> Complex64 {
    complex_cosine_product(n, 2.0)
}

fn complex_cosine_product(n: u32, p: f64) -> Complex64 {
    (1..n)
        .map(|l| Complex64::new(p, -2.0 * cos_pi_ratio(l, n)))
        .fold(Complex64::new(1.0, 0.0), |acc, f| acc * f)
}

/// Aggregate of float comparisons; same shape as a sweep report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatReport {
    pub families: Vec<Family>,
    pub n: IntRange,
    pub m: IntRange,
    pub tolerance: f64,
    pub total: usize,
    pub passed: usize,
    pub max_relative_error: f64,
    pub max_imaginary_ratio: f64,
    pub failures: Vec<FloatCompareResult>,
    pub wall_time_ms: f64,
}

impl FloatReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn float_sweep(families: &[Family], n: IntRange, m: IntRange, tolerance: f64) -> Result<FloatReport> {
    let started = Instant::now();
    let n_lo = u32::try_from(n.start.max(1))
        .map_err(|_| Error::Domain(format!("bad n range {n}")))?;
    let n_hi = u32::try_from(n.end).map_err(|_| Error::Domain(format!("bad n range {n}")))?;
    if n.start < 1 {
        return Err(Error::Domain(format!("float products need n >= 1 (got {n})")));
    }
    let points: Vec<(usize, u32, i64)> = (0..families.len())
        .flat_map(|fi| (n_lo..=n_hi).flat_map(move |nn| m.iter().map(move |mm| (fi, nn, mm))))
        .collect();
    let results: Vec<FloatCompareResult> = points
        .par_iter()
        .map(|&(fi, nn, mm)| float_product(&families[fi], nn, mm))
        .collect();
    let max_relative_error = results.iter().map(|r| r.relative_error).fold(0.0, f64::max);
    let max_imaginary_ratio = results.iter().map(|r| r.imaginary_ratio()).fold(0.0, f64::max);
    let total = results.len();
    let failures: Vec<_> = results.into_iter().filter(|r| !r.within(tolerance)).collect();
    Ok(FloatReport {
        families: families.to_vec(),
        n,
        m,
        tolerance,
        total,
        passed: total - failures.len(),
        max_relative_error,
        max_imaginary_ratio,
        failures,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_product_n6_m1() {
        let r = float_product(&Family::fibonacci(), 6, 1);
        assert_eq!(r.exact, 13);
        assert!(r.relative_error < 1e-12);
        assert!(r.imaginary_residual < 1e-12);
    }

    #[test]
    fn single_factor_is_exact() {
        let r = float_product(&Family::fibonacci(), 1, 5);
        assert_eq!(r.exact, 5);
        assert_eq!(r.float_product.re, 5.0);
        assert_eq!(r.relative_error, 0.0);
    }

    #[test]
    fn real_lucas_product() {
        let r = float_product(&Family::lucas(2).unwrap(), 4, 3);
        assert_eq!(r.exact, 31);
        assert!(r.relative_error < 1e-12);
        assert_eq!(r.imaginary_residual, 0.0);
    }

    #[test]
    fn zero_exact_value_uses_unit_denominator() {
        let r = float_product(&Family::fibonacci(), 1, 0);
        assert_eq!(r.exact, 0);
        assert!(r.relative_error < 1e-15);
        assert!(r.within(DEFAULT_TOLERANCE));
    }

    #[test]
    fn chebyshev_sums() {
        assert_eq!(chebyshev_zero_sum(1), 0.0);
        assert!(chebyshev_zero_sum(2).abs() < 1e-15);
        for n in 1..=25 {
            assert!(chebyshev_zero_sum(n).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn both_fibonacci_forms() {
        let (mut a, mut b) = (0f64, 1f64);
        for n in 2..=30u32 {
            (a, b) = (b, a + b);
            // b is now F_n.
            assert!((fibonacci_cosine_product(n) - b).abs() / b < 1e-9, "n={n}");
            let z = fibonacci_complex_product(n);
            assert!((z.re - b).abs() / b < 1e-9 && z.im.abs() / b < 1e-9, "n={n}");
        }
    }

    #[test]
    fn both_pell_forms() {
        let (mut a, mut b) = (0f64, 1f64);
        for n in 2..=30u32 {
            (a, b) = (b, 2.0 * b + a);
            assert!((pell_cosine_product(n) - b).abs() / b < 1e-9, "n={n}");
            let z = pell_complex_product(n);
            assert!((z.re - b).abs() / b < 1e-9 && z.im.abs() / b < 1e-9, "n={n}");
        }
    }

    #[test]
    fn lucas_sweep_within_tolerance() {
        let fams: Vec<Family> = [-2, -1, 1, 2].into_iter().map(|q| Family::lucas(q).unwrap()).collect();
        let rep = float_sweep(&fams, IntRange::new(1, 25).unwrap(), IntRange::new(-10, 10).unwrap(), DEFAULT_TOLERANCE)
            .unwrap();
        assert_eq!(rep.total, 4 * 25 * 21);
        assert!(rep.all_passed(), "{:?}", rep.failures.first());
        assert!(rep.max_relative_error < 1e-9);
    }

    #[test]
    fn errors_are_reported_not_clamped() {
        let fams = [Family::lucas(2).unwrap()];
        let rep = float_sweep(&fams, IntRange::new(20, 25).unwrap(), IntRange::new(-3, 3).unwrap(), 0.0).unwrap();
        assert!(rep.max_relative_error > 0.0);
        assert!(!rep.failures.is_empty());
        assert!(float_sweep(&fams, IntRange::new(0, 2).unwrap(), IntRange::single(0), 1e-9).is_err());
    }
}
