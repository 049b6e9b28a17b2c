//! Families of number sequences `X(n, m) = prod_{l=1..n} (m + x(n, l))`.
//!
//! Each [`Family`] fixes a root set `x(n, l)` and knows how to evaluate
//! `X(n, m)` exactly for every `n` and every integer `m`. The Lucas-type
//! families have irrational or complex roots, so they are evaluated through
//! their three-term recursion in `n`; the literal cosine product lives in
//! [`crate::float_check`].

pub mod rule;

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroI64;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{binomial, pochhammer, Scalar};
use crate::range::IntRange;
use rule::Expr;

type RootFn = dyn Fn(u32, u32) -> Scalar + Send + Sync;

/// A user-defined root set, given as a total rule `(n, l) -> x(n, l)`.
#[derive(Clone)]
pub struct ExplicitRoots {
    label: String,
    rule: Arc<RootFn>,
}

impl ExplicitRoots {
    /// Wraps a closure. The closure must be defined for all `n >= 1`,
    /// `1 <= l <= n`.
    pub fn new(
        label: impl Into<String>,
        rule: impl Fn(u32, u32) -> Scalar + Send + Sync + 'static,
    ) -> Self {
        ExplicitRoots {
            label: label.into(),
            rule: Arc::new(rule),
        }
    }

    /// Builds a root set from a rule expression such as `2^l` or `l^2`.
    pub fn from_expr(src: &str) -> Result<Self> {
        let expr = Expr::parse(src)?;
        let label = src.split_whitespace().collect::<Vec<_>>().join(" ");
        Ok(ExplicitRoots::new(label, move |n, l| expr.eval(n, l)))
    }

    /// Reads a rule file: the first line that is neither blank nor a `#`
    /// comment holds the expression.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| {
                Error::Parse(format!("no root rule found in {}", path.display()))
            })?;
        Self::from_expr(line)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn root(&self, n: u32, l: u32) -> Scalar {
        (self.rule)(n, l)
    }
}

impl fmt::Debug for ExplicitRoots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExplicitRoots").field("label", &self.label).finish()
    }
}

impl PartialEq for ExplicitRoots {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}

/// One family of sequences.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Constant roots `x(n, l) = c`, so `X(n, m) = (m + c)^n`.
    Power(Scalar),
    /// Roots `x(n, l) = l`, so `X(n, m) = (m + 1)_n`.
    Pochhammer,
    /// Roots `-2 sqrt(q) cos(l pi / (n + 1))`, giving the general Lucas
    /// numbers `L_{n+1}^{(m, q)}`. `q = -1` is the generalized Fibonacci family.
    Lucas(NonZeroI64),
    Explicit(ExplicitRoots),
}

impl Family {
    pub fn power(c: impl Into<Scalar>) -> Self {
        Family::Power(c.into())
    }

    pub fn lucas(q: i64) -> Result<Self> {
        NonZeroI64::new(q)
            .map(Family::Lucas)
            .ok_or_else(|| Error::Domain("Lucas family needs q != 0".into()))
    }

    pub fn fibonacci() -> Self {
        Family::Lucas(NonZeroI64::new(-1).unwrap())
    }

    pub fn is_fibonacci(&self) -> bool {
        matches!(self, Family::Lucas(q) if q.get() == -1)
    }

    /// The ten families used by the default sweeps.
    pub fn standard_set() -> Vec<Family> {
        let mut v: Vec<Family> = [0, 1, -1, 2].into_iter().map(Family::power).collect();
        v.push(Family::Power(Scalar::ratio(1, 2).unwrap()));
        v.push(Family::Pochhammer);
        v.extend([-1, 1, 2, -2].into_iter().map(|q| Family::lucas(q).unwrap()));
        v
    }

    /// Parses a selector, reading the rule file for `roots:<file>`.
    ///
    /// Grammar: `power[:c]`, `pochhammer`, `fib`, `lucas:q`, `roots:<file>`.
    pub fn from_selector(s: &str) -> Result<Self> {
        match s.trim().split_once(':') {
            Some(("roots", path)) => Ok(Family::Explicit(ExplicitRoots::from_file(Path::new(path))?)),
            _ => s.parse(),
        }
    }

    /// `X(n, m)`. `n = 0` gives the empty product 1.
    pub fn x(&self, n: u32, m: i64) -> Scalar {
        match self {
            Family::Power(c) => (Scalar::int(m) + c).pow(n),
            Family::Pochhammer => pochhammer(m + 1, n),
            Family::Lucas(q) => Scalar::Integer(lucas_number(n + 1, m, q.get())),
            Family::Explicit(roots) => (1..=n)
                .map(|l| Scalar::int(m) + roots.root(n, l))
                .product(),
        }
    }

    /// The root sum `sum_l x(n, l)`.
    pub fn script_x(&self, n: u32) -> Scalar {
        match self {
            Family::Power(c) => Scalar::from(n) * c,
            Family::Pochhammer => {
                Scalar::Integer(BigInt::from(n) * (n + 1) / 2u32)
            }
            // Zeros of U_n are symmetric about the origin.
            Family::Lucas(_) => Scalar::zero(),
            Family::Explicit(roots) => (1..=n).map(|l| roots.root(n, l)).sum(),
        }
    }

    /// The roots `x(n, 1..=n)` in double precision, in increasing `l`.
    ///
    /// Lucas roots with `q < 0` are purely imaginary.
    pub fn roots_float(&self, n: u32) -> Vec<Complex64> {
        match self {
            Family::Power(c) => vec![Complex64::new(c.to_f64(), 0.0); n as usize],
            Family::Pochhammer => (1..=n).map(|l| Complex64::new(l.into(), 0.0)).collect(),
            Family::Lucas(q) => {
                let q = q.get() as f64;
                let scale = 2.0 * q.abs().sqrt();
                (1..=n)
                    .map(|l| {
                        let v = -scale * cos_pi_ratio(l, n + 1);
                        if q > 0.0 {
                            Complex64::new(v, 0.0)
                        } else {
                            Complex64::new(0.0, v)
                        }
                    })
                    .collect()
            }
            Family::Explicit(roots) => (1..=n)
                .map(|l| Complex64::new(roots.root(n, l).to_f64(), 0.0))
                .collect(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Power(c) => write!(f, "power:{c}"),
            Family::Pochhammer => f.write_str("pochhammer"),
            Family::Lucas(q) if q.get() == -1 => f.write_str("fib"),
            Family::Lucas(q) => write!(f, "lucas:{q}"),
            Family::Explicit(r) => write!(f, "roots:{}", r.label),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses the file-free selectors; `roots:<expr>` takes the rule inline.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("power", None) => Ok(Family::power(0)),
            ("power", Some(c)) => Ok(Family::Power(c.parse()?)),
            ("pochhammer", None) => Ok(Family::Pochhammer),
            ("fib", None) => Ok(Family::fibonacci()),
            ("lucas", Some(q)) => {
                let q: i64 = q
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad Lucas parameter {q:?}")))?;
                Family::lucas(q)
            }
            ("roots", Some(expr)) => Ok(Family::Explicit(ExplicitRoots::from_expr(expr)?)),
            _ => Err(Error::Parse(format!(
                "unknown family selector {s:?} (expected power[:c], pochhammer, fib, lucas:q, roots:<file>)"
            ))),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `cos(k pi / d)` for `0 <= k <= d`, reflected so that `cos(pi/2)` is exactly
/// zero and `cos((d-k) pi / d)` is exactly `-cos(k pi / d)`.
pub(crate) fn cos_pi_ratio(k: u32, d: u32) -> f64 {
    debug_assert!(k <= d && d > 0);
    match (2 * k).cmp(&d) {
        std::cmp::Ordering::Equal => 0.0,
        std::cmp::Ordering::Less => (f64::from(k) * PI / f64::from(d)).cos(),
        std::cmp::Ordering::Greater => -(f64::from(d - k) * PI / f64::from(d)).cos(),
    }
}

/// `L_k^{(p, q)}` from `L_0 = 0, L_1 = 1, L_k = p L_{k-1} - q L_{k-2}`.
pub fn lucas_number(k: u32, p: i64, q: i64) -> BigInt {
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &p * &cur - &q * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `sum_{l=0}^{floor(n/2)} C(n-l, l) m^(n-2l)`, which equals `F_{n+1}^{(m)}`.
pub fn fibonacci_polynomial(n: u32, m: i64) -> Scalar {
    let m = Scalar::int(m);
    (0..=n / 2)
        .map(|l| binomial(n - l, l.into()) * m.pow(n - 2 * l))
        .sum()
}

/// A rectangle of `X(n, m)` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceWindow {
    pub family: Family,
    pub n_range: IntRange,
    pub m_range: IntRange,
    /// `values[i][j] = X(n_range.start + i, m_range.start + j)`.
    pub values: Vec<Vec<Scalar>>,
}

impl SequenceWindow {
    pub fn get(&self, n: i64, m: i64) -> Option<&Scalar> {
        if !self.n_range.contains(n) || !self.m_range.contains(m) {
            return None;
        }
        let i = (n - self.n_range.start) as usize;
        let j = (m - self.m_range.start) as usize;
        Some(&self.values[i][j])
    }
}

/// Tabulates `X(n, m)` over the given ranges. `n` must stay `>= 1`.
pub fn table(family: &Family, n_range: IntRange, m_range: IntRange) -> Result<SequenceWindow> {
    if n_range.start < 1 {
        return Err(Error::Domain(format!(
            "table rows need n >= 1 (got {n_range})"
        )));
    }
    let n_max = u32::try_from(n_range.end)
        .map_err(|_| Error::Domain(format!("n range too large: {n_range}")))?;
    let values = (n_range.start as u32..=n_max)
        .map(|n| m_range.iter().map(|m| family.x(n, m)).collect())
        .collect();
    Ok(SequenceWindow {
        family: family.clone(),
        n_range,
        m_range,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Family {
        Family::fibonacci()
    }

    #[test]
    fn paper_table_samples() {
        assert_eq!(fib().x(4, 2), 29);
        assert_eq!(Family::Pochhammer.x(5, 2), 2520);
        assert_eq!(Family::power(0).x(6, 3), 729);
        assert_eq!(Family::power(0).x(3, 0), 0);
    }

    #[test]
    fn fibonacci_at_negative_m() {
        // m^3 + 2m at m = -2.
        assert_eq!(fib().x(3, -2), -12);
        // Backward run of the recursion: L_4 with p = -2, q = -1.
        assert_eq!(lucas_number(4, -2, -1), BigInt::from(-12));
    }

    #[test]
    fn lucas_recursion_small() {
        // p = 3, q = 2: 0, 1, 3, 7, 15, 31.
        let seq: Vec<_> = (0..6).map(|k| lucas_number(k, 3, 2)).collect();
        let want: Vec<BigInt> = [0, 1, 3, 7, 15, 31].iter().map(|&v| v.into()).collect();
        assert_eq!(seq, want);
        assert_eq!(Family::lucas(2).unwrap().x(4, 3), 31);
    }

    #[test]
    fn columns_are_fibonacci_and_pell() {
        let (mut f0, mut f1) = (BigInt::zero(), BigInt::one());
        let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
        for n in 1..=30u32 {
            // F_{n+1} and P_{n+1}.
            let f2 = &f0 + &f1;
            f0 = std::mem::replace(&mut f1, f2);
            let p2 = &p0 + &p1 * 2u32;
            p0 = std::mem::replace(&mut p1, p2);
            assert_eq!(fib().x(n, 1), Scalar::Integer(f1.clone()), "n={n}");
            assert_eq!(fib().x(n, 2), Scalar::Integer(p1.clone()), "n={n}");
        }
    }

    #[test]
    fn row_one_is_identity() {
        for m in -50..=50 {
            assert_eq!(fib().x(1, m), m);
        }
    }

    #[test]
    fn script_x_values() {
        assert_eq!(fib().script_x(9), 0);
        assert_eq!(Family::Pochhammer.script_x(4), 10);
        assert_eq!(Family::power(2).script_x(3), 6);
        let half = Family::Power(Scalar::ratio(1, 2).unwrap());
        assert_eq!(half.script_x(3).to_string(), "3/2");
    }

    #[test]
    fn fibonacci_polynomial_values() {
        assert_eq!(fibonacci_polynomial(4, 2), 29);
        for m in -10..=10i64 {
            assert_eq!(fibonacci_polynomial(2, m), m * m + 1);
        }
        assert_eq!(fibonacci_polynomial(0, 5), 1);
        for n in 0..=30 {
            for m in -10..=10 {
                assert_eq!(
                    fibonacci_polynomial(n, m),
                    Scalar::Integer(lucas_number(n + 1, m, -1)),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn explicit_replicas_match_dedicated_evaluators() {
        let power = ExplicitRoots::new("3", |_, _| Scalar::int(3));
        let poch = ExplicitRoots::from_expr("l").unwrap();
        for n in 1..=15 {
            for m in -10..=10 {
                assert_eq!(Family::Explicit(power.clone()).x(n, m), Family::power(3).x(n, m));
                assert_eq!(Family::Explicit(poch.clone()).x(n, m), Family::Pochhammer.x(n, m));
            }
            assert_eq!(Family::Explicit(poch.clone()).script_x(n), Family::Pochhammer.script_x(n));
        }
    }

    #[test]
    fn every_family_is_total() {
        let mut fams = Family::standard_set();
        fams.push(Family::Explicit(ExplicitRoots::from_expr("2^l").unwrap()));
        fams.push(Family::Explicit(ExplicitRoots::from_expr("l^2").unwrap()));
        for f in &fams {
            for n in 1..=25 {
                for m in -50..=50 {
                    let v = f.x(n, m);
                    if !matches!(f, Family::Power(c) if !c.is_integer()) {
                        assert!(v.is_integer(), "{f} n={n} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn roots_float_shapes() {
        let r = Family::power(5).roots_float(4);
        assert_eq!(r, vec![Complex64::new(5.0, 0.0); 4]);
        let r = Family::lucas(1).unwrap().roots_float(1);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].norm(), 0.0);
        let s: Complex64 = fib().roots_float(10).into_iter().sum();
        assert!(s.norm() < 1e-12);
        assert!(fib().roots_float(3).iter().all(|z| z.re == 0.0));
    }

    #[test]
    fn selectors() {
        assert_eq!("power".parse::<Family>().unwrap(), Family::power(0));
        assert_eq!("power:1/2".parse::<Family>().unwrap().to_string(), "power:1/2");
        assert_eq!("fib".parse::<Family>().unwrap(), Family::fibonacci());
        assert_eq!("lucas:-1".parse::<Family>().unwrap(), Family::fibonacci());
        assert_eq!("lucas:2".parse::<Family>().unwrap().to_string(), "lucas:2");
        assert!("lucas:0".parse::<Family>().is_err());
        assert!("lucas".parse::<Family>().is_err());
        assert!("bogus".parse::<Family>().is_err());
        for f in Family::standard_set() {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn selector_reads_rule_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("qpoch.txt");
        std::fs::write(&path, "# q-Pochhammer roots\n\n2^l\n").unwrap();
        let f = Family::from_selector(&format!("roots:{}", path.display())).unwrap();
        assert_eq!(f.to_string(), "roots:2^l");
        // (m+2)(m+4) at m = 1.
        assert_eq!(f.x(2, 1), 15);
        assert!(Family::from_selector("roots:/nonexistent/file").is_err());
    }

    #[test]
    fn table_window() {
        let w = table(&Family::Pochhammer, IntRange::single(1), IntRange::single(0)).unwrap();
        assert_eq!(w.values, vec![vec![Scalar::one()]]);
        let w = table(&fib(), IntRange::new(1, 7).unwrap(), IntRange::new(0, 7).unwrap()).unwrap();
        assert_eq!(w.values.len(), 7);
        assert!(w.values.iter().all(|r| r.len() == 8));
        assert_eq!(w.get(7, 7).unwrap(), &Scalar::int(927843));
        assert!(w.get(8, 0).is_none());
        assert!(table(&fib(), IntRange::new(0, 2).unwrap(), IntRange::single(0)).is_err());
    }
}
