//! The identity catalog.
//!
//! Every entry relates members `X(n, m)` of one family to each other (and to
//! the root sum `script_x(n)`). Each check is computed exactly and passes
//! iff the residual `lhs - rhs` is exactly zero. The family-specific
//! corollaries (power, Pochhammer, Fibonacci) are not separate code paths:
//! they are these generic entries evaluated on that family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, falling_factorial, sign, Scalar};
use crate::families::{fibonacci_polynomial, Family};

/// One catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    /// Root sum from the members `X(n, 1..=n)`.
    #[serde(rename = "L1")]
    L1,
    /// Root sum from the shifted members `X(n, l + m)`.
    #[serde(rename = "L2_SHIFT")]
    L2Shift,
    /// Root sum from the scaled members `X(n, l m)`, `m != 0`.
    #[serde(rename = "L2_SCALE")]
    L2Scale,
    /// Linear recursion in `m` of order `n` with inhomogeneity `n!`.
    #[serde(rename = "REC_M")]
    RecM,
    /// Scaled sums against unscaled sums, `m != 0`.
    #[serde(rename = "SCALE_ID")]
    ScaleId,
    /// `X(n, m)` from `X(n, 0..n)`, `m >= n`.
    #[serde(rename = "EXPL_POS")]
    ExplPos,
    /// `X(n, -m)` from `X(n, 0..=-(n-1))`, `m >= n`.
    #[serde(rename = "EXPL_NEG")]
    ExplNeg,
    /// Vanishing weighted differences of a lower member, `0 <= q < p`.
    #[serde(rename = "SUBFAM_ZERO")]
    SubfamZero,
    /// The `l^p` weighted difference, equal to `(-1)^n n!`.
    #[serde(rename = "SUBFAM_FACT")]
    SubfamFact,
    /// Fibonacci family: members at `-l` against `+l`.
    #[serde(rename = "FIB_POSNEG")]
    FibPosNeg,
    /// Fibonacci family: the complementary `-l` / `+l` combination.
    #[serde(rename = "FIB_POSNEG_COMPL")]
    FibPosNegCompl,
    /// Fibonacci family: closed polynomial form in `m`.
    #[serde(rename = "FIB_POLY")]
    FibPoly,
}

impl IdentityId {
    pub const ALL: [IdentityId; 12] = [
        IdentityId::L1,
        IdentityId::L2Shift,
        IdentityId::L2Scale,
        IdentityId::RecM,
        IdentityId::ScaleId,
        IdentityId::ExplPos,
        IdentityId::ExplNeg,
        IdentityId::SubfamZero,
        IdentityId::SubfamFact,
        IdentityId::FibPosNeg,
        IdentityId::FibPosNegCompl,
        IdentityId::FibPoly,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            IdentityId::L1 => "L1",
            IdentityId::L2Shift => "L2_SHIFT",
            IdentityId::L2Scale => "L2_SCALE",
            IdentityId::RecM => "REC_M",
            IdentityId::ScaleId => "SCALE_ID",
            IdentityId::ExplPos => "EXPL_POS",
            IdentityId::ExplNeg => "EXPL_NEG",
            IdentityId::SubfamZero => "SUBFAM_ZERO",
            IdentityId::SubfamFact => "SUBFAM_FACT",
            IdentityId::FibPosNeg => "FIB_POSNEG",
            IdentityId::FibPosNegCompl => "FIB_POSNEG_COMPL",
            IdentityId::FibPoly => "FIB_POLY",
        }
    }

    pub fn uses_m(self) -> bool {
        !matches!(
            self,
            IdentityId::L1 | IdentityId::FibPosNeg | IdentityId::FibPosNegCompl
        )
    }

    pub fn uses_p(self) -> bool {
        matches!(self, IdentityId::SubfamZero | IdentityId::SubfamFact)
    }

    pub fn uses_q(self) -> bool {
        self == IdentityId::SubfamZero
    }

    /// Entries stated only for the generalized Fibonacci family.
    pub fn fibonacci_only(self) -> bool {
        matches!(
            self,
            IdentityId::FibPosNeg | IdentityId::FibPosNegCompl | IdentityId::FibPoly
        )
    }

    /// Smallest admissible `n`.
    pub fn min_n(self) -> u32 {
        match self {
            IdentityId::FibPoly => 0,
            IdentityId::SubfamZero | IdentityId::SubfamFact => 2,
            _ => 1,
        }
    }

    /// Checks the entry's hypotheses and returns the params restricted to
    /// the fields this entry reads.
    pub fn admit(self, family: &Family, params: &Params) -> Result<Params> {
        let fail = |what: &str| Err(Error::Domain(format!("{}: {what} (at {params})", self.tag())));
        if self.fibonacci_only() && !family.is_fibonacci() {
            return fail("family must be the generalized Fibonacci family (lucas:-1)");
        }
        if params.n < self.min_n() {
            return fail(&format!("requires n >= {}", self.min_n()));
        }
        let n = params.n;
        let m = if self.uses_m() {
            match params.m {
                Some(m) => Some(m),
                None => return fail("parameter m is required"),
            }
        } else {
            None
        };
        match (self, m) {
            (IdentityId::L2Scale | IdentityId::ScaleId, Some(0)) => return fail("requires m != 0"),
            (IdentityId::ExplPos | IdentityId::ExplNeg, Some(m)) if m < i64::from(n) => {
                return fail("requires m >= n >= 1")
            }
            _ => {}
        }
        let p = if self.uses_p() {
            let Some(p) = params.p else { return fail("parameter p is required") };
            if p < 1 {
                return fail("requires p >= 1");
            }
            if n < p + 1 {
                return fail("requires n >= p + 1");
            }
            Some(p)
        } else {
            None
        };
        let q = if self.uses_q() {
            let Some(q) = params.q else { return fail("parameter q is required") };
            if Some(q) >= p {
                return fail("requires 0 <= q < p");
            }
            Some(q)
        } else {
            None
        };
        Ok(Params { n, m, p, q })
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

/// A parameter point. Entries ignore the fields they do not use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
}

impl Params {
    pub fn n(n: u32) -> Self {
        Params { n, ..Params::default() }
    }

    pub fn nm(n: u32, m: i64) -> Self {
        Params { n, m: Some(m), ..Params::default() }
    }

    pub fn with_p(mut self, p: u32) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_q(mut self, q: u32) -> Self {
        self.q = Some(q);
        self
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        if let Some(m) = self.m {
            write!(f, " m={m}")?;
        }
        if let Some(p) = self.p {
            write!(f, " p={p}")?;
        }
        if let Some(q) = self.q {
            write!(f, " q={q}")?;
        }
        Ok(())
    }
}

/// Result of evaluating one entry at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: IdentityId,
    pub family: Family,
    pub params: Params,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub residual: Scalar,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(identity: IdentityId, family: &Family, params: Params, lhs: Scalar, rhs: Scalar) -> Self {
        let residual = &lhs - &rhs;
        let pass = residual.is_zero();
        IdentityCheck {
            identity,
            family: family.clone(),
            params,
            lhs,
            rhs,
            residual,
            pass,
        }
    }
}

/// Anything that can supply `X(n, m)` and the root sum for one family.
///
/// [`Family`] computes on demand; sweeps use a precomputed table with the
/// same values.
pub trait MemberSource: Sync {
    fn family(&self) -> &Family;
    fn x(&self, n: u32, m: i64) -> Scalar;
    fn script_x(&self, n: u32) -> Scalar {
        self.family().script_x(n)
    }
}

impl MemberSource for Family {
    fn family(&self) -> &Family {
        self
    }

    fn x(&self, n: u32, m: i64) -> Scalar {
        Family::x(self, n, m)
    }
}

/// Evaluates one catalog entry at one point.
pub fn eval_identity(id: IdentityId, family: &Family, params: Params) -> Result<IdentityCheck> {
    eval_with(id, family, params)
}

pub(crate) fn eval_with<S: MemberSource + ?Sized>(
    id: IdentityId,
    src: &S,
    params: Params,
) -> Result<IdentityCheck> {
    let params = id.admit(src.family(), &params)?;
    let n = params.n;
    let m = params.m.unwrap_or(0);
    let (lhs, rhs) = match id {
        IdentityId::L1 => (src.script_x(n), root_sum_from_shift(src, n, 0)),
        IdentityId::L2Shift => (src.script_x(n), root_sum_from_shift(src, n, m)),
        IdentityId::L2Scale => {
            let s = weighted_scaled_sum(src, n, m);
            let denom = factorial(n) * Scalar::int(m).pow(n - 1);
            let half = Scalar::ratio(i64::from(n) * i64::from(n + 1) * m, 2).unwrap();
            let rhs = sign(n.into()) * s.checked_div(&denom).expect("m != 0") - half;
            (src.script_x(n), rhs)
        }
        IdentityId::RecM => (src.x(n, m + 1), rec_m_rhs(src, n, m)),
        IdentityId::ScaleId => {
            let lhs = weighted_scaled_sum(src, n, m)
                .checked_div(&Scalar::int(m).pow(n - 1))
                .expect("m != 0");
            let corr = sign(i64::from(n) - 1)
                * Scalar::int(1 - m)
                * Scalar::from(n)
                * factorial(n + 1);
            let rhs = weighted_scaled_sum(src, n, 1) + corr.checked_div(&Scalar::int(2)).unwrap();
            (lhs, rhs)
        }
        IdentityId::ExplPos => {
            let mm = u32::try_from(m).map_err(|_| Error::Domain(format!("m={m} out of range")))?;
            let rhs = explicit_sum(src, n, mm, 1) + falling_factorial(mm, n)?;
            (src.x(n, m), rhs)
        }
        IdentityId::ExplNeg => {
            let mm = u32::try_from(m).map_err(|_| Error::Domain(format!("m={m} out of range")))?;
            let rhs = explicit_sum(src, n, mm, -1) + sign(n.into()) * falling_factorial(mm, n)?;
            (src.x(n, -m), rhs)
        }
        IdentityId::SubfamZero => {
            let q = params.q.unwrap();
            let lhs = subfamily_sum(src, n, params.p.unwrap(), q, m);
            (lhs, Scalar::zero())
        }
        IdentityId::SubfamFact => {
            let p = params.p.unwrap();
            let lhs = subfamily_sum(src, n, p, p, m);
            (lhs, sign(n.into()) * factorial(n))
        }
        IdentityId::FibPosNeg => {
            let lhs = (1..=n)
                .map(|l| {
                    let l64 = i64::from(l);
                    sign(l64) * binomial(n, l64) * Scalar::from(l) * (src.x(n, -l64) - src.x(n, l64))
                })
                .sum();
            let rhs = if n % 2 == 0 {
                Scalar::zero()
            } else {
                Scalar::from(n) * factorial(n + 1)
            };
            (lhs, rhs)
        }
        IdentityId::FibPosNegCompl => {
            let lhs = (1..=n)
                .map(|l| {
                    let l64 = i64::from(l);
                    sign(l64)
                        * binomial(n, l64)
                        * Scalar::from(l)
                        * (src.x(n, -l64) + sign(n.into()) * src.x(n, l64))
                })
                .sum();
            (lhs, Scalar::from(n) * factorial(n + 1))
        }
        IdentityId::FibPoly => (fibonacci_polynomial(n, m), src.x(n, m)),
    };
    Ok(IdentityCheck::new(id, src.family(), params, lhs, rhs))
}

/// Checks the recursion in `m` in its rearranged form
/// `X(n, m+1) = sum_{l=0}^{n-1} (-1)^l C(n, l+1) X(n, m-l) + n!`.
///
/// The right-hand side is computed independently of the `REC_M` entry and
/// cross-checked against it.
pub fn eval_m_recursion(family: &Family, n: u32, m: i64) -> Result<IdentityCheck> {
    let params = IdentityId::RecM.admit(family, &Params::nm(n, m))?;
    let rhs: Scalar = (0..n)
        .map(|l| {
            let l = i64::from(l);
            sign(l) * binomial(n, l + 1) * family.x(n, m - l)
        })
        .sum::<Scalar>()
        + factorial(n);
    debug_assert_eq!(rhs, rec_m_rhs(family, n, m), "rearranged recursion disagrees with REC_M");
    Ok(IdentityCheck::new(IdentityId::RecM, family, params, family.x(n, m + 1), rhs))
}

/// Extends `base = [X(n, m0), ..., X(n, m0+n-1)]` with the recursion in `m`
/// until `len` values are known. Only the base values come from the family.
pub fn unroll_m_recursion(n: u32, base: &[Scalar], len: usize) -> Vec<Scalar> {
    assert!(n >= 1 && base.len() == n as usize, "need exactly n base values");
    let nf = factorial(n);
    let mut out = base.to_vec();
    while out.len() < len {
        let k = out.len() - 1;
        let next: Scalar = (0..n as usize)
            .map(|l| sign(l as i64) * binomial(n, l as i64 + 1) * &out[k - l])
            .sum::<Scalar>()
            + &nf;
        out.push(next);
    }
    out
}

/// `(-1)^n / n! sum_{l=1}^{n} (-1)^l C(n,l) l X(n, l + m) - n(n+1)/2 - n m`.
fn root_sum_from_shift<S: MemberSource + ?Sized>(src: &S, n: u32, m: i64) -> Scalar {
    let s: Scalar = (1..=n)
        .map(|l| {
            let l = i64::from(l);
            sign(l) * binomial(n, l) * Scalar::int(l) * src.x(n, l + m)
        })
        .sum();
    let n64 = i64::from(n);
    let tail = Scalar::ratio(n64 * (n64 + 1), 2).unwrap() + Scalar::int(n64 * m);
    sign(n64) * s.checked_div(&factorial(n)).unwrap() - tail
}

/// `sum_{l=1}^{n} (-1)^l C(n,l) l X(n, l m)`.
fn weighted_scaled_sum<S: MemberSource + ?Sized>(src: &S, n: u32, m: i64) -> Scalar {
    (1..=n)
        .map(|l| {
            let l = i64::from(l);
            sign(l) * binomial(n, l) * Scalar::int(l) * src.x(n, l * m)
        })
        .sum()
}

/// `(-1)^n sum_{l=1}^{n} (-1)^l C(n, l-1) X(n, l+m-n) + n!`.
fn rec_m_rhs<S: MemberSource + ?Sized>(src: &S, n: u32, m: i64) -> Scalar {
    let n64 = i64::from(n);
    let s: Scalar = (1..=n64)
        .map(|l| sign(l) * binomial(n, l - 1) * src.x(n, l + m - n64))
        .sum();
    sign(n64) * s + factorial(n)
}

/// `sum_{l=0}^{n-1} (-1)^{n+l} (n-l)/(l-m) C(m,n) C(n,l) X(n, dir * l)`.
fn explicit_sum<S: MemberSource + ?Sized>(src: &S, n: u32, m: u32, dir: i64) -> Scalar {
    let cmn = binomial(m, n.into());
    (0..n)
        .map(|l| {
            let coeff = Scalar::ratio(i64::from(n - l), i64::from(l) - i64::from(m))
                .expect("l < n <= m");
            sign(i64::from(n + l)) * coeff * &cmn * binomial(n, l.into()) * src.x(n, dir * i64::from(l))
        })
        .sum()
}

/// `sum_{l=0}^{n} (-1)^l C(n,l) l^w X(n-p, m-n+l)`, with `0^0 = 1`.
fn subfamily_sum<S: MemberSource + ?Sized>(src: &S, n: u32, p: u32, w: u32, m: i64) -> Scalar {
    let n64 = i64::from(n);
    (0..=n64)
        .map(|l| sign(l) * binomial(n, l) * Scalar::int(l).pow(w) * src.x(n - p, m - n64 + l))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Family {
        Family::fibonacci()
    }

    fn check(id: IdentityId, f: &Family, p: Params) -> IdentityCheck {
        eval_identity(id, f, p).unwrap()
    }

    #[test]
    fn l1_on_fibonacci_n3() {
        let c = check(IdentityId::L1, &fib(), Params::n(3));
        assert_eq!(c.lhs, 0);
        assert_eq!(c.rhs, 0);
        assert!(c.pass);
        assert_eq!(c.params, Params::n(3));
    }

    #[test]
    fn rec_m_on_fibonacci() {
        let c = check(IdentityId::RecM, &fib(), Params::nm(2, 2));
        assert_eq!(c.lhs, 10);
        assert_eq!(c.rhs, 10);
        assert!(c.pass);
    }

    #[test]
    fn expl_pos_on_fibonacci() {
        let c = check(IdentityId::ExplPos, &fib(), Params::nm(2, 3));
        assert_eq!(c.rhs, 10);
        assert!(c.pass);
    }

    #[test]
    fn subfam_zero_on_fibonacci() {
        let c = check(IdentityId::SubfamZero, &fib(), Params::nm(3, 3).with_p(1).with_q(0));
        assert_eq!(c.lhs, 0);
        assert!(c.pass);
    }

    #[test]
    fn scale_id_on_fibonacci() {
        let c = check(IdentityId::ScaleId, &fib(), Params::nm(2, 2));
        assert_eq!(c.lhs, 12);
        assert_eq!(c.rhs, 12);
        assert!(c.pass);
    }

    #[test]
    fn m_recursion_examples() {
        let c = eval_m_recursion(&Family::power(0), 2, 4).unwrap();
        assert_eq!((c.lhs.clone(), c.pass), (Scalar::int(25), true));
        let c = eval_m_recursion(&Family::Pochhammer, 3, 3).unwrap();
        assert_eq!((c.lhs.clone(), c.pass), (Scalar::int(210), true));
        let c = eval_m_recursion(&Family::Pochhammer, 3, 4).unwrap();
        assert_eq!((c.lhs.clone(), c.pass), (Scalar::int(336), true));
        let c = eval_m_recursion(&fib(), 4, 3).unwrap();
        assert_eq!((c.lhs.clone(), c.pass), (Scalar::int(305), true));
    }

    #[test]
    fn m_recursion_matches_rec_m() {
        for f in Family::standard_set() {
            for n in 1..=8 {
                for m in -6..=6 {
                    let a = eval_m_recursion(&f, n, m).unwrap();
                    let b = check(IdentityId::RecM, &f, Params::nm(n, m));
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn rational_family_passes() {
        let half = Family::Power(Scalar::ratio(1, 2).unwrap());
        for n in 1..=10 {
            let c = check(IdentityId::L1, &half, Params::n(n));
            assert!(c.pass);
            assert_eq!(c.lhs, Scalar::ratio(i64::from(n), 2).unwrap());
        }
    }

    #[test]
    fn domain_violations_name_the_constraint() {
        let err = |id, f: &Family, p| eval_identity(id, f, p).unwrap_err().to_string();
        assert!(err(IdentityId::L2Scale, &fib(), Params::nm(3, 0)).contains("m != 0"));
        assert!(err(IdentityId::ScaleId, &fib(), Params::nm(3, 0)).contains("m != 0"));
        assert!(err(IdentityId::ExplPos, &fib(), Params::nm(3, 2)).contains("m >= n"));
        assert!(err(IdentityId::ExplNeg, &fib(), Params::nm(3, -4)).contains("m >= n"));
        assert!(err(IdentityId::SubfamZero, &fib(), Params::nm(3, 0).with_p(3).with_q(0))
            .contains("n >= p + 1"));
        assert!(err(IdentityId::SubfamZero, &fib(), Params::nm(3, 0).with_p(1).with_q(1))
            .contains("q < p"));
        assert!(err(IdentityId::SubfamFact, &fib(), Params::nm(3, 0).with_p(0)).contains("p >= 1"));
        assert!(err(IdentityId::SubfamFact, &fib(), Params::nm(3, 0)).contains("p is required"));
        assert!(err(IdentityId::RecM, &fib(), Params::n(3)).contains("m is required"));
        assert!(err(IdentityId::L1, &fib(), Params::n(0)).contains("n >= 1"));
        assert!(err(IdentityId::FibPosNeg, &Family::Pochhammer, Params::n(3)).contains("Fibonacci"));
    }

    #[test]
    fn unused_params_are_dropped() {
        let c = check(IdentityId::L1, &fib(), Params::nm(4, 7).with_p(2));
        assert_eq!(c.params, Params::n(4));
    }

    #[test]
    fn posneg_parity() {
        for n in 1..=20 {
            let c = check(IdentityId::FibPosNeg, &fib(), Params::n(n));
            assert!(c.pass, "n={n}");
            if n % 2 == 0 {
                assert_eq!(c.lhs, 0);
            } else {
                assert_eq!(c.lhs, Scalar::from(n) * factorial(n + 1));
            }
            assert!(check(IdentityId::FibPosNegCompl, &fib(), Params::n(n)).pass);
        }
    }

    #[test]
    fn perturbed_member_is_detected() {
        struct Skewed(Family);
        impl MemberSource for Skewed {
            fn family(&self) -> &Family {
                &self.0
            }
            fn x(&self, n: u32, m: i64) -> Scalar {
                let v = self.0.x(n, m);
                if n == 3 && m == 2 { v + Scalar::one() } else { v }
            }
        }
        let c = eval_with(IdentityId::RecM, &Skewed(Family::power(0)), Params::nm(3, 1)).unwrap();
        assert!(!c.pass);
        assert_eq!(c.residual, 1);
    }

    #[test]
    fn tags_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.tag().parse::<IdentityId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.tag()));
        }
        assert!("NOPE".parse::<IdentityId>().is_err());
    }
}
