//! Grid sweeps over the identity catalog.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::families::Family;
use crate::identity::{eval_with, IdentityCheck, IdentityId, MemberSource, Params};
use crate::range::IntRange;

/// Endpoint of an `m` range: a literal, or the current `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Value(i64),
    N,
}

impl Endpoint {
    fn resolve(self, n: u32) -> i64 {
        match self {
            Endpoint::Value(v) => v,
            Endpoint::N => i64::from(n),
        }
    }
}

/// An inclusive `m` range whose endpoints may refer to `n`, e.g. `n..20`.
/// Empty for a given `n` when the resolved start exceeds the end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RelRange {
    pub start: Endpoint,
    pub end: Endpoint,
}

impl RelRange {
    pub fn fixed(r: IntRange) -> Self {
        RelRange {
            start: Endpoint::Value(r.start),
            end: Endpoint::Value(r.end),
        }
    }

    pub fn resolve(&self, n: u32) -> Option<IntRange> {
        IntRange::new(self.start.resolve(n), self.end.resolve(n)).ok()
    }

    fn hull(&self, n_max: u32) -> (i64, i64) {
        let lo = self.start.resolve(0).min(self.start.resolve(n_max));
        let hi = self.end.resolve(0).max(self.end.resolve(n_max));
        (lo, hi)
    }
}

impl From<IntRange> for RelRange {
    fn from(r: IntRange) -> Self {
        RelRange::fixed(r)
    }
}

impl fmt::Display for RelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: Endpoint| match e {
            Endpoint::Value(v) => v.to_string(),
            Endpoint::N => "n".to_string(),
        };
        write!(f, "{}..{}", show(self.start), show(self.end))
    }
}

impl FromStr for RelRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("expected a range `a..b`, got {s:?}")))?;
        let endpoint = |t: &str| match t.trim() {
            "n" => Ok(Endpoint::N),
            t => t
                .parse()
                .map(Endpoint::Value)
                .map_err(|_| Error::Parse(format!("bad range endpoint {t:?} in {s:?}"))),
        };
        let r = RelRange {
            start: endpoint(a)?,
            end: endpoint(b)?,
        };
        if let (Endpoint::Value(a), Endpoint::Value(b)) = (r.start, r.end) {
            IntRange::new(a, b)?;
        }
        Ok(r)
    }
}

impl Serialize for RelRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RelRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// What to sweep. `p` and `q` default to every admissible value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub identities: Vec<IdentityId>,
    pub families: Vec<Family>,
    pub n: IntRange,
    pub m: RelRange,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<IntRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<IntRange>,
}

impl SweepSpec {
    pub fn new(identities: Vec<IdentityId>, families: Vec<Family>, n: IntRange, m: impl Into<RelRange>) -> Self {
        SweepSpec {
            identities,
            families,
            n,
            m: m.into(),
            p: None,
            q: None,
        }
    }

    fn n_bounds(&self) -> Result<(u32, u32)> {
        let lo = u32::try_from(self.n.start)
            .map_err(|_| Error::Domain(format!("n range must be non-negative (got {})", self.n)))?;
        let hi = u32::try_from(self.n.end)
            .map_err(|_| Error::Domain(format!("n range too large (got {})", self.n)))?;
        Ok((lo, hi))
    }

    /// Every admissible point, ordered by identity, then family (in the
    /// order given), then parameters.
    pub fn points(&self) -> Result<Vec<(IdentityId, usize, Params)>> {
        let (n_lo, n_hi) = self.n_bounds()?;
        let mut ids = self.identities.clone();
        ids.sort();
        ids.dedup();
        let mut out = Vec::new();
        for &id in &ids {
            for (fi, family) in self.families.iter().enumerate() {
                if id.fibonacci_only() && !family.is_fibonacci() {
                    continue;
                }
                for n in n_lo.max(id.min_n())..=n_hi {
                    for params in self.candidates(id, n) {
                        if let Ok(p) = id.admit(family, &params) {
                            out.push((id, fi, p));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn candidates(&self, id: IdentityId, n: u32) -> Vec<Params> {
        let ms: Vec<Option<i64>> = if id.uses_m() {
            match self.m.resolve(n) {
                Some(r) => r.iter().map(Some).collect(),
                None => return Vec::new(),
            }
        } else {
            vec![None]
        };
        let clip = |lo: i64, hi: i64, r: Option<IntRange>| -> Vec<u32> {
            let (lo, hi) = match r {
                Some(r) => (lo.max(r.start), hi.min(r.end)),
                None => (lo, hi),
            };
            (lo..=hi).map(|v| v as u32).collect()
        };
        let ps: Vec<Option<u32>> = if id.uses_p() {
            clip(1, i64::from(n) - 1, self.p).into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        let mut out = Vec::new();
        for &m in &ms {
            for &p in &ps {
                let qs: Vec<Option<u32>> = match (id.uses_q(), p) {
                    (true, Some(p)) => clip(0, i64::from(p) - 1, self.q).into_iter().map(Some).collect(),
                    _ => vec![None],
                };
                for q in qs {
                    out.push(Params { n, m, p, q });
                }
            }
        }
        out
    }
}

/// Outcome of a sweep. Failures carry their full parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: SweepSpec,
    pub total: usize,
    pub passed: usize,
    pub checks_per_identity: BTreeMap<IdentityId, usize>,
    pub failures: Vec<IdentityCheck>,
    pub wall_time_ms: f64,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Members of one family precomputed over the window a sweep touches.
struct MemberTable<'a> {
    family: &'a Family,
    m_lo: i64,
    m_hi: i64,
    rows: Vec<Vec<Scalar>>,
    script: Vec<Scalar>,
}

const TABLE_CELL_LIMIT: i64 = 4_000_000;

impl<'a> MemberTable<'a> {
    fn build(family: &'a Family, n_max: u32, m: &RelRange) -> Self {
        let (lo, hi) = m.hull(n_max);
        let nm = i64::from(n_max);
        // Shifted arguments reach m - n - 1 .. m + n + 1; scaled ones +-n|m|.
        let (mut m_lo, mut m_hi) = (lo.min(0) - nm - 1, hi.max(0) + nm + 1);
        let reach = lo.abs().max(hi.abs()).saturating_mul(nm);
        if (2 * reach + 1).saturating_mul(nm + 1) <= TABLE_CELL_LIMIT {
            m_lo = m_lo.min(-reach);
            m_hi = m_hi.max(reach);
        }
        if (m_hi - m_lo + 1).saturating_mul(nm + 1) > TABLE_CELL_LIMIT {
            // Too wide to be worth it; compute on demand.
            m_hi = m_lo - 1;
        }
        let rows = (0..=n_max)
            .into_par_iter()
            .map(|n| (m_lo..=m_hi).map(|m| family.x(n, m)).collect())
            .collect();
        let script = (0..=n_max).map(|n| family.script_x(n)).collect();
        MemberTable { family, m_lo, m_hi, rows, script }
    }
}

impl MemberSource for MemberTable<'_> {
    fn family(&self) -> &Family {
        self.family
    }

    fn x(&self, n: u32, m: i64) -> Scalar {
        match self.rows.get(n as usize) {
            Some(row) if (self.m_lo..=self.m_hi).contains(&m) => row[(m - self.m_lo) as usize].clone(),
            _ => self.family.x(n, m),
        }
    }

    fn script_x(&self, n: u32) -> Scalar {
        self.script
            .get(n as usize)
            .cloned()
            .unwrap_or_else(|| self.family.script_x(n))
    }
}

/// Evaluates every admissible grid point.
///
/// `workers` bounds the thread count; `None` uses the global pool. The
/// report content does not depend on it.
pub fn sweep(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepReport> {
    match workers {
        None => run(spec),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?
            .install(|| run(spec)),
    }
}

fn run(spec: &SweepSpec) -> Result<SweepReport> {
    let started = Instant::now();
    let points = spec.points()?;
    let (_, n_max) = spec.n_bounds()?;

    let used: Vec<bool> = (0..spec.families.len())
        .map(|fi| points.iter().any(|&(_, f, _)| f == fi))
        .collect();
    let tables: Vec<Option<MemberTable>> = spec
        .families
        .iter()
        .zip(&used)
        .map(|(f, &u)| u.then(|| MemberTable::build(f, n_max, &spec.m)))
        .collect();

    let results: Vec<Result<Option<IdentityCheck>>> = points
        .par_iter()
        .map(|&(id, fi, params)| {
            let table = tables[fi].as_ref().expect("table built for every used family");
            let check = eval_with(id, table, params)?;
            Ok((!check.pass).then_some(check))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(c) = r? {
            failures.push(c);
        }
    }

    let mut checks_per_identity = BTreeMap::new();
    for &(id, _, _) in &points {
        *checks_per_identity.entry(id).or_insert(0) += 1;
    }
    let total = points.len();
    Ok(SweepReport {
        grid: spec.clone(),
        total,
        passed: total - failures.len(),
        checks_per_identity,
        failures,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::eval_identity;

    fn r(a: i64, b: i64) -> IntRange {
        IntRange::new(a, b).unwrap()
    }

    #[test]
    fn rel_range_parsing() {
        let rr: RelRange = "n..20".parse().unwrap();
        assert_eq!(rr.resolve(3), Some(r(3, 20)));
        assert_eq!(rr.resolve(21), None);
        assert_eq!(rr.to_string(), "n..20");
        assert!("5..1".parse::<RelRange>().is_err());
        assert!("x..1".parse::<RelRange>().is_err());
    }

    #[test]
    fn empty_admissible_set() {
        let spec = SweepSpec::new(vec![IdentityId::ExplPos], vec![Family::power(2)], r(5, 10), r(-3, 4));
        let rep = sweep(&spec, None).unwrap();
        assert_eq!(rep.total, 0);
        assert!(rep.all_passed());
    }

    #[test]
    fn counts_follow_domain_filtering() {
        let spec = SweepSpec::new(
            vec![IdentityId::L1, IdentityId::L2Scale, IdentityId::SubfamZero, IdentityId::SubfamFact],
            vec![Family::fibonacci()],
            r(1, 6),
            r(-2, 2),
        );
        let rep = sweep(&spec, Some(2)).unwrap();
        let c = &rep.checks_per_identity;
        assert_eq!(c[&IdentityId::L1], 6);
        assert_eq!(c[&IdentityId::L2Scale], 6 * 4);
        // sum over n of p(p+1)/2 summed over p < n, times |m|.
        let zero: usize = (1..=6).map(|n: usize| (1..n).sum::<usize>()).sum();
        assert_eq!(c[&IdentityId::SubfamZero], zero * 5);
        assert_eq!(c[&IdentityId::SubfamFact], (0..6).sum::<usize>() * 5);
        assert_eq!(rep.total, c.values().sum::<usize>());
        assert!(rep.all_passed());
    }

    #[test]
    fn fibonacci_entries_skip_other_families() {
        let spec = SweepSpec::new(vec![IdentityId::FibPoly], vec![Family::Pochhammer, Family::fibonacci()], r(1, 3), r(0, 1));
        let rep = sweep(&spec, None).unwrap();
        assert_eq!(rep.total, 6);
    }

    #[test]
    fn rational_family_sweep() {
        let half = Family::Power(Scalar::ratio(1, 2).unwrap());
        let spec = SweepSpec::new(vec![IdentityId::L1], vec![half], r(1, 10), r(0, 0));
        let rep = sweep(&spec, None).unwrap();
        assert_eq!(rep.total, 10);
        assert!(rep.all_passed());
    }

    #[test]
    fn table_values_match_direct_evaluation() {
        let spec = SweepSpec::new(IdentityId::ALL.to_vec(), Family::standard_set(), r(1, 6), r(-4, 4));
        for (id, fi, params) in spec.points().unwrap().into_iter().step_by(7) {
            let f = &spec.families[fi];
            let table = MemberTable::build(f, 6, &spec.m);
            assert_eq!(eval_with(id, &table, params).unwrap(), eval_identity(id, f, params).unwrap());
        }
    }

    #[test]
    fn worker_count_does_not_change_content() {
        let spec = SweepSpec::new(IdentityId::ALL.to_vec(), Family::standard_set(), r(1, 8), r(-5, 5));
        let mut a = sweep(&spec, Some(1)).unwrap();
        let mut b = sweep(&spec, Some(4)).unwrap();
        a.wall_time_ms = 0.0;
        b.wall_time_ms = 0.0;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
