//! Matching generated rows and columns against the OEIS by leading terms.
//!
//! Lookups go cache, then the bundled fixtures, then the network. Offline
//! clients stop after the fixtures.

mod cache;
mod parse;
mod transport;

use std::fmt;
use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Family;
use crate::range::IntRange;

pub use cache::{default_dir as default_cache_dir, Cache, CACHE_ENV};
pub use parse::{bfile as parse_bfile, search_ids as parse_search_reply};
pub use transport::{HttpTransport, RetryPolicy, Transport};

pub const MIN_TERMS: usize = 8;
pub const DEFAULT_BASE_URL: &str = "https://oeis.org";

/// Big integers as decimal strings.
pub(crate) mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(|_| D::Error::custom(format!("bad integer {t:?}"))))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Network,
    Cache,
    Fixture,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Network => "network",
            Source::Cache => "cache",
            Source::Fixture => "fixture",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OeisMatch {
    #[serde(with = "decimal_vec")]
    pub terms: Vec<BigInt>,
    pub ids: Vec<String>,
    pub source: Source,
    /// Constant queries match too much to mean anything.
    pub ambiguous: bool,
}

/// A locally stored catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub name: String,
    pub offset: i64,
    #[serde(with = "decimal_vec")]
    pub terms: Vec<BigInt>,
}

impl CatalogEntry {
    pub fn contains_run(&self, run: &[BigInt]) -> bool {
        !run.is_empty() && self.terms.windows(run.len()).any(|w| w == run)
    }
}

/// The bundled fixtures, one JSON entry per line.
pub fn fixtures() -> &'static [CatalogEntry] {
    static FIXTURES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    FIXTURES.get_or_init(|| {
        include_str!("../../fixtures/oeis.jsonl")
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).expect("bundled fixture parses"))
            .collect()
    })
}

fn is_valid_id(id: &str) -> bool {
    id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit())
}

#[derive(Debug, Clone)]
pub struct ClientConfig {
    pub offline: bool,
    /// Falls back to [`default_cache_dir`].
    pub cache_dir: Option<PathBuf>,
    pub base_url: String,
    pub retry: RetryPolicy,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig {
            offline: false,
            cache_dir: None,
            base_url: DEFAULT_BASE_URL.to_owned(),
            retry: RetryPolicy::default(),
        }
    }
}

impl ClientConfig {
    pub fn offline() -> Self {
        ClientConfig {
            offline: true,
            ..ClientConfig::default()
        }
    }
}

pub struct OeisClient {
    config: ClientConfig,
    cache: Cache,
    transport: Box<dyn Transport>,
}

impl OeisClient {
    pub fn new(config: ClientConfig) -> Self {
        OeisClient::with_transport(config, Box::new(HttpTransport::default()))
    }

    pub fn with_transport(config: ClientConfig, transport: Box<dyn Transport>) -> Self {
        let cache = Cache::new(config.cache_dir.clone().unwrap_or_else(default_cache_dir));
        OeisClient {
            config,
            cache,
            transport,
        }
    }

    pub fn is_offline(&self) -> bool {
        self.config.offline
    }

    pub fn cache(&self) -> &Cache {
        &self.cache
    }

    pub fn search_by_terms(&self, terms: &[BigInt]) -> Result<OeisMatch> {
        if terms.len() < MIN_TERMS {
            return Err(Error::TooFewTerms {
                min: MIN_TERMS,
                got: terms.len(),
            });
        }
        let ambiguous = terms.iter().all(|t| *t == terms[0]);
        let found = |ids, source| OeisMatch {
            terms: terms.to_vec(),
            ids,
            source,
            ambiguous,
        };

        if let Some(rec) = self.cache.get_search(terms)? {
            return Ok(found(rec.ids, Source::Cache));
        }
        let local: Vec<String> = fixtures()
            .iter()
            .filter(|e| e.contains_run(terms))
            .map(|e| e.id.clone())
            .collect();
        if !local.is_empty() || self.config.offline {
            return Ok(found(local, Source::Fixture));
        }

        let query = terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let url = format!("{}/search?fmt=json&q={query}", self.config.base_url);
        let raw = transport::fetch(self.transport.as_ref(), &self.config.retry, &url)?;
        let ids = parse::search_ids(&raw)?;
        self.cache.put_search(&cache::SearchRecord {
            terms: terms.to_vec(),
            ids: ids.clone(),
        })?;
        Ok(found(ids, Source::Network))
    }

    /// `(index, term)` pairs for one entry. Offline, only cached b-files and
    /// the bundled fixtures are available.
    pub fn bfile(&self, id: &str) -> Result<Vec<(i64, BigInt)>> {
        if !is_valid_id(id) {
            return Err(Error::Parse(format!("not an OEIS id: {id:?}")));
        }
        if let Some(raw) = self.cache.get_bfile(id)? {
            return parse::bfile(&raw);
        }
        if self.config.offline {
            let entry = fixtures().iter().find(|e| e.id == id).ok_or(Error::Offline)?;
            return Ok((entry.offset..).zip(entry.terms.iter().cloned()).collect());
        }
        let url = format!("{}/{id}/b{}.txt", self.config.base_url, &id[1..]);
        let raw = transport::fetch(self.transport.as_ref(), &self.config.retry, &url)?;
        let parsed = parse::bfile(&raw)?;
        self.cache.put_bfile(id, &raw)?;
        Ok(parsed)
    }
}

/// Which slice of the `X(n, m)` grid to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Fixed `n`, varying `m`.
    Row(u32),
    /// Fixed `m`, varying `n`.
    Column(i64),
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row(n) => write!(f, "row n={n}"),
            Axis::Column(m) => write!(f, "column m={m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub family: Family,
    pub axis: Axis,
    pub range: IntRange,
    #[serde(rename = "match")]
    pub matched: OeisMatch,
    pub verdict: bool,
}

/// The integer terms of one row or column.
pub fn slice_terms(family: &Family, axis: Axis, range: IntRange) -> Result<Vec<BigInt>> {
    let values: Vec<_> = match axis {
        Axis::Row(n) => range.iter().map(|m| family.x(n, m)).collect(),
        Axis::Column(m) => {
            if range.start < 0 {
                return Err(Error::Domain(format!("member index n must be >= 0 (got {range})")));
            }
            range.iter().map(|n| family.x(n as u32, m)).collect()
        }
    };
    values
        .into_iter()
        .map(|v| {
            v.as_integer()
                .cloned()
                .ok_or_else(|| Error::Domain(format!("{family} {axis} has non-integer term {v}")))
        })
        .collect()
}

pub fn cross_check(client: &OeisClient, family: &Family, axis: Axis, range: IntRange) -> Result<CrossCheck> {
    let terms = slice_terms(family, axis, range)?;
    let matched = client.search_by_terms(&terms)?;
    Ok(CrossCheck {
        family: family.clone(),
        axis,
        range,
        verdict: !matched.ids.is_empty(),
        matched,
    })
}
