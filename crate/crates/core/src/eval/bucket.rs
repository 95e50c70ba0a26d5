use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::SyncResult;

/// Minimum aligned-word counts reported by default.
pub const DEFAULT_NALIGN_THRESHOLDS: [usize; 5] = [2, 3, 4, 5, 6];

/// Aggregate scores over one subset of segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketReport {
    pub bucket_key: String,
    /// Mean ρ over included segments.
    pub mean_rho: Option<f64>,
    pub mean_coverage: Option<f64>,
    pub mean_combined: Option<f64>,
    /// Included (non-excluded) segments in the bucket.
    pub segment_count: usize,
    /// Segments that fall in the bucket but are excluded from the means.
    pub excluded_count: usize,
}

/// Mean that does not depend on input order: values are summed in sorted order.
fn mean(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    Some(values.iter().sum::<f64>() / values.len() as f64)
}

fn report<'a>(key: String, members: impl Iterator<Item = &'a SyncResult>) -> BucketReport {
    let (included, excluded): (Vec<&SyncResult>, Vec<&SyncResult>) = members.partition(|r| !r.excluded);
    BucketReport {
        bucket_key: key,
        mean_rho: mean(included.iter().filter_map(|r| r.rho).collect()),
        mean_coverage: mean(included.iter().map(|r| r.coverage).collect()),
        mean_combined: mean(included.iter().filter_map(|r| r.combined).collect()),
        segment_count: included.len(),
        excluded_count: excluded.len(),
    }
}

/// One bucket per threshold `t`, holding results with `n_align >= t`.
pub fn bucket_by_nalign(results: &[SyncResult], thresholds: &[usize]) -> Vec<BucketReport> {
    thresholds
        .iter()
        .map(|&t| report(format!("n_align>={t}"), results.iter().filter(|r| r.n_align >= t)))
        .collect()
}

/// A subset of segments selected by source length in words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LengthBucket {
    All,
    Below(usize),
    AtLeast(usize),
}

impl LengthBucket {
    /// All, <15, >=15, >=20, >=25, >=30.
    pub fn defaults() -> Vec<LengthBucket> {
        vec![
            LengthBucket::All,
            LengthBucket::Below(15),
            LengthBucket::AtLeast(15),
            LengthBucket::AtLeast(20),
            LengthBucket::AtLeast(25),
            LengthBucket::AtLeast(30),
        ]
    }

    pub fn contains(self, length: usize) -> bool {
        match self {
            LengthBucket::All => true,
            LengthBucket::Below(n) => length < n,
            LengthBucket::AtLeast(n) => length >= n,
        }
    }
}

impl fmt::Display for LengthBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthBucket::All => f.write_str("all"),
            LengthBucket::Below(n) => write!(f, "len<{n}"),
            LengthBucket::AtLeast(n) => write!(f, "len>={n}"),
        }
    }
}

impl FromStr for LengthBucket {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad length bucket {s:?} (expected all, <N or >=N)"));
        let s = s.trim();
        let s = s.strip_prefix("len").unwrap_or(s);
        if s.eq_ignore_ascii_case("all") {
            Ok(LengthBucket::All)
        } else if let Some(n) = s.strip_prefix(">=") {
            n.parse().map(LengthBucket::AtLeast).map_err(|_| bad())
        } else if let Some(n) = s.strip_prefix('<') {
            n.parse().map(LengthBucket::Below).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

/// One report per length bucket, keyed on the source word count.
pub fn bucket_by_length(results: &[SyncResult], buckets: &[LengthBucket]) -> Vec<BucketReport> {
    buckets
        .iter()
        .map(|&b| report(b.to_string(), results.iter().filter(|r| b.contains(r.source_length))))
        .collect()
}
