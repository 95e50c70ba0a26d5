//! Per-segment word-order synchronization scores.
//!
//! The aligned source words are listed in target order, re-ranked densely to a
//! permutation of `1..=k`, and compared against the identity with Spearman's ρ.
//! Content-word coverage measures how many source content words found a partner,
//! and the combined score is their product.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::align::{
    apply_filters, dedupe_for_ranking, drop_below, drop_function_links, greedy_align, intersect, AlignmentLink,
    AlignmentSet, FilterConfig,
};
use crate::error::{Error, Result};
use crate::ingest::{Segment, SegmentEmbeddings};

/// 1-based source ranks in target order.
///
/// `links` must be one-to-one and sorted by target index (the output of
/// [`dedupe_for_ranking`]). Surviving source indices are re-numbered `1..=k` by
/// position, so gaps left by filtering do not matter.
pub fn source_index_sequence(links: &[AlignmentLink]) -> Vec<usize> {
    let mut sources: Vec<usize> = links.iter().map(|l| l.source_index).collect();
    sources.sort_unstable();
    sources.dedup();
    let rank: HashMap<usize, usize> = sources.iter().enumerate().map(|(i, &s)| (s, i + 1)).collect();
    links.iter().map(|l| rank[&l.source_index]).collect()
}

fn check_permutation(seq: &[usize]) -> Result<()> {
    let k = seq.len();
    let mut seen = vec![false; k];
    for &v in seq {
        if v == 0 || v > k || std::mem::replace(&mut seen[v - 1], true) {
            return Err(Error::NotPermutation { len: k });
        }
    }
    Ok(())
}

/// Spearman's ρ of a permutation of `1..=k` against the identity:
/// `1 - 6·Σd² / (k(k²-1))`. `None` for `k < 2`.
pub fn spearman_rho(seq: &[usize]) -> Result<Option<f64>> {
    check_permutation(seq)?;
    let k = seq.len() as i128;
    if k < 2 {
        return Ok(None);
    }
    let sum_sq: i128 = seq
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = v as i128 - (i as i128 + 1);
            d * d
        })
        .sum();
    let denom = k * (k * k - 1);
    // a single division of two exact integers keeps the result correctly rounded
    Ok(Some((denom - 6 * sum_sq) as f64 / denom as f64))
}

/// Kendall's τ of a permutation of `1..=k` against the identity. `None` for `k < 2`.
pub fn kendall_tau(seq: &[usize]) -> Result<Option<f64>> {
    check_permutation(seq)?;
    let k = seq.len();
    if k < 2 {
        return Ok(None);
    }
    let mut balance: i64 = 0;
    for i in 0..k {
        for j in i + 1..k {
            balance += if seq[i] < seq[j] { 1 } else { -1 };
        }
    }
    let pairs = (k * (k - 1) / 2) as f64;
    Ok(Some(balance as f64 / pairs))
}

/// Fraction of source content words that carry at least one link in `links`.
///
/// A source word is a content word unless it is flagged as a function word or its POS
/// tag is in `function_pos` (pass an empty set to rely on the flag alone). `None` when
/// the source side has no content words.
pub fn content_coverage(segment: &Segment, links: &AlignmentSet, function_pos: &BTreeSet<String>) -> Option<f64> {
    let linked = links.source_words();
    let (covered, total) = segment
        .source
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_function_under(function_pos))
        .fold((0usize, 0usize), |(n, total), (i, _)| {
            (n + usize::from(linked.contains(&i)), total + 1)
        });
    (total > 0).then(|| covered as f64 / total as f64)
}

/// Synchronization times coverage; undefined if either factor is.
pub fn combined_score(rho: Option<f64>, coverage: Option<f64>) -> Option<f64> {
    Some(rho? * coverage?)
}

/// Which alignment feeds the rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Greedy alignment with function-word and threshold filters.
    #[default]
    Synchro,
    /// Greedy alignment intersected with an external aligner, function words removed.
    Combined,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Synchro => "synchro",
            Mode::Combined => "combined",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "synchro" => Ok(Mode::Synchro),
            "combined" => Ok(Mode::Combined),
            other => Err(Error::Config(format!(
                "unknown mode {other:?} (expected synchro or combined)"
            ))),
        }
    }
}

/// How `min_n_align` is compared with a segment's aligned-word count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountRule {
    /// `n_align >= min`
    #[default]
    AtLeast,
    /// `n_align > min`
    MoreThan,
}

impl CountRule {
    pub fn admits(self, n_align: usize, min: usize) -> bool {
        match self {
            CountRule::AtLeast => n_align >= min,
            CountRule::MoreThan => n_align > min,
        }
    }
}

impl fmt::Display for CountRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountRule::AtLeast => "at-least",
            CountRule::MoreThan => "more-than",
        })
    }
}

impl FromStr for CountRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "at-least" => Ok(CountRule::AtLeast),
            "more-than" => Ok(CountRule::MoreThan),
            other => Err(Error::Config(format!(
                "unknown count rule {other:?} (expected at-least or more-than)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub filter: FilterConfig,
    pub mode: Mode,
    pub min_n_align: usize,
    pub count_rule: CountRule,
    /// Also apply the similarity threshold in combined mode.
    pub theta_in_combined: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            filter: FilterConfig::default(),
            mode: Mode::Synchro,
            min_n_align: 2,
            count_rule: CountRule::AtLeast,
            theta_in_combined: false,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        self.filter.validate()
    }

    /// True when a segment with `n_align` aligned words passes the minimum-count rule.
    pub fn admits(&self, n_align: usize) -> bool {
        self.count_rule.admits(n_align, self.min_n_align)
    }
}

/// Scores for one segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncResult {
    pub segment_id: String,
    /// Spearman ρ; `None` when fewer than two source words survive.
    pub rho: Option<f64>,
    /// Content-word coverage; 0 when the source has no content words.
    pub coverage: f64,
    pub combined: Option<f64>,
    /// Distinct source words in the one-to-one alignment used for ranking.
    pub n_align: usize,
    pub source_length: usize,
    /// Below the minimum aligned-word count or without a defined ρ.
    pub excluded: bool,
    pub sequence: Vec<usize>,
    pub used_links: Vec<AlignmentLink>,
}

/// The reliable alignment for one segment under `cfg.mode`, before one-to-one reduction.
pub fn filtered_alignment(
    segment: &Segment,
    embeddings: Option<&SegmentEmbeddings>,
    external: Option<&AlignmentSet>,
    cfg: &MetricConfig,
) -> Result<AlignmentSet> {
    let embeddings = embeddings.ok_or_else(|| Error::inconsistent(&segment.id, "missing embeddings"))?;
    let greedy = greedy_align(&embeddings.source, &embeddings.target, segment)?;
    match cfg.mode {
        Mode::Synchro => Ok(apply_filters(&greedy, segment, &cfg.filter)),
        Mode::Combined => {
            let external = external.ok_or_else(|| Error::inconsistent(&segment.id, "missing external alignment"))?;
            external.validate(segment)?;
            let mut kept = intersect(&greedy, external)?;
            if cfg.filter.drop_function_words {
                kept = drop_function_links(&kept, segment, &cfg.filter.function_pos);
            }
            if cfg.theta_in_combined {
                kept = drop_below(&kept, cfg.filter.theta);
            }
            Ok(kept)
        }
    }
}

/// Runs the full pipeline for one segment.
pub fn score_segment(
    segment: &Segment,
    embeddings: Option<&SegmentEmbeddings>,
    external: Option<&AlignmentSet>,
    cfg: &MetricConfig,
) -> Result<SyncResult> {
    let kept = filtered_alignment(segment, embeddings, external, cfg)?;
    Ok(score_alignment(segment, &kept, cfg))
}

/// Ranks and scores an already filtered alignment.
pub fn score_alignment(segment: &Segment, kept: &AlignmentSet, cfg: &MetricConfig) -> SyncResult {
    let used_links = dedupe_for_ranking(kept);
    let sequence = source_index_sequence(&used_links);
    let rho = spearman_rho(&sequence).expect("dense re-ranking yields a permutation");
    let function_pos = if cfg.filter.drop_function_words {
        cfg.filter.function_pos.clone()
    } else {
        BTreeSet::new()
    };
    let coverage = content_coverage(segment, kept, &function_pos).unwrap_or(0.0);
    let n_align = used_links.len();
    SyncResult {
        segment_id: segment.id.clone(),
        rho,
        coverage,
        combined: combined_score(rho, Some(coverage)),
        n_align,
        source_length: segment.source.len(),
        excluded: rho.is_none() || !cfg.admits(n_align),
        sequence,
        used_links,
    }
}
