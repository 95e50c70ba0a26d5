use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Segment;

use super::{AlignmentLink, AlignmentSet, Provenance};

/// UPOS tags treated as function words unless configured otherwise.
pub const DEFAULT_FUNCTION_POS: [&str; 9] = ["ADP", "AUX", "CCONJ", "SCONJ", "DET", "PART", "PRON", "PUNCT", "SYM"];

/// Reliability filters applied to greedy alignments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Links with similarity strictly below this value are dropped.
    pub theta: f64,
    pub function_pos: BTreeSet<String>,
    /// Drop links whose source word is a function word.
    pub drop_function_words: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            theta: 0.71,
            function_pos: DEFAULT_FUNCTION_POS.iter().map(|s| s.to_string()).collect(),
            drop_function_words: true,
        }
    }
}

impl FilterConfig {
    pub fn new(theta: f64, function_pos: BTreeSet<String>, drop_function_words: bool) -> Result<Self> {
        let cfg = Self {
            theta,
            function_pos,
            drop_function_words,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() || !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Config(format!("theta must lie in [0, 1], got {}", self.theta)));
        }
        if self.drop_function_words && self.function_pos.is_empty() {
            return Err(Error::Config(
                "function POS set is empty while function-word filtering is on".into(),
            ));
        }
        Ok(())
    }
}

/// Links present in both sets, with the lower of the two similarities.
pub fn intersect(a: &AlignmentSet, b: &AlignmentSet) -> Result<AlignmentSet> {
    if a.segment_id != b.segment_id {
        return Err(Error::SegmentMismatch {
            left: a.segment_id.clone(),
            right: b.segment_id.clone(),
        });
    }
    let links = a.links().filter_map(|link| {
        b.similarity(link.pair())
            .map(|other| AlignmentLink::new(link.source_index, link.target_index, link.similarity.min(other)))
    });
    Ok(AlignmentSet::from_links(&a.segment_id, Provenance::Intersected, links))
}

/// Removes links whose source word is a function word (flagged, or tagged with a POS in
/// `function_pos`). Target words are not inspected.
pub fn drop_function_links(a: &AlignmentSet, segment: &Segment, function_pos: &BTreeSet<String>) -> AlignmentSet {
    let mut out = a.clone();
    out.retain(|link| {
        !segment
            .source
            .get(link.source_index)
            .is_some_and(|w| w.is_function_under(function_pos))
    });
    out.provenance = Provenance::Filtered;
    out
}

/// Removes links with similarity below `theta`; links exactly at `theta` stay.
pub fn drop_below(a: &AlignmentSet, theta: f64) -> AlignmentSet {
    let mut out = a.clone();
    out.retain(|link| link.similarity >= theta);
    out.provenance = Provenance::Filtered;
    out
}

/// Function-word filter (when enabled) followed by the similarity threshold.
pub fn apply_filters(a: &AlignmentSet, segment: &Segment, cfg: &FilterConfig) -> AlignmentSet {
    let kept = if cfg.drop_function_words {
        drop_function_links(a, segment, &cfg.function_pos)
    } else {
        a.clone()
    };
    drop_below(&kept, cfg.theta)
}

/// Reduces a many-to-many alignment to a one-to-one list ordered by target index.
///
/// First each source word keeps only its most similar link (ties: lowest target index),
/// then each target word keeps only its most similar remaining link (ties: lowest source
/// index).
pub fn dedupe_for_ranking(a: &AlignmentSet) -> Vec<AlignmentLink> {
    // links() iterates in (source, target) order, so the first maximum seen has the lowest index
    let mut by_source: BTreeMap<usize, AlignmentLink> = BTreeMap::new();
    for link in a.links() {
        by_source
            .entry(link.source_index)
            .and_modify(|best| {
                if link.similarity > best.similarity {
                    *best = link;
                }
            })
            .or_insert(link);
    }
    let mut by_target: BTreeMap<usize, AlignmentLink> = BTreeMap::new();
    for link in by_source.into_values() {
        by_target
            .entry(link.target_index)
            .and_modify(|best| {
                if link.similarity > best.similarity {
                    *best = link;
                }
            })
            .or_insert(link);
    }
    by_target.into_values().collect()
}
