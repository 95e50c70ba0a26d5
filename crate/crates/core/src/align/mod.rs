//! Cross-lingual word alignment: greedy cosine matching, subword-to-word projection,
//! intersection with an external aligner, reliability filters, and one-to-one reduction
//! for rank computation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{check_pairs, LinkPair, Segment};

mod filter;
mod greedy;
mod project;

pub use filter::{
    apply_filters, dedupe_for_ranking, drop_below, drop_function_links, intersect, FilterConfig, DEFAULT_FUNCTION_POS,
};
pub use greedy::{cosine, greedy_align, greedy_subword_links};
pub use project::{subwords_to_words, SubwordLink};

/// A word-level link with the cosine similarity supporting it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignmentLink {
    pub source_index: usize,
    pub target_index: usize,
    pub similarity: f64,
}

impl AlignmentLink {
    pub fn new(source_index: usize, target_index: usize, similarity: f64) -> Self {
        Self {
            source_index,
            target_index,
            similarity,
        }
    }

    pub fn pair(&self) -> LinkPair {
        (self.source_index, self.target_index)
    }
}

/// Where an alignment set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Greedy,
    External,
    Intersected,
    Filtered,
}

/// Word links for one segment, at most one per (source, target) pair, kept in
/// (source, target) order.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentSet {
    pub segment_id: String,
    pub provenance: Provenance,
    links: BTreeMap<LinkPair, f64>,
}

impl AlignmentSet {
    pub fn new(segment_id: impl Into<String>, provenance: Provenance) -> Self {
        Self {
            segment_id: segment_id.into(),
            provenance,
            links: BTreeMap::new(),
        }
    }

    /// Collects links; a repeated pair keeps its highest similarity.
    pub fn from_links(
        segment_id: impl Into<String>,
        provenance: Provenance,
        links: impl IntoIterator<Item = AlignmentLink>,
    ) -> Self {
        let mut set = Self::new(segment_id, provenance);
        for link in links {
            set.insert(link.source_index, link.target_index, link.similarity);
        }
        set
    }

    /// Adds a link. If the pair is already present the higher similarity is kept.
    pub fn insert(&mut self, source_index: usize, target_index: usize, similarity: f64) {
        self.links
            .entry((source_index, target_index))
            .and_modify(|s| *s = s.max(similarity))
            .or_insert(similarity);
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn contains(&self, pair: LinkPair) -> bool {
        self.links.contains_key(&pair)
    }

    pub fn similarity(&self, pair: LinkPair) -> Option<f64> {
        self.links.get(&pair).copied()
    }

    pub fn links(&self) -> impl Iterator<Item = AlignmentLink> + '_ {
        self.links.iter().map(|(&(s, t), &sim)| AlignmentLink::new(s, t, sim))
    }

    pub fn pairs(&self) -> impl Iterator<Item = LinkPair> + '_ {
        self.links.keys().copied()
    }

    pub fn pair_set(&self) -> BTreeSet<LinkPair> {
        self.pairs().collect()
    }

    /// Distinct source word indices that carry at least one link.
    pub fn source_words(&self) -> BTreeSet<usize> {
        self.links.keys().map(|&(s, _)| s).collect()
    }

    pub(crate) fn retain(&mut self, mut keep: impl FnMut(AlignmentLink) -> bool) {
        self.links
            .retain(|&(s, t), &mut sim| keep(AlignmentLink::new(s, t, sim)));
    }

    /// Checks that every index names a word of `segment` and similarities are finite.
    pub fn validate(&self, segment: &Segment) -> Result<()> {
        if self.segment_id != segment.id {
            return Err(Error::SegmentMismatch {
                left: self.segment_id.clone(),
                right: segment.id.clone(),
            });
        }
        if let Some(link) = self.links().find(|l| !l.similarity.is_finite()) {
            return Err(Error::inconsistent(
                &self.segment_id,
                format!(
                    "link {}-{} has non-finite similarity",
                    link.source_index, link.target_index
                ),
            ));
        }
        check_pairs(&self.segment_id, self.pairs(), segment)
    }
}
