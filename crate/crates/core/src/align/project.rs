use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Segment, Side};

use super::{AlignmentSet, Provenance};

/// A link between two subword positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubwordLink {
    pub source_subword: usize,
    pub target_subword: usize,
    pub similarity: f64,
}

impl SubwordLink {
    pub fn new(source_subword: usize, target_subword: usize, similarity: f64) -> Self {
        Self {
            source_subword,
            target_subword,
            similarity,
        }
    }
}

/// Collapses subword links onto word pairs.
///
/// A word pair is linked when at least one subword link falls inside both spans; its
/// similarity is the maximum over those links. Links touching a subword that no word
/// owns are dropped.
pub fn subwords_to_words(links: impl IntoIterator<Item = SubwordLink>, segment: &Segment) -> Result<AlignmentSet> {
    let source_owner = segment.subword_owners(Side::Source);
    let target_owner = segment.subword_owners(Side::Target);
    let mut set = AlignmentSet::new(&segment.id, Provenance::Greedy);
    for link in links {
        let owner = |owners: &[Option<usize>], index: usize, side: Side| {
            owners.get(index).copied().ok_or_else(|| {
                Error::inconsistent(
                    &segment.id,
                    format!("{side} subword {index} out of range ({} subwords)", owners.len()),
                )
            })
        };
        let source = owner(&source_owner, link.source_subword, Side::Source)?;
        let target = owner(&target_owner, link.target_subword, Side::Target)?;
        if let (Some(s), Some(t)) = (source, target) {
            set.insert(s, t, link.similarity);
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{SubwordSpan, Word};

    fn segment() -> Segment {
        Segment {
            id: "p".into(),
            source: vec![
                Word::new("un", None, false, SubwordSpan::new(0, 2)),
                Word::new("x", None, false, SubwordSpan::new(2, 3)),
            ],
            target: vec![Word::new("y", None, false, SubwordSpan::new(0, 1))],
        }
    }

    #[test]
    fn max_rule_within_word() {
        let links = [SubwordLink::new(0, 0, 0.9), SubwordLink::new(1, 0, 0.7)];
        let set = subwords_to_words(links, &segment()).unwrap();
        let words: Vec<_> = set.links().collect();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].pair(), (0, 0));
        assert_eq!(words[0].similarity, 0.9);
    }

    #[test]
    fn empty_input_gives_empty_set() {
        assert!(subwords_to_words([], &segment()).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_subword_is_an_error() {
        let err = subwords_to_words([SubwordLink::new(3, 0, 0.5)], &segment()).unwrap_err();
        assert!(err.to_string().contains("source subword 3 out of range"), "{err}");
        assert!(subwords_to_words([SubwordLink::new(0, 1, 0.5)], &segment()).is_err());
    }

    #[test]
    fn all_links_inside_one_word_pair_collapse() {
        // enumerate every (source subword of word 0, target subword) combination
        let seg = Segment {
            id: "c".into(),
            source: vec![Word::new("abc", None, false, SubwordSpan::new(0, 3))],
            target: vec![Word::new("de", None, false, SubwordSpan::new(0, 2))],
        };
        let mut links = Vec::new();
        for s in 0..3 {
            for t in 0..2 {
                links.push(SubwordLink::new(s, t, 0.1 * (s * 2 + t) as f64));
            }
        }
        let set = subwords_to_words(links, &seg).unwrap();
        assert_eq!(set.len(), 1);
        assert!((set.similarity((0, 0)).unwrap() - 0.5).abs() < 1e-12);
    }
}
