use std::collections::BTreeSet;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::align::AlignmentSet;
use crate::error::{Error, Result};
use crate::ingest::{GoldAlignment, LinkPair};

/// Alignment quality against sure (S) and possible (P) gold links, as fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignmentEvalResult {
    pub aer: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// |A|
    pub predicted: usize,
    /// |S|
    pub sure: usize,
    /// |P|
    pub possible: usize,
    /// |A ∩ S|
    pub predicted_sure: usize,
    /// |A ∩ P|
    pub predicted_possible: usize,
}

impl AlignmentEvalResult {
    fn from_counts(predicted: usize, sure: usize, possible: usize, a_s: usize, a_p: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(a_p, predicted);
        let recall = ratio(a_s, sure);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        let aer = if predicted + sure == 0 {
            0.0
        } else {
            1.0 - (a_s + a_p) as f64 / (predicted + sure) as f64
        };
        Self {
            aer,
            precision,
            recall,
            f1,
            predicted,
            sure,
            possible,
            predicted_sure: a_s,
            predicted_possible: a_p,
        }
    }
}

fn counts(pred: &BTreeSet<LinkPair>, gold: &GoldAlignment) -> [usize; 5] {
    let a_s = pred.intersection(&gold.sure).count();
    let a_p = pred.intersection(&gold.possible).count();
    [pred.len(), gold.sure.len(), gold.possible.len(), a_s, a_p]
}

fn warn_degenerate(scope: &str, predicted: usize, sure: usize) {
    if predicted == 0 {
        warn!("{scope}: no predicted links, precision reported as 0");
    }
    if sure == 0 {
        warn!("{scope}: no sure gold links, recall reported as 0");
    }
}

/// AER = 1 − (|A∩S| + |A∩P|)/(|A| + |S|), precision = |A∩P|/|A|, recall = |A∩S|/|S|.
///
/// Empty A or S yields 0 for the affected ratio (with a logged warning); AER is 0 when
/// both A and S are empty.
pub fn aer(pred: &AlignmentSet, gold: &GoldAlignment) -> Result<AlignmentEvalResult> {
    if pred.segment_id != gold.segment_id {
        return Err(Error::SegmentMismatch {
            left: pred.segment_id.clone(),
            right: gold.segment_id.clone(),
        });
    }
    let [a, s, p, a_s, a_p] = counts(&pred.pair_set(), gold);
    warn_degenerate(&pred.segment_id, a, s);
    Ok(AlignmentEvalResult::from_counts(a, s, p, a_s, a_p))
}

/// Corpus-level scores: link sets of all segments are pooled before the ratios are taken.
pub fn aer_corpus<'a>(
    pairs: impl IntoIterator<Item = (&'a AlignmentSet, &'a GoldAlignment)>,
) -> Result<AlignmentEvalResult> {
    let mut totals = [0usize; 5];
    for (pred, gold) in pairs {
        if pred.segment_id != gold.segment_id {
            return Err(Error::SegmentMismatch {
                left: pred.segment_id.clone(),
                right: gold.segment_id.clone(),
            });
        }
        for (total, c) in totals.iter_mut().zip(counts(&pred.pair_set(), gold)) {
            *total += c;
        }
    }
    let [a, s, p, a_s, a_p] = totals;
    warn_degenerate("corpus", a, s);
    Ok(AlignmentEvalResult::from_counts(a, s, p, a_s, a_p))
}
