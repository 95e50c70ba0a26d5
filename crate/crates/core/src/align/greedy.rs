use crate::error::{Error, Result};
use crate::ingest::{EmbeddingMatrix, Segment, Side};

use super::project::{subwords_to_words, SubwordLink};
use super::{AlignmentSet, Provenance};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cosine similarity, clamped to [-1, 1]. `None` when either vector has zero norm
/// or the lengths differ.
pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let denom = norm(a) * norm(b);
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Some((dot / denom).clamp(-1.0, 1.0))
}

fn unit_rows(matrix: &EmbeddingMatrix, rows: &[usize]) -> Result<Vec<Vec<f64>>> {
    rows.iter()
        .map(|&row| {
            let v = matrix.row(row);
            let n = norm(v);
            if n == 0.0 || !n.is_finite() {
                return Err(Error::inconsistent(
                    &matrix.segment_id,
                    format!("{} subword {row} has zero norm", matrix.side),
                ));
            }
            Ok(v.iter().map(|x| x / n).collect())
        })
        .collect()
}

fn check_dims(source: &EmbeddingMatrix, target: &EmbeddingMatrix) -> Result<()> {
    if source.dim() != target.dim() {
        return Err(Error::inconsistent(
            &source.segment_id,
            format!("dim mismatch: source {} vs target {}", source.dim(), target.dim()),
        ));
    }
    Ok(())
}

/// For each target row in `targets`, the candidate source row with the highest cosine.
/// Ties go to the earliest candidate, so candidates must be given in ascending order.
fn argmax_links(
    source: &EmbeddingMatrix,
    target: &EmbeddingMatrix,
    candidates: &[usize],
    targets: &[usize],
) -> Result<Vec<SubwordLink>> {
    check_dims(source, target)?;
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let source_units = unit_rows(source, candidates)?;
    let target_units = unit_rows(target, targets)?;
    let links = targets
        .iter()
        .zip(&target_units)
        .map(|(&t, t_unit)| {
            let mut best = (candidates[0], f64::NEG_INFINITY);
            for (&s, s_unit) in candidates.iter().zip(&source_units) {
                let dot: f64 = s_unit.iter().zip(t_unit).map(|(x, y)| x * y).sum();
                if dot > best.1 {
                    best = (s, dot);
                }
            }
            SubwordLink::new(best.0, t, best.1.clamp(-1.0, 1.0))
        })
        .collect();
    Ok(links)
}

/// BERTScore-style greedy matching over all rows: every target subword links to
/// its most similar source subword.
pub fn greedy_subword_links(source: &EmbeddingMatrix, target: &EmbeddingMatrix) -> Result<Vec<SubwordLink>> {
    let candidates: Vec<usize> = (0..source.len()).collect();
    let targets: Vec<usize> = (0..target.len()).collect();
    argmax_links(source, target, &candidates, &targets)
}

/// Greedy alignment projected to words.
///
/// Only subwords owned by a word take part: each target subword inside a word span
/// is matched against the source subwords inside word spans, then the subword links
/// are collapsed onto word pairs.
pub fn greedy_align(source: &EmbeddingMatrix, target: &EmbeddingMatrix, segment: &Segment) -> Result<AlignmentSet> {
    for (matrix, side) in [(source, Side::Source), (target, Side::Target)] {
        let expected = segment.subword_count(side);
        if matrix.len() != expected {
            return Err(Error::inconsistent(
                &segment.id,
                format!(
                    "{side} matrix has {} rows, segment has {expected} subwords",
                    matrix.len()
                ),
            ));
        }
    }
    let owned = |side| -> Vec<usize> {
        segment
            .subword_owners(side)
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.map(|_| i))
            .collect()
    };
    let links = argmax_links(source, target, &owned(Side::Source), &owned(Side::Target))?;
    let mut set = subwords_to_words(links, segment)?;
    set.provenance = Provenance::Greedy;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{SubwordSpan, Word};

    fn one_subword_segment(n_source: usize, n_target: usize) -> Segment {
        let words = |n: usize| {
            (0..n)
                .map(|i| Word::new(format!("w{i}"), None, false, SubwordSpan::new(i, i + 1)))
                .collect()
        };
        Segment {
            id: "s".into(),
            source: words(n_source),
            target: words(n_target),
        }
    }

    fn matrix(side: Side, rows: &[&[f64]]) -> EmbeddingMatrix {
        EmbeddingMatrix::new("s", side, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn hand_computed_cosines() {
        let seg = one_subword_segment(2, 2);
        let src = matrix(Side::Source, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let tgt = matrix(Side::Target, &[&[0.6, 0.8], &[1.0, 0.0]]);
        let set = greedy_align(&src, &tgt, &seg).unwrap();
        let links: Vec<_> = set.links().collect();
        assert_eq!(links.len(), 2);
        // cos((1,0),(0.6,0.8)) = 0.6 < cos((0,1),(0.6,0.8)) = 0.8
        assert_eq!(links[0].pair(), (0, 1));
        assert!((links[0].similarity - 1.0).abs() < 1e-12);
        assert_eq!(links[1].pair(), (1, 0));
        assert!((links[1].similarity - 0.8).abs() < 1e-12);
        assert_eq!(set.provenance, Provenance::Greedy);
    }

    #[test]
    fn identical_matrices_align_diagonally() {
        let seg = one_subword_segment(3, 3);
        let rows: &[&[f64]] = &[&[1.0, 2.0, 0.5], &[-1.0, 0.3, 2.0], &[0.2, -3.0, 1.0]];
        let set = greedy_align(&matrix(Side::Source, rows), &matrix(Side::Target, rows), &seg).unwrap();
        for (i, link) in set.links().enumerate() {
            assert_eq!(link.pair(), (i, i));
            assert!((link.similarity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ties_go_to_lowest_source_index() {
        let seg = one_subword_segment(3, 1);
        let src = matrix(Side::Source, &[&[0.0, 1.0], &[1.0, 0.0], &[2.0, 0.0]]);
        let tgt = matrix(Side::Target, &[&[3.0, 0.0]]);
        let set = greedy_align(&src, &tgt, &seg).unwrap();
        assert_eq!(set.pairs().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn rejects_dim_and_count_mismatch() {
        let seg = one_subword_segment(1, 1);
        let src = matrix(Side::Source, &[&[1.0, 0.0]]);
        let tgt = matrix(Side::Target, &[&[1.0, 0.0, 0.0]]);
        assert!(greedy_align(&src, &tgt, &seg)
            .unwrap_err()
            .to_string()
            .contains("dim mismatch"));
        let two = matrix(Side::Target, &[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(greedy_align(&src, &two, &seg).is_err());
    }

    #[test]
    fn cosine_edge_cases() {
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), None);
        assert_eq!(cosine(&[1.0], &[1.0, 0.0]), None);
        assert!((cosine(&[1.0, 1.0], &[-1.0, -1.0]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn subwords_outside_words_are_ignored() {
        // source subword 1 is not owned by any word and would otherwise win
        let seg = Segment {
            id: "s".into(),
            source: vec![
                Word::new("a", None, false, SubwordSpan::new(0, 1)),
                Word::new("b", None, false, SubwordSpan::new(2, 3)),
            ],
            target: vec![Word::new("x", None, false, SubwordSpan::new(0, 1))],
        };
        let src = matrix(Side::Source, &[&[1.0, 0.2], &[0.0, 1.0], &[0.2, 1.0]]);
        let tgt = matrix(Side::Target, &[&[0.0, 1.0]]);
        let set = greedy_align(&src, &tgt, &seg).unwrap();
        assert_eq!(set.pairs().collect::<Vec<_>>(), vec![(1, 0)]);
    }
}
