//! Deterministic synthetic inputs for the benchmarks.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use synchro_core::ingest::SubwordSpan;
use synchro_core::{AlignmentSet, EmbeddingMatrix, GoldAlignment, Provenance, Segment, SegmentEmbeddings, Side, Word};

/// A segment with `words` words per side, two subwords each, and matching embeddings.
pub fn segment(words: usize, dim: usize, seed: u64) -> (Segment, SegmentEmbeddings) {
    let mut rng = StdRng::seed_from_u64(seed);
    let side = |prefix: &str, rng: &mut StdRng| -> Vec<Word> {
        (0..words)
            .map(|i| {
                let pos = if rng.gen_bool(0.3) { "DET" } else { "NOUN" };
                Word::new(
                    format!("{prefix}{i}"),
                    Some(pos),
                    pos == "DET",
                    SubwordSpan::new(2 * i, 2 * i + 2),
                )
            })
            .collect()
    };
    let seg = Segment {
        id: format!("bench-{seed}"),
        source: side("s", &mut rng),
        target: side("t", &mut rng),
    };
    let matrix = |side: Side, rng: &mut StdRng| {
        let rows = (0..2 * words)
            .map(|_| (0..dim).map(|_| rng.gen_range(0.01..1.0)).collect())
            .collect();
        EmbeddingMatrix::new(&seg.id, side, rows).expect("positive rows")
    };
    let emb = SegmentEmbeddings {
        source: matrix(Side::Source, &mut rng),
        target: matrix(Side::Target, &mut rng),
    };
    (seg, emb)
}

/// A shuffled permutation of `1..=k`.
pub fn permutation(k: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=k).collect();
    perm.shuffle(&mut StdRng::seed_from_u64(seed));
    perm
}

/// A predicted alignment and gold links over an `n × n` grid.
pub fn alignment_pair(n: usize, seed: u64) -> (AlignmentSet, GoldAlignment) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pred = AlignmentSet::new("bench", Provenance::External);
    let mut sure = BTreeSet::new();
    let mut possible = BTreeSet::new();
    for s in 0..n {
        for t in 0..n {
            if rng.gen_bool(0.1) {
                pred.insert(s, t, 1.0);
            }
            match rng.gen_range(0..20) {
                0 => {
                    sure.insert((s, t));
                    possible.insert((s, t));
                }
                1 => {
                    possible.insert((s, t));
                }
                _ => {}
            }
        }
    }
    let gold = GoldAlignment {
        segment_id: "bench".into(),
        sure,
        possible,
    };
    (pred, gold)
}
