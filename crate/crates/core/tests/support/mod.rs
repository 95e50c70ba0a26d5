//! Random corpus generators and independent reference implementations shared by the
//! property tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use synchro_core::ingest::SubwordSpan;
use synchro_core::{AlignmentSet, EmbeddingMatrix, GoldAlignment, Provenance, Segment, SegmentEmbeddings, Side, Word};

pub const TAGS: [&str; 14] = [
    "NOUN", "VERB", "ADJ", "ADV", "PROPN", "NUM", "X", "ADP", "AUX", "DET", "PRON", "PART", "CCONJ", "PUNCT",
];
pub const FUNCTION_TAGS: [&str; 9] = ["ADP", "AUX", "CCONJ", "SCONJ", "DET", "PART", "PRON", "PUNCT", "SYM"];

/// All permutations of `1..=k`, in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=k).collect(), &mut out);
    out
}

/// 1 − 6Σd² / (k(k² − 1)) in exact rationals.
pub fn spearman_closed_form(seq: &[usize]) -> Ratio<i64> {
    let k = seq.len() as i64;
    let d2: i64 = seq
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let d = r as i64 - (i as i64 + 1);
            d * d
        })
        .sum();
    Ratio::from_integer(1) - Ratio::new(6 * d2, k * (k * k - 1))
}

/// Pearson correlation of positions against ranks in exact rationals. Both series are
/// permutations of 1..k, so their variances agree and r = cov / var with no square root.
pub fn pearson_of_ranks(seq: &[usize]) -> Ratio<i64> {
    let k = seq.len() as i64;
    let mean = Ratio::new(k + 1, 2);
    let mut cov = Ratio::from_integer(0);
    let mut var = Ratio::from_integer(0);
    for (i, &r) in seq.iter().enumerate() {
        let x = Ratio::from_integer(i as i64 + 1) - mean;
        let y = Ratio::from_integer(r as i64) - mean;
        cov += x * y;
        var += x * x;
    }
    cov / var
}

pub fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn plain_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Word-level greedy alignment by exhaustive search: every owned target subword picks
/// the owned source subword with the highest cosine (first one on ties), and word pairs
/// keep the best similarity among their subword pairs.
pub fn brute_force_greedy(segment: &Segment, emb: &SegmentEmbeddings) -> BTreeMap<(usize, usize), f64> {
    let owner = |side: Side, subword: usize| {
        segment
            .words(side)
            .iter()
            .position(|w| w.span.start <= subword && subword < w.span.end)
    };
    let mut out: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for j in 0..emb.target.len() {
        let Some(tw) = owner(Side::Target, j) else { continue };
        let mut best: Option<(usize, f64)> = None;
        for i in 0..emb.source.len() {
            if owner(Side::Source, i).is_none() {
                continue;
            }
            let c = plain_cosine(emb.source.row(i), emb.target.row(j));
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((i, c));
            }
        }
        if let Some((i, c)) = best {
            let sw = owner(Side::Source, i).unwrap();
            let entry = out.entry((sw, tw)).or_insert(f64::NEG_INFINITY);
            *entry = entry.max(c);
        }
    }
    out
}

fn random_words(rng: &mut StdRng, max_words: usize, max_subwords: usize, tagged: bool) -> Vec<Word> {
    let n = rng.gen_range(1..=max_words);
    let mut words = Vec::with_capacity(n);
    let mut next = 0;
    for i in 0..n {
        if rng.gen_bool(0.1) && next + 1 < max_subwords {
            next += 1;
        }
        let remaining = max_subwords.saturating_sub(next);
        if remaining == 0 {
            break;
        }
        let len = rng.gen_range(1..=remaining.min(3));
        let pos = tagged.then(|| *TAGS.choose(rng).unwrap());
        let mut is_function = pos.is_some_and(|p| FUNCTION_TAGS.contains(&p));
        if rng.gen_bool(0.05) {
            is_function = !is_function;
        }
        words.push(Word::new(
            format!("w{i}"),
            pos,
            is_function,
            SubwordSpan::new(next, next + len),
        ));
        next += len;
    }
    words
}

/// A segment with at most `max_subwords` subwords per side, gaps included.
pub fn random_segment(rng: &mut StdRng, id: &str, max_words: usize, max_subwords: usize) -> Segment {
    Segment {
        id: id.into(),
        source: random_words(rng, max_words, max_subwords, true),
        target: random_words(rng, max_words, max_subwords, false),
    }
}

fn random_vector(rng: &mut StdRng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().any(|x| x.abs() > 1e-3) {
            return v;
        }
    }
}

/// Embeddings covering every subword up to the last owned one. Most target rows are a
/// noisy copy of some source row so that similarities spread over the whole range.
pub fn random_embeddings(rng: &mut StdRng, segment: &Segment, dim: usize) -> SegmentEmbeddings {
    let source: Vec<Vec<f64>> = (0..segment.subword_count(Side::Source))
        .map(|_| random_vector(rng, dim))
        .collect();
    let target: Vec<Vec<f64>> = (0..segment.subword_count(Side::Target))
        .map(|_| {
            if rng.gen_bool(0.7) {
                let base = source.choose(rng).unwrap().clone();
                let noise = rng.gen_range(0.0..1.5);
                let v: Vec<f64> = base.iter().map(|x| x + noise * rng.gen_range(-1.0..1.0)).collect();
                if v.iter().any(|x| x.abs() > 1e-3) {
                    return v;
                }
            }
            random_vector(rng, dim)
        })
        .collect();
    SegmentEmbeddings {
        source: EmbeddingMatrix::new(&segment.id, Side::Source, source).unwrap(),
        target: EmbeddingMatrix::new(&segment.id, Side::Target, target).unwrap(),
    }
}

/// A random link set over a `rows × cols` grid with similarities in [0, 1].
pub fn random_alignment(rng: &mut StdRng, id: &str, rows: usize, cols: usize, density: f64) -> AlignmentSet {
    let mut set = AlignmentSet::new(id, Provenance::Greedy);
    for s in 0..rows {
        for t in 0..cols {
            if rng.gen_bool(density) {
                // Coarse grid so that equal similarities (and tie-breaking) actually occur.
                set.insert(s, t, rng.gen_range(0..=20) as f64 / 20.0);
            }
        }
    }
    set
}

/// Random gold links with sure ⊆ possible, possibly empty.
pub fn random_gold(rng: &mut StdRng, id: &str) -> GoldAlignment {
    let rows = rng.gen_range(0..15);
    let cols = rng.gen_range(0..15);
    let mut sure = BTreeSet::new();
    let mut possible = BTreeSet::new();
    for s in 0..rows {
        for t in 0..cols {
            match rng.gen_range(0..10) {
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
    GoldAlignment {
        segment_id: id.into(),
        sure,
        possible,
    }
}
