mod support;

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use synchro_core::ingest::{
    gold_for_corpus, parse_embeddings, parse_judgments, parse_pharaoh, parse_segments, write_embeddings, write_segments,
};
use synchro_core::{EmbeddingMatrix, Error, SegmentEmbeddings, Side};

use support::*;

fn toy(name: &str) -> BufReader<File> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "toy", name]
        .iter()
        .collect();
    BufReader::new(File::open(path).unwrap())
}

#[test]
fn toy_corpus_parses() {
    let segments = parse_segments(toy("segments.jsonl")).unwrap();
    assert_eq!(segments.len(), 12);
    let embeddings = parse_embeddings(toy("embeddings.jsonl"), &segments).unwrap();
    assert_eq!(embeddings.len(), 12);
    let gold = gold_for_corpus(parse_pharaoh(toy("gold.align")).unwrap(), &segments).unwrap();
    assert_eq!(gold.len(), 12);
    let judgments = parse_judgments(toy("judgments.csv")).unwrap();
    assert_eq!(judgments.len(), 12);
}

#[test]
fn segment_parser_survives_mutations() {
    let mut rng = StdRng::seed_from_u64(41);
    let segments: Vec<_> = (0..4)
        .map(|i| random_segment(&mut rng, &format!("m{i}"), 5, 8))
        .collect();
    let text = write_segments(&segments);
    assert_eq!(parse_segments(text.as_bytes()).unwrap(), segments);
    let alphabet = b"{}[],:\"0123456789-ab \n";
    for _ in 0..2000 {
        let mut bytes = text.clone().into_bytes();
        for _ in 0..rng.gen_range(1..4) {
            let at = rng.gen_range(0..bytes.len());
            match rng.gen_range(0..3) {
                0 => bytes[at] = alphabet[rng.gen_range(0..alphabet.len())],
                1 => {
                    bytes.remove(at);
                }
                _ => bytes.insert(at, alphabet[rng.gen_range(0..alphabet.len())]),
            }
            if bytes.is_empty() {
                break;
            }
        }
        if let Ok(parsed) = parse_segments(bytes.as_slice()) {
            for seg in parsed {
                seg.validate().unwrap();
            }
        }
    }
}

#[test]
fn embeddings_parse_iff_counts_match() {
    let mut rng = StdRng::seed_from_u64(43);
    for i in 0..300 {
        let seg = random_segment(&mut rng, &format!("e{i}"), 6, 10);
        let n_source = seg.subword_count(Side::Source);
        let n_target = seg.subword_count(Side::Target);
        let delta_source: i64 = rng.gen_range(-1..=1);
        let delta_target: i64 = rng.gen_range(-1..=1);
        let rows = |n: usize, delta: i64, rng: &mut StdRng| -> Vec<Vec<f64>> {
            let count = (n as i64 + delta).max(1) as usize;
            (0..count)
                .map(|_| vec![rng.gen_range(0.1..1.0), rng.gen_range(-1.0..1.0)])
                .collect()
        };
        let emb = SegmentEmbeddings {
            source: EmbeddingMatrix::new(&seg.id, Side::Source, rows(n_source, delta_source, &mut rng)).unwrap(),
            target: EmbeddingMatrix::new(&seg.id, Side::Target, rows(n_target, delta_target, &mut rng)).unwrap(),
        };
        let text = write_embeddings([&emb]);
        let matches = emb.source.len() == n_source && emb.target.len() == n_target;
        let parsed = parse_embeddings(text.as_bytes(), std::slice::from_ref(&seg));
        assert_eq!(parsed.is_ok(), matches, "{seg:?}");
        if let Err(e) = parsed {
            assert!(matches!(e, Error::Inconsistent { .. }), "{e}");
        }
    }
}
