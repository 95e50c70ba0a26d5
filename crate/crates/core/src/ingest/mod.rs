//! Readers and writers for the engine's on-disk formats.
//!
//! Segments, embeddings, alignments and judgments each live in their own file and are
//! joined by segment id (or, for Pharaoh files, by line position in the corpus).

mod embedding;
mod judgment;
mod pharaoh;
mod segment;

pub use embedding::{parse_embeddings, write_embeddings, EmbeddingMatrix, SegmentEmbeddings};
pub(crate) use judgment::index_by_id;
pub use judgment::{check_judgment_ids, parse_judgments, JudgedSegment, ScoreKind};
pub(crate) use pharaoh::check_pairs;
pub use pharaoh::{
    alignments_for_corpus, gold_for_corpus, parse_pharaoh, write_gold, write_pharaoh, GoldAlignment, LinkPair,
    PharaohLine,
};
pub use segment::{parse_segments, write_segments, Segment, Side, SubwordSpan, Word};
