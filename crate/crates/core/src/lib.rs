//! Word-order synchronization metrics for simultaneous interpretation and
//! simultaneous machine translation.
//!
//! A segment pairs source words with target words. Target subwords are greedily
//! aligned to their most similar source subwords, unreliable links are filtered out,
//! and the aligned source positions, read in target order, are compared against the
//! source order with Spearman's ρ. Content-word coverage and their product (the
//! combined score) complement ρ, and the `eval` module aggregates scores over a corpus.

pub mod align;
mod error;
pub mod eval;
pub mod ingest;
pub mod metrics;
pub mod report;

pub use align::{AlignmentLink, AlignmentSet, FilterConfig, Provenance};
pub use error::{Error, ErrorKind, Result};
pub use ingest::{EmbeddingMatrix, GoldAlignment, JudgedSegment, ScoreKind, Segment, SegmentEmbeddings, Side, Word};
pub use metrics::{score_segment, CountRule, MetricConfig, Mode, SyncResult};
