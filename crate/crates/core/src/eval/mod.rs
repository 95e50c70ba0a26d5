//! Corpus-level evaluation: alignment error rate against gold links, correlation with
//! human judgments, and bucketed aggregation of per-segment scores.

mod aer;
mod bucket;
mod correlation;

pub use aer::{aer, aer_corpus, AlignmentEvalResult};
pub use bucket::{bucket_by_length, bucket_by_nalign, BucketReport, LengthBucket, DEFAULT_NALIGN_THRESHOLDS};
pub use correlation::{
    correlate_by_length, correlate_with_judgments, join_judgments, pearson, CorrelationResult, JoinedPoint, MetricField,
};
