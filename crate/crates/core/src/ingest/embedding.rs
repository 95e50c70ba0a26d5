use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::segment::{Segment, Side};
use crate::error::{Error, Result};

/// Row-major matrix of subword embedding vectors for one side of one segment.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    pub segment_id: String,
    pub side: Side,
    dim: usize,
    data: Vec<f64>,
}

impl EmbeddingMatrix {
    /// Builds a matrix, rejecting ragged rows, empty dimensions and all-zero rows.
    pub fn new(segment_id: impl Into<String>, side: Side, vectors: Vec<Vec<f64>>) -> std::result::Result<Self, String> {
        let dim = vectors.first().map_or(0, Vec::len);
        Self::with_dim(segment_id, side, dim, vectors)
    }

    fn with_dim(
        segment_id: impl Into<String>,
        side: Side,
        dim: usize,
        vectors: Vec<Vec<f64>>,
    ) -> std::result::Result<Self, String> {
        if dim == 0 {
            return Err("dim must be positive".into());
        }
        let first_len = vectors.first().map(Vec::len);
        let mut data = Vec::with_capacity(vectors.len() * dim);
        for (row, vector) in vectors.iter().enumerate() {
            if Some(vector.len()) != first_len {
                return Err(format!(
                    "ragged dims: vector 0 has length {}, vector {row} has length {}",
                    first_len.unwrap_or(0),
                    vector.len()
                ));
            }
            if vector.len() != dim {
                return Err(format!("vector {row} has length {}, declared dim {dim}", vector.len()));
            }
            if vector.iter().any(|x| !x.is_finite()) {
                return Err(format!("vector {row} has a non-finite component"));
            }
            if vector.iter().all(|&x| x == 0.0) {
                return Err(format!("vector {row} is a zero vector"));
            }
            data.extend_from_slice(vector);
        }
        Ok(Self {
            segment_id: segment_id.into(),
            side,
            dim,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors (subwords).
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.data[index * self.dim..(index + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    fn to_vectors(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }
}

/// Source and target matrices of one segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentEmbeddings {
    pub source: EmbeddingMatrix,
    pub target: EmbeddingMatrix,
}

impl SegmentEmbeddings {
    pub fn side(&self, side: Side) -> &EmbeddingMatrix {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingRecord {
    segment_id: String,
    side: Side,
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

/// Reads line-delimited embedding records and checks them against `corpus`.
///
/// Every segment that appears in the file must have exactly one source and one target
/// record, each holding one vector per subword. All records must share one dimension.
/// Segments absent from the file are simply absent from the returned map.
pub fn parse_embeddings<R: BufRead>(reader: R, corpus: &[Segment]) -> Result<BTreeMap<String, SegmentEmbeddings>> {
    let by_id: HashMap<&str, &Segment> = corpus.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut partial: BTreeMap<String, [Option<EmbeddingMatrix>; 2]> = BTreeMap::new();
    let mut corpus_dim: Option<usize> = None;

    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: EmbeddingRecord =
            serde_json::from_str(&line).map_err(|e| Error::malformed(line_no, e.to_string()))?;
        let segment = by_id
            .get(record.segment_id.as_str())
            .ok_or_else(|| Error::UnknownSegment {
                line: line_no,
                id: record.segment_id.clone(),
            })?;
        match corpus_dim {
            Some(dim) if dim != record.dim => {
                return Err(Error::malformed(
                    line_no,
                    format!("dim mismatch: record declares {}, earlier records {dim}", record.dim),
                ))
            }
            _ => corpus_dim = Some(record.dim),
        }
        let expected = segment.subword_count(record.side);
        if record.vectors.len() != expected {
            return Err(Error::inconsistent(
                &record.segment_id,
                format!(
                    "line {line_no}: {} {} vectors but {expected} subwords",
                    record.side,
                    record.vectors.len()
                ),
            ));
        }
        let matrix = EmbeddingMatrix::with_dim(&record.segment_id, record.side, record.dim, record.vectors)
            .map_err(|message| Error::malformed(line_no, format!("segment {}: {message}", record.segment_id)))?;
        let slots = partial.entry(record.segment_id.clone()).or_default();
        let slot = &mut slots[record.side as usize];
        if slot.is_some() {
            return Err(Error::DuplicateId {
                line: line_no,
                id: format!("{} ({})", record.segment_id, record.side),
            });
        }
        *slot = Some(matrix);
    }

    partial
        .into_iter()
        .map(|(id, [source, target])| match (source, target) {
            (Some(source), Some(target)) => Ok((id, SegmentEmbeddings { source, target })),
            (None, _) => Err(Error::inconsistent(id, "missing source embeddings")),
            (_, None) => Err(Error::inconsistent(id, "missing target embeddings")),
        })
        .collect()
}

/// Serializes embeddings in the line-delimited record format, source before target.
pub fn write_embeddings<'a>(embeddings: impl IntoIterator<Item = &'a SegmentEmbeddings>) -> String {
    let mut out = String::new();
    for pair in embeddings {
        for matrix in [&pair.source, &pair.target] {
            let record = EmbeddingRecord {
                segment_id: matrix.segment_id.clone(),
                side: matrix.side,
                dim: matrix.dim,
                vectors: matrix.to_vectors(),
            };
            out.push_str(&serde_json::to_string(&record).expect("record serializes"));
            out.push('\n');
        }
    }
    out
}
