use std::collections::{HashMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction of a human score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreKind {
    /// Lower is better (MQM penalty totals).
    ErrorBased,
    /// Higher is better.
    AccuracyBased,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgedSegment {
    pub segment_id: String,
    pub human_score: f64,
    pub score_kind: ScoreKind,
}

#[derive(Debug, Deserialize)]
struct JudgmentRow {
    segment_id: String,
    score: String,
    kind: String,
}

const HEADER: [&str; 3] = ["segment_id", "score", "kind"];

/// Reads a comma-separated judgment table with header `segment_id,score,kind`.
pub fn parse_judgments<R: Read>(reader: R) -> Result<Vec<JudgedSegment>> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers().map_err(|e| Error::malformed(1, e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::malformed(
            1,
            format!("expected header {:?}, found {header:?}", HEADER.join(",")),
        ));
    }
    let mut judgments = Vec::new();
    let mut seen = HashSet::new();
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: JudgmentRow = record
            .deserialize(Some(&csv::StringRecord::from(HEADER.to_vec())))
            .map_err(|e| Error::malformed(line, e.to_string()))?;
        let human_score: f64 = row
            .score
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::malformed(line, format!("non-numeric score {:?}", row.score)))?;
        let score_kind = match row.kind.as_str() {
            "error_based" => ScoreKind::ErrorBased,
            "accuracy_based" => ScoreKind::AccuracyBased,
            other => {
                return Err(Error::malformed(
                    line,
                    format!("unknown kind {other:?} (expected error_based or accuracy_based)"),
                ))
            }
        };
        if row.segment_id.is_empty() {
            return Err(Error::malformed(line, "empty segment_id"));
        }
        if !seen.insert(row.segment_id.clone()) {
            return Err(Error::DuplicateId {
                line,
                id: row.segment_id,
            });
        }
        judgments.push(JudgedSegment {
            segment_id: row.segment_id,
            human_score,
            score_kind,
        });
    }
    Ok(judgments)
}

/// Fails on the first judgment whose segment id is not in `known`.
pub fn check_judgment_ids<'a>(judgments: &[JudgedSegment], known: impl IntoIterator<Item = &'a str>) -> Result<()> {
    let known: HashSet<&str> = known.into_iter().collect();
    for (index, judged) in judgments.iter().enumerate() {
        if !known.contains(judged.segment_id.as_str()) {
            return Err(Error::UnknownSegment {
                line: index + 2,
                id: judged.segment_id.clone(),
            });
        }
    }
    Ok(())
}

pub(crate) fn index_by_id(judgments: &[JudgedSegment]) -> HashMap<&str, &JudgedSegment> {
    judgments.iter().map(|j| (j.segment_id.as_str(), j)).collect()
}
