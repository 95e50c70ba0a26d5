use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{index_by_id, JudgedSegment, ScoreKind};
use crate::metrics::SyncResult;

use super::bucket::LengthBucket;

/// Sample Pearson correlation. `Ok(None)` when either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Option<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            found: xs.len(),
            needed: 2,
        });
    }
    let constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if constant(xs) || constant(ys) {
        return Ok(None);
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)))
}

/// Per-segment score column correlated with human judgments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricField {
    Rho,
    Coverage,
    Combined,
}

impl MetricField {
    pub const ALL: [MetricField; 3] = [MetricField::Rho, MetricField::Coverage, MetricField::Combined];

    pub fn name(self) -> &'static str {
        match self {
            MetricField::Rho => "rho",
            MetricField::Coverage => "coverage",
            MetricField::Combined => "combined",
        }
    }

    pub fn value(self, result: &SyncResult) -> Option<f64> {
        match self {
            MetricField::Rho => result.rho,
            MetricField::Coverage => Some(result.coverage),
            MetricField::Combined => result.combined,
        }
    }
}

impl fmt::Display for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricField::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown metric field {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub metric_name: String,
    /// `None` when either series has zero variance.
    pub r: Option<f64>,
    pub n_points: usize,
    /// Judged segments left out because they are excluded or the metric is undefined.
    pub skipped: usize,
    pub score_kind: ScoreKind,
    pub note: String,
}

fn interpretation(kind: ScoreKind, r: Option<f64>) -> String {
    match (r, kind) {
        (None, _) => "zero variance: correlation undefined".into(),
        (Some(_), ScoreKind::ErrorBased) => {
            "human scores are error-based (lower is better): negative r means agreement".into()
        }
        (Some(_), ScoreKind::AccuracyBased) => {
            "human scores are accuracy-based (higher is better): positive r means agreement".into()
        }
    }
}

/// One judged segment joined with its metric value.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinedPoint {
    pub segment_id: String,
    pub source_length: usize,
    pub metric: f64,
    pub human: f64,
}

/// Judgments joined with results, sorted by segment id. Returns the points and the
/// number of judged segments skipped (excluded or undefined metric).
pub fn join_judgments(
    results: &[SyncResult],
    judgments: &[JudgedSegment],
    field: MetricField,
) -> Result<(Vec<JoinedPoint>, usize, ScoreKind)> {
    let kinds: HashSet<ScoreKind> = judgments.iter().map(|j| j.score_kind).collect();
    if kinds.len() > 1 {
        return Err(Error::inconsistent(
            "<judgments>",
            "mixed error_based and accuracy_based scores",
        ));
    }
    let kind = kinds.into_iter().next().unwrap_or(ScoreKind::ErrorBased);
    let by_id = index_by_id(judgments);
    let known: HashSet<&str> = results.iter().map(|r| r.segment_id.as_str()).collect();
    if let Some(unknown) = judgments.iter().find(|j| !known.contains(j.segment_id.as_str())) {
        return Err(Error::UnknownSegment {
            line: 0,
            id: unknown.segment_id.clone(),
        });
    }
    let mut points = Vec::new();
    let mut skipped = 0;
    for result in results {
        let Some(judged) = by_id.get(result.segment_id.as_str()) else {
            continue;
        };
        match field.value(result).filter(|_| !result.excluded) {
            Some(metric) => points.push(JoinedPoint {
                segment_id: result.segment_id.clone(),
                source_length: result.source_length,
                metric,
                human: judged.human_score,
            }),
            None => skipped += 1,
        }
    }
    points.sort_by(|a, b| a.segment_id.cmp(&b.segment_id));
    Ok((points, skipped, kind))
}

fn correlate_points(
    points: &[JoinedPoint],
    field: MetricField,
    skipped: usize,
    kind: ScoreKind,
) -> Result<CorrelationResult> {
    let xs: Vec<f64> = points.iter().map(|p| p.metric).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.human).collect();
    let r = pearson(&xs, &ys)?;
    Ok(CorrelationResult {
        metric_name: field.name().into(),
        r,
        n_points: points.len(),
        skipped,
        score_kind: kind,
        note: interpretation(kind, r),
    })
}

/// Pearson r between a metric column and human scores over the judged segments.
pub fn correlate_with_judgments(
    results: &[SyncResult],
    judgments: &[JudgedSegment],
    field: MetricField,
) -> Result<CorrelationResult> {
    let (points, skipped, kind) = join_judgments(results, judgments, field)?;
    correlate_points(&points, field, skipped, kind)
}

/// Correlation per source-length bucket. Buckets with fewer than two points get `None`.
pub fn correlate_by_length(
    results: &[SyncResult],
    judgments: &[JudgedSegment],
    field: MetricField,
    buckets: &[LengthBucket],
) -> Result<Vec<(LengthBucket, Option<CorrelationResult>)>> {
    let (points, skipped, kind) = join_judgments(results, judgments, field)?;
    Ok(buckets
        .iter()
        .map(|&bucket| {
            let inside: Vec<JoinedPoint> = points
                .iter()
                .filter(|p| bucket.contains(p.source_length))
                .cloned()
                .collect();
            (bucket, correlate_points(&inside, field, skipped, kind).ok())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_linear_relations() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let up: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let down: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert_eq!(pearson(&xs, &up).unwrap(), Some(1.0));
        assert_eq!(pearson(&xs, &down).unwrap(), Some(-1.0));
    }

    #[test]
    fn hand_computed_half() {
        let r = pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap().unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_and_bad_lengths() {
        assert_eq!(pearson(&[0.1, 0.1, 0.1], &[1.0, 2.0, 3.0]).unwrap(), None);
        assert_eq!(pearson(&[1.0, 2.0], &[5.0, 5.0]).unwrap(), None);
        assert!(matches!(
            pearson(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(pearson(&[1.0], &[1.0]), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn field_names_round_trip() {
        for field in MetricField::ALL {
            assert_eq!(field.name().parse::<MetricField>().unwrap(), field);
        }
    }
}
