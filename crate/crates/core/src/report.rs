//! Text renderings of results: aligned tables for reading and line-delimited JSON
//! records for downstream tools. Both start with the effective configuration.

use std::fmt::Write as _;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::eval::{AlignmentEvalResult, BucketReport, CorrelationResult, LengthBucket, MetricField};
use crate::metrics::SyncResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Records,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "records" => Ok(Format::Records),
            other => Err(Error::Config(format!(
                "unknown format {other:?} (expected table or records)"
            ))),
        }
    }
}

/// Ordered key/value description of the settings that produced a report.
pub type ConfigEcho = Vec<(String, String)>;

/// Correlations for every metric field within one length bucket.
pub type BreakdownRow = (LengthBucket, Vec<(MetricField, Option<CorrelationResult>)>);

/// Right-pads cells so columns line up; the last column is left unpadded.
struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<const N: usize>(header: [&str; N]) -> Self {
        Self {
            rows: vec![header.iter().map(|s| s.to_string()).collect()],
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, out: &mut String) {
        let columns = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..columns)
            .map(|c| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(c))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for row in &self.rows {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                if c + 1 == row.len() {
                    line.push_str(cell);
                } else {
                    let pad = widths[c] - cell.chars().count();
                    line.push_str(cell);
                    line.push_str(&" ".repeat(pad + 2));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
}

fn fixed(value: Option<f64>, decimals: usize) -> String {
    match value {
        Some(v) => format!("{v:.decimals$}"),
        None => "n/a".into(),
    }
}

fn echo_table(config: &ConfigEcho, out: &mut String) {
    for (key, value) in config {
        let _ = writeln!(out, "# {key}: {value}");
    }
}

fn record_line(out: &mut String, value: Value) {
    out.push_str(&value.to_string());
    out.push('\n');
}

fn echo_record(config: &ConfigEcho, out: &mut String) {
    let mut map = Map::new();
    map.insert("record".into(), json!("config"));
    for (key, value) in config {
        map.insert(key.clone(), json!(value));
    }
    record_line(out, Value::Object(map));
}

fn tagged<T: Serialize>(tag: &str, value: &T) -> Value {
    let mut value = serde_json::to_value(value).expect("report values serialize");
    if let Value::Object(map) = &mut value {
        map.insert("record".into(), json!(tag));
    }
    value
}

/// The fields of a per-segment record, as written to and read from results files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SegmentRecord {
    segment_id: String,
    rho: Option<f64>,
    coverage: f64,
    combined: Option<f64>,
    n_align: usize,
    source_length: usize,
    excluded: bool,
    sequence: Vec<usize>,
}

impl From<&SyncResult> for SegmentRecord {
    fn from(r: &SyncResult) -> Self {
        Self {
            segment_id: r.segment_id.clone(),
            rho: r.rho,
            coverage: r.coverage,
            combined: r.combined,
            n_align: r.n_align,
            source_length: r.source_length,
            excluded: r.excluded,
            sequence: r.sequence.clone(),
        }
    }
}

impl From<SegmentRecord> for SyncResult {
    fn from(r: SegmentRecord) -> Self {
        Self {
            segment_id: r.segment_id,
            rho: r.rho,
            coverage: r.coverage,
            combined: r.combined,
            n_align: r.n_align,
            source_length: r.source_length,
            excluded: r.excluded,
            sequence: r.sequence,
            used_links: Vec::new(),
        }
    }
}

/// Reads the `segment` records of a results file written in records format.
/// Other record types are skipped. `used_links` is not stored and comes back empty.
pub fn parse_result_records<R: BufRead>(reader: R) -> Result<Vec<SyncResult>> {
    let mut results = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut value: Value = serde_json::from_str(&line).map_err(|e| Error::malformed(line_no, e.to_string()))?;
        let Some(map) = value.as_object_mut() else {
            return Err(Error::malformed(line_no, "record is not a JSON object"));
        };
        match map.remove("record") {
            Some(Value::String(tag)) if tag == "segment" => {}
            Some(Value::String(_)) => continue,
            _ => return Err(Error::malformed(line_no, "missing \"record\" tag")),
        }
        let record: SegmentRecord =
            serde_json::from_value(value).map_err(|e| Error::malformed(line_no, e.to_string()))?;
        results.push(record.into());
    }
    Ok(results)
}

fn bucket_rows(table: &mut Table, reports: &[BucketReport]) {
    for b in reports {
        table.push(vec![
            b.bucket_key.clone(),
            format!("{} ({})", fixed(b.mean_rho, 4), fixed(b.mean_coverage, 4)),
            fixed(b.mean_combined, 4),
            b.segment_count.to_string(),
            b.excluded_count.to_string(),
        ]);
    }
}

fn bucket_table(title: &str, reports: &[BucketReport], out: &mut String) {
    let _ = writeln!(out, "\n## {title}");
    let mut table = Table::new(["bucket", "rho (coverage)", "combined", "segments", "excluded"]);
    bucket_rows(&mut table, reports);
    table.render(out);
}

/// Per-segment scores followed by bucket summaries.
pub fn render_scores(
    config: &ConfigEcho,
    results: &[SyncResult],
    by_nalign: &[BucketReport],
    by_length: &[BucketReport],
    format: Format,
) -> String {
    let mut out = String::new();
    match format {
        Format::Table => {
            echo_table(config, &mut out);
            out.push_str("\n## segments\n");
            let mut table = Table::new([
                "segment_id",
                "rho",
                "coverage",
                "combined",
                "n_align",
                "length",
                "excluded",
                "sequence",
            ]);
            for r in results {
                let sequence: Vec<String> = r.sequence.iter().map(usize::to_string).collect();
                table.push(vec![
                    r.segment_id.clone(),
                    fixed(r.rho, 4),
                    fixed(Some(r.coverage), 4),
                    fixed(r.combined, 4),
                    r.n_align.to_string(),
                    r.source_length.to_string(),
                    if r.excluded { "yes" } else { "no" }.into(),
                    format!("[{}]", sequence.join(",")),
                ]);
            }
            table.render(&mut out);
            bucket_table("by aligned words", by_nalign, &mut out);
            bucket_table("by source length", by_length, &mut out);
        }
        Format::Records => {
            echo_record(config, &mut out);
            for r in results {
                record_line(&mut out, tagged("segment", &SegmentRecord::from(r)));
            }
            for b in by_nalign {
                record_line(&mut out, tagged("bucket_n_align", b));
            }
            for b in by_length {
                record_line(&mut out, tagged("bucket_length", b));
            }
        }
    }
    out
}

/// Bucket summaries only (used when re-reporting a results file).
pub fn render_buckets(
    config: &ConfigEcho,
    by_nalign: &[BucketReport],
    by_length: &[BucketReport],
    format: Format,
) -> String {
    let mut out = String::new();
    match format {
        Format::Table => {
            echo_table(config, &mut out);
            bucket_table("by aligned words", by_nalign, &mut out);
            bucket_table("by source length", by_length, &mut out);
        }
        Format::Records => {
            echo_record(config, &mut out);
            for b in by_nalign {
                record_line(&mut out, tagged("bucket_n_align", b));
            }
            for b in by_length {
                record_line(&mut out, tagged("bucket_length", b));
            }
        }
    }
    out
}

fn aer_row(scope: &str, r: &AlignmentEvalResult, percent: bool) -> Vec<String> {
    let ratio = |v: f64| {
        if percent {
            format!("{:.1}", v * 100.0)
        } else {
            format!("{v:.4}")
        }
    };
    vec![
        scope.to_string(),
        ratio(r.aer),
        ratio(r.precision),
        ratio(r.recall),
        if percent {
            format!("{:.3}", r.f1)
        } else {
            format!("{:.4}", r.f1)
        },
        r.predicted.to_string(),
        r.sure.to_string(),
        r.possible.to_string(),
    ]
}

/// Corpus AER/precision/recall/F1 and a per-segment breakdown. `percent` shows AER,
/// precision and recall as percentages in table output; records always carry fractions.
pub fn render_alignment_eval(
    config: &ConfigEcho,
    corpus: &AlignmentEvalResult,
    segments: &[(String, AlignmentEvalResult)],
    format: Format,
    percent: bool,
) -> String {
    let mut out = String::new();
    match format {
        Format::Table => {
            echo_table(config, &mut out);
            out.push('\n');
            let mut table = Table::new(["scope", "AER", "Precision", "Recall", "F1", "|A|", "|S|", "|P|"]);
            table.push(aer_row("corpus", corpus, percent));
            for (id, r) in segments {
                table.push(aer_row(id, r, percent));
            }
            table.render(&mut out);
        }
        Format::Records => {
            echo_record(config, &mut out);
            record_line(&mut out, tagged("corpus", corpus));
            for (id, r) in segments {
                let mut value = tagged("segment", r);
                value["segment_id"] = json!(id);
                record_line(&mut out, value);
            }
        }
    }
    out
}

/// Overall correlation per metric field plus the length breakdown.
pub fn render_correlation(
    config: &ConfigEcho,
    overall: &[CorrelationResult],
    breakdown: &[BreakdownRow],
    format: Format,
) -> String {
    let mut out = String::new();
    match format {
        Format::Table => {
            echo_table(config, &mut out);
            out.push('\n');
            let mut table = Table::new(["metric", "pearson_r", "points", "skipped"]);
            for c in overall {
                table.push(vec![
                    c.metric_name.clone(),
                    fixed(c.r, 4),
                    c.n_points.to_string(),
                    c.skipped.to_string(),
                ]);
            }
            table.render(&mut out);
            let mut notes: Vec<&str> = overall.iter().map(|c| c.note.as_str()).collect();
            notes.dedup();
            for note in notes {
                let _ = writeln!(out, "# note: {note}");
            }
            out.push_str("\n## by source length (pearson_r, points)\n");
            let mut header = vec!["length".to_string()];
            if let Some((_, cells)) = breakdown.first() {
                header.extend(cells.iter().map(|(f, _)| f.name().to_string()));
            }
            let mut table = Table { rows: vec![header] };
            for (bucket, cells) in breakdown {
                let mut row = vec![bucket.to_string()];
                row.extend(cells.iter().map(|(_, c)| match c {
                    Some(c) => format!("{} ({})", fixed(c.r, 4), c.n_points),
                    None => "n/a (<2)".into(),
                }));
                table.push(row);
            }
            table.render(&mut out);
        }
        Format::Records => {
            echo_record(config, &mut out);
            for c in overall {
                record_line(&mut out, tagged("correlation", c));
            }
            for (bucket, cells) in breakdown {
                for (field, c) in cells {
                    record_line(
                        &mut out,
                        json!({
                            "record": "correlation_by_length",
                            "bucket": bucket.to_string(),
                            "metric_name": field.name(),
                            "r": c.as_ref().and_then(|c| c.r),
                            "n_points": c.as_ref().map_or(0, |c| c.n_points),
                        }),
                    );
                }
            }
        }
    }
    out
}
