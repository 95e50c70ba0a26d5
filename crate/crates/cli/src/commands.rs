use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use synchro_core::align::{dedupe_for_ranking, greedy_align};
use synchro_core::eval::{
    aer, aer_corpus, bucket_by_length, bucket_by_nalign, correlate_by_length, correlate_with_judgments, LengthBucket,
    MetricField, DEFAULT_NALIGN_THRESHOLDS,
};
use synchro_core::ingest::{
    alignments_for_corpus, check_judgment_ids, gold_for_corpus, parse_embeddings, parse_judgments, parse_pharaoh,
    parse_segments, write_pharaoh,
};
use synchro_core::metrics::{filtered_alignment, score_alignment};
use synchro_core::report::{
    parse_result_records, render_alignment_eval, render_buckets, render_correlation, render_scores, ConfigEcho, Format,
};
use synchro_core::{AlignmentSet, MetricConfig, Mode, Provenance, Segment, SegmentEmbeddings, SyncResult};

use crate::config::{echo, MetricArgs};
use crate::UsageError;

#[derive(Debug, Parser)]
#[command(
    name = "synchro",
    version,
    about = "Word-order synchronization metrics for interpretation and translation"
)]
pub struct Cli {
    /// Write output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the word alignment for every segment in Pharaoh format
    Align(AlignArgs),
    /// Score every segment and aggregate by aligned-word count and source length
    Score(ScoreArgs),
    /// Compare predicted alignments with gold links
    EvalAlign(EvalAlignArgs),
    /// Correlate metric scores with human judgments
    Correlate(CorrelateArgs),
    /// Re-aggregate a records file written by `score --format records`
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Segments file (JSON lines)
    #[arg(long, value_name = "PATH")]
    pub segments: Option<PathBuf>,

    /// Subword embeddings file (JSON lines)
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,

    /// External word alignment in Pharaoh format, one line per segment (combined mode)
    #[arg(long, value_name = "PATH")]
    pub external_align: Option<PathBuf>,

    #[command(flatten)]
    pub metric: MetricArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    /// Raw greedy word alignment
    Greedy,
    /// After the reliability filters of the selected mode
    Filtered,
    /// One-to-one links used for ranking
    Ranked,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    /// Which alignment to write
    #[arg(long, value_enum, default_value_t = Stage::Filtered)]
    pub stage: Stage,
}

#[derive(Debug, Clone, Args)]
pub struct BucketArgs {
    /// Aligned-word thresholds for the n_align breakdown
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_NALIGN_THRESHOLDS)]
    pub n_align_buckets: Vec<usize>,

    /// Source-length buckets: all, <N or >=N
    #[arg(long, value_delimiter = ',', default_value = "all,<15,>=15,>=20,>=25,>=30", value_parser = parse_length_bucket)]
    pub length_buckets: Vec<LengthBucket>,

    /// Aligned table or one JSON record per line
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
}

fn parse_length_bucket(s: &str) -> std::result::Result<LengthBucket, String> {
    s.parse().map_err(|e: synchro_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Records,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Records => Format::Records,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    #[command(flatten)]
    pub buckets: BucketArgs,
}

#[derive(Debug, Args)]
pub struct EvalAlignArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    /// Gold alignment in Pharaoh format (`i-j` sure, `i?j` possible)
    #[arg(long, value_name = "PATH")]
    pub gold: Option<PathBuf>,

    /// Predicted alignment in Pharaoh format; computed from --embeddings when absent
    #[arg(long, value_name = "PATH")]
    pub pred: Option<PathBuf>,

    /// Show AER, precision and recall as percentages
    #[arg(long)]
    pub percent: bool,

    /// Aligned table or one JSON record per line
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    /// Human judgments (CSV: segment_id,score,kind)
    #[arg(long, value_name = "PATH")]
    pub judgments: Option<PathBuf>,

    /// Records file from `score --format records`; replaces --segments/--embeddings
    #[arg(long, value_name = "PATH")]
    pub results: Option<PathBuf>,

    /// Metric columns to correlate
    #[arg(long, value_delimiter = ',', default_value = "rho,coverage,combined", value_parser = parse_field)]
    pub metric: Vec<MetricField>,

    #[command(flatten)]
    pub buckets: BucketArgs,
}

fn parse_field(s: &str) -> std::result::Result<MetricField, String> {
    s.parse().map_err(|e: synchro_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Records file from `score --format records`
    #[arg(long, value_name = "PATH")]
    pub results: Option<PathBuf>,

    #[command(flatten)]
    pub buckets: BucketArgs,
}

fn required<'a>(value: &'a Option<PathBuf>, flag: &str, why: &str) -> Result<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| UsageError(format!("missing required flag --{flag} ({why})")).into())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn with_path<T>(path: &Path, result: synchro_core::Result<T>) -> Result<T> {
    result.with_context(|| format!("in {}", path.display()))
}

/// Everything needed to align and score a corpus.
pub struct Corpus {
    pub segments: Vec<Segment>,
    pub embeddings: BTreeMap<String, SegmentEmbeddings>,
    pub external: Option<Vec<AlignmentSet>>,
}

impl Corpus {
    pub fn load(args: &CorpusArgs, cfg: &MetricConfig) -> Result<Self> {
        let segments_path = required(&args.segments, "segments", "segment file")?;
        let embeddings_path = required(&args.embeddings, "embeddings", "subword embeddings")?;
        let segments = with_path(segments_path, parse_segments(open(segments_path)?))?;
        for segment in &segments {
            let conflicts = segment.function_flag_conflicts(&cfg.filter.function_pos);
            if !conflicts.is_empty() {
                log::warn!(
                    "segment {}: {} word(s) carry a function POS tag but is_function=false",
                    segment.id,
                    conflicts.len()
                );
            }
        }
        let embeddings = with_path(embeddings_path, parse_embeddings(open(embeddings_path)?, &segments))?;
        let external = match (&args.external_align, cfg.mode) {
            (Some(path), _) => {
                let lines = with_path(path, parse_pharaoh(open(path)?))?;
                Some(with_path(
                    path,
                    alignments_for_corpus(lines, &segments, Provenance::External),
                )?)
            }
            (None, Mode::Combined) => {
                return Err(UsageError("missing required flag --external-align (combined mode)".into()).into())
            }
            (None, Mode::Synchro) => None,
        };
        Ok(Self {
            segments,
            embeddings,
            external,
        })
    }

    fn external(&self, index: usize) -> Option<&AlignmentSet> {
        self.external.as_ref().map(|sets| &sets[index])
    }

    /// Filtered word alignment per segment, in corpus order.
    pub fn filtered(&self, cfg: &MetricConfig) -> Result<Vec<AlignmentSet>> {
        let out: Vec<synchro_core::Result<AlignmentSet>> = self
            .segments
            .par_iter()
            .enumerate()
            .map(|(i, seg)| filtered_alignment(seg, self.embeddings.get(&seg.id), self.external(i), cfg))
            .collect();
        Ok(out.into_iter().collect::<synchro_core::Result<_>>()?)
    }

    /// Scores per segment, in corpus order.
    pub fn score(&self, cfg: &MetricConfig) -> Result<Vec<SyncResult>> {
        let filtered = self.filtered(cfg)?;
        Ok(self
            .segments
            .par_iter()
            .zip(filtered.par_iter())
            .map(|(seg, kept)| score_alignment(seg, kept, cfg))
            .collect())
    }

    fn greedy(&self) -> Result<Vec<AlignmentSet>> {
        let out: Vec<synchro_core::Result<AlignmentSet>> = self
            .segments
            .par_iter()
            .map(|seg| {
                let emb = self
                    .embeddings
                    .get(&seg.id)
                    .ok_or_else(|| synchro_core::Error::inconsistent(&seg.id, "missing embeddings"))?;
                greedy_align(&emb.source, &emb.target, seg)
            })
            .collect();
        Ok(out.into_iter().collect::<synchro_core::Result<_>>()?)
    }
}

fn inputs_echo(pairs: &[(&str, &Option<PathBuf>)]) -> ConfigEcho {
    pairs
        .iter()
        .filter_map(|(key, path)| path.as_ref().map(|p| (key.to_string(), p.display().to_string())))
        .collect()
}

fn corpus_echo(command: &str, args: &CorpusArgs, cfg: &MetricConfig) -> ConfigEcho {
    let mut out = vec![("command".to_string(), command.to_string())];
    out.extend(inputs_echo(&[
        ("segments", &args.segments),
        ("embeddings", &args.embeddings),
        ("external_align", &args.external_align),
        ("config", &args.metric.config),
    ]));
    out.extend(echo(cfg));
    out
}

fn bucket_echo(args: &BucketArgs) -> ConfigEcho {
    let thresholds: Vec<String> = args.n_align_buckets.iter().map(usize::to_string).collect();
    let lengths: Vec<String> = args.length_buckets.iter().map(LengthBucket::to_string).collect();
    vec![
        ("n_align_buckets".into(), thresholds.join(",")),
        ("length_buckets".into(), lengths.join(",")),
    ]
}

/// Runs a command and returns its rendered output.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Align(args) => align(args),
        Command::Score(args) => score(args),
        Command::EvalAlign(args) => eval_align(args),
        Command::Correlate(args) => correlate(args),
        Command::Report(args) => report(args),
    }
}

fn align(args: &AlignArgs) -> Result<String> {
    let cfg = args.corpus.metric.resolve()?;
    let corpus = Corpus::load(&args.corpus, &cfg)?;
    let sets = match args.stage {
        Stage::Greedy => corpus.greedy()?,
        Stage::Filtered => corpus.filtered(&cfg)?,
        Stage::Ranked => corpus
            .filtered(&cfg)?
            .iter()
            .map(|kept| AlignmentSet::from_links(&kept.segment_id, kept.provenance, dedupe_for_ranking(kept)))
            .collect(),
    };
    Ok(write_pharaoh(&sets))
}

fn score(args: &ScoreArgs) -> Result<String> {
    let cfg = args.corpus.metric.resolve()?;
    let corpus = Corpus::load(&args.corpus, &cfg)?;
    let results = corpus.score(&cfg)?;
    let mut config = corpus_echo("score", &args.corpus, &cfg);
    config.extend(bucket_echo(&args.buckets));
    Ok(render_scores(
        &config,
        &results,
        &bucket_by_nalign(&results, &args.buckets.n_align_buckets),
        &bucket_by_length(&results, &args.buckets.length_buckets),
        args.buckets.format.into(),
    ))
}

fn eval_align(args: &EvalAlignArgs) -> Result<String> {
    let segments_path = required(&args.corpus.segments, "segments", "segment file")?;
    let gold_path = required(&args.gold, "gold", "gold alignment")?;
    let (segments, predicted, config) = match &args.pred {
        Some(pred_path) => {
            let segments = with_path(segments_path, parse_segments(open(segments_path)?))?;
            let lines = with_path(pred_path, parse_pharaoh(open(pred_path)?))?;
            let predicted = with_path(pred_path, alignments_for_corpus(lines, &segments, Provenance::External))?;
            let mut config = vec![("command".to_string(), "eval-align".to_string())];
            config.extend(inputs_echo(&[
                ("segments", &args.corpus.segments),
                ("pred", &args.pred),
            ]));
            (segments, predicted, config)
        }
        None => {
            if args.corpus.embeddings.is_none() {
                return Err(
                    UsageError("missing required flag --pred or --embeddings (predicted alignment)".into()).into(),
                );
            }
            let cfg = args.corpus.metric.resolve()?;
            let corpus = Corpus::load(&args.corpus, &cfg)?;
            let predicted = corpus.filtered(&cfg)?;
            (
                corpus.segments,
                predicted,
                corpus_echo("eval-align", &args.corpus, &cfg),
            )
        }
    };
    let mut config = config;
    config.extend(inputs_echo(&[("gold", &args.gold)]));
    let gold = with_path(
        gold_path,
        gold_for_corpus(with_path(gold_path, parse_pharaoh(open(gold_path)?))?, &segments),
    )?;
    let per_segment = predicted
        .iter()
        .zip(&gold)
        .map(|(p, g)| Ok((p.segment_id.clone(), aer(p, g)?)))
        .collect::<synchro_core::Result<Vec<_>>>()?;
    let corpus = aer_corpus(predicted.iter().zip(&gold))?;
    Ok(render_alignment_eval(
        &config,
        &corpus,
        &per_segment,
        args.format.into(),
        args.percent,
    ))
}

fn correlate(args: &CorrelateArgs) -> Result<String> {
    let judgments_path = required(&args.judgments, "judgments", "human scores")?;
    let (results, mut config) = match &args.results {
        Some(path) => {
            let results = with_path(path, parse_result_records(open(path)?))?;
            let mut config = vec![("command".to_string(), "correlate".to_string())];
            config.extend(inputs_echo(&[("results", &args.results)]));
            (results, config)
        }
        None => {
            if args.corpus.segments.is_none() {
                return Err(UsageError("missing required flag --results or --segments (metric scores)".into()).into());
            }
            let cfg = args.corpus.metric.resolve()?;
            let corpus = Corpus::load(&args.corpus, &cfg)?;
            (corpus.score(&cfg)?, corpus_echo("correlate", &args.corpus, &cfg))
        }
    };
    config.extend(inputs_echo(&[("judgments", &args.judgments)]));
    let lengths: Vec<String> = args
        .buckets
        .length_buckets
        .iter()
        .map(LengthBucket::to_string)
        .collect();
    config.push(("length_buckets".into(), lengths.join(",")));

    let judgments = with_path(judgments_path, parse_judgments(open(judgments_path)?))?;
    let known: Vec<&str> = results.iter().map(|r| r.segment_id.as_str()).collect();
    with_path(judgments_path, check_judgment_ids(&judgments, known))?;

    let overall = args
        .metric
        .iter()
        .map(|&field| correlate_with_judgments(&results, &judgments, field))
        .collect::<synchro_core::Result<Vec<_>>>()?;
    let mut breakdown: Vec<(LengthBucket, Vec<_>)> =
        args.buckets.length_buckets.iter().map(|&b| (b, Vec::new())).collect();
    for &field in &args.metric {
        let per_bucket = correlate_by_length(&results, &judgments, field, &args.buckets.length_buckets)?;
        for ((_, row), (_, c)) in breakdown.iter_mut().zip(per_bucket) {
            row.push((field, c));
        }
    }
    Ok(render_correlation(
        &config,
        &overall,
        &breakdown,
        args.buckets.format.into(),
    ))
}

fn report(args: &ReportArgs) -> Result<String> {
    let path = required(&args.results, "results", "records file")?;
    let results = with_path(path, parse_result_records(open(path)?))?;
    let mut config = vec![("command".to_string(), "report".to_string())];
    config.extend(inputs_echo(&[("results", &args.results)]));
    config.extend(bucket_echo(&args.buckets));
    Ok(render_buckets(
        &config,
        &bucket_by_nalign(&results, &args.buckets.n_align_buckets),
        &bucket_by_length(&results, &args.buckets.length_buckets),
        args.buckets.format.into(),
    ))
}
