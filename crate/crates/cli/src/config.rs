//! Metric settings from flags, an optional TOML file and built-in defaults, in that
//! order of precedence.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::Deserialize;
use synchro_core::report::ConfigEcho;
use synchro_core::{CountRule, MetricConfig, Mode};

/// Keys accepted in a `--config` file. All are optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub theta: Option<f64>,
    pub function_pos: Option<Vec<String>>,
    pub drop_function_words: Option<bool>,
    pub mode: Option<Mode>,
    pub min_n_align: Option<usize>,
    pub n_align_cmp: Option<CountRule>,
    pub theta_in_combined: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text)
            .map_err(|e| synchro_core::Error::Config(format!("{}: {e}", path.display())))
            .map_err(Into::into)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct MetricArgs {
    /// Similarity threshold; links below it are dropped [default: 0.71]
    #[arg(long)]
    pub theta: Option<f64>,

    /// Minimum number of aligned words for a segment to be scored [default: 2]
    #[arg(long)]
    pub min_n_align: Option<usize>,

    /// How --min-n-align is compared: at-least or more-than [default: at-least]
    #[arg(long, value_name = "RULE")]
    pub n_align_cmp: Option<CountRule>,

    /// synchro (greedy, filtered) or combined (greedy ∩ external) [default: synchro]
    #[arg(long)]
    pub mode: Option<Mode>,

    /// Comma-separated UPOS tags treated as function words
    #[arg(long, value_delimiter = ',', value_name = "TAGS")]
    pub function_pos: Option<Vec<String>>,

    /// Keep links from function words
    #[arg(long)]
    pub keep_function_words: bool,

    /// Apply --theta in combined mode too
    #[arg(long)]
    pub theta_in_combined: bool,

    /// TOML file with metric settings; flags override it
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

impl MetricArgs {
    pub fn resolve(&self) -> Result<MetricConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let mut cfg = MetricConfig::default();
        if let Some(theta) = self.theta.or(file.theta) {
            cfg.filter.theta = theta;
        }
        if let Some(tags) = self.function_pos.clone().or(file.function_pos) {
            cfg.filter.function_pos = tags
                .into_iter()
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect::<BTreeSet<_>>();
        }
        cfg.filter.drop_function_words = if self.keep_function_words {
            false
        } else {
            file.drop_function_words.unwrap_or(true)
        };
        if let Some(mode) = self.mode.or(file.mode) {
            cfg.mode = mode;
        }
        if let Some(min) = self.min_n_align.or(file.min_n_align) {
            cfg.min_n_align = min;
        }
        if let Some(rule) = self.n_align_cmp.or(file.n_align_cmp) {
            cfg.count_rule = rule;
        }
        cfg.theta_in_combined = self.theta_in_combined || file.theta_in_combined.unwrap_or(false);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Effective settings in a fixed key order.
pub fn echo(cfg: &MetricConfig) -> ConfigEcho {
    let tags: Vec<&str> = cfg.filter.function_pos.iter().map(String::as_str).collect();
    vec![
        ("mode".into(), cfg.mode.to_string()),
        ("theta".into(), cfg.filter.theta.to_string()),
        ("theta_in_combined".into(), cfg.theta_in_combined.to_string()),
        ("drop_function_words".into(), cfg.filter.drop_function_words.to_string()),
        ("function_pos".into(), tags.join(",")),
        ("min_n_align".into(), cfg.min_n_align.to_string()),
        ("n_align_cmp".into(), cfg.count_rule.to_string()),
    ]
}
