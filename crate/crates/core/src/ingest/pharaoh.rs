use std::collections::BTreeSet;
use std::io::BufRead;

use crate::align::{AlignmentSet, Provenance};
use crate::error::{Error, Result};
use crate::ingest::segment::{Segment, Side};

/// A (source word, target word) index pair.
pub type LinkPair = (usize, usize);

/// One parsed Pharaoh line: `i-j` tokens are sure links, `i?j` tokens possible-only links.
/// Every sure link is also a member of `possible`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PharaohLine {
    pub sure: BTreeSet<LinkPair>,
    pub possible: BTreeSet<LinkPair>,
}

impl PharaohLine {
    pub fn into_gold(self, segment_id: impl Into<String>) -> GoldAlignment {
        GoldAlignment {
            segment_id: segment_id.into(),
            sure: self.sure,
            possible: self.possible,
        }
    }

    /// Treats every pair on the line as a predicted link with similarity 1.0.
    pub fn into_alignment(self, segment_id: impl Into<String>, provenance: Provenance) -> AlignmentSet {
        let mut set = AlignmentSet::new(segment_id, provenance);
        for (source, target) in self.possible {
            set.insert(source, target, 1.0);
        }
        set
    }
}

/// Gold sure/possible link sets for one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldAlignment {
    pub segment_id: String,
    pub sure: BTreeSet<LinkPair>,
    pub possible: BTreeSet<LinkPair>,
}

impl GoldAlignment {
    /// Checks `sure ⊆ possible` and that every index is a word of `segment`.
    pub fn validate(&self, segment: &Segment) -> Result<()> {
        if !self.sure.is_subset(&self.possible) {
            return Err(Error::inconsistent(
                &self.segment_id,
                "sure links are not a subset of possible links",
            ));
        }
        check_pairs(&self.segment_id, self.possible.iter().copied(), segment)
    }
}

pub(crate) fn check_pairs(id: &str, pairs: impl Iterator<Item = LinkPair>, segment: &Segment) -> Result<()> {
    let (n_source, n_target) = (segment.words(Side::Source).len(), segment.words(Side::Target).len());
    for (source, target) in pairs {
        if source >= n_source || target >= n_target {
            return Err(Error::inconsistent(
                id,
                format!("link {source}-{target} out of range for {n_source} source / {n_target} target words"),
            ));
        }
    }
    Ok(())
}

fn parse_index(text: &str, token: &str, line: usize) -> Result<usize> {
    text.parse::<usize>().map_err(|_| {
        let reason = if text.starts_with('-') || text.parse::<i64>().is_ok_and(|v| v < 0) {
            "negative index"
        } else {
            "non-integer index"
        };
        Error::malformed(line, format!("{reason} in token {token:?}"))
    })
}

fn parse_token(token: &str, line: usize) -> Result<(LinkPair, bool)> {
    let (left, right, sure) = if let Some((l, r)) = token.split_once('?') {
        (l, r, false)
    } else if token.starts_with('-') {
        return Err(Error::malformed(line, format!("negative index in token {token:?}")));
    } else if let Some((l, r)) = token.split_once('-') {
        (l, r, true)
    } else {
        return Err(Error::malformed(line, format!("token {token:?} is not i-j or i?j")));
    };
    if left.is_empty() || right.is_empty() {
        return Err(Error::malformed(line, format!("token {token:?} is not i-j or i?j")));
    }
    Ok((
        (parse_index(left, token, line)?, parse_index(right, token, line)?),
        sure,
    ))
}

/// Parses a Pharaoh file, one line per segment. Empty lines are segments without links.
pub fn parse_pharaoh<R: BufRead>(reader: R) -> Result<Vec<PharaohLine>> {
    let mut lines = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let mut parsed = PharaohLine::default();
        for token in line.split_whitespace() {
            let (pair, sure) = parse_token(token, line_no)?;
            if sure {
                parsed.sure.insert(pair);
            }
            parsed.possible.insert(pair);
        }
        lines.push(parsed);
    }
    Ok(lines)
}

fn check_line_count(lines: usize, corpus: &[Segment]) -> Result<()> {
    if lines != corpus.len() {
        return Err(Error::inconsistent(
            "<corpus>",
            format!(
                "alignment file has {lines} lines but corpus has {} segments",
                corpus.len()
            ),
        ));
    }
    Ok(())
}

/// Keys gold lines by the corpus segment at the same position and validates indices.
pub fn gold_for_corpus(lines: Vec<PharaohLine>, corpus: &[Segment]) -> Result<Vec<GoldAlignment>> {
    check_line_count(lines.len(), corpus)?;
    lines
        .into_iter()
        .zip(corpus)
        .map(|(line, segment)| {
            let gold = line.into_gold(&segment.id);
            gold.validate(segment)?;
            Ok(gold)
        })
        .collect()
}

/// Keys predicted lines by the corpus segment at the same position and validates indices.
pub fn alignments_for_corpus(
    lines: Vec<PharaohLine>,
    corpus: &[Segment],
    provenance: Provenance,
) -> Result<Vec<AlignmentSet>> {
    check_line_count(lines.len(), corpus)?;
    lines
        .into_iter()
        .zip(corpus)
        .map(|(line, segment)| {
            let set = line.into_alignment(&segment.id, provenance);
            set.validate(segment)?;
            Ok(set)
        })
        .collect()
}

fn join_line<'a>(tokens: impl Iterator<Item = (LinkPair, &'a str)>) -> String {
    tokens
        .map(|((s, t), sep)| format!("{s}{sep}{t}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Writes predicted alignments, one line per set, links sorted by (source, target).
/// Similarities are not representable in the format and are dropped.
pub fn write_pharaoh<'a>(alignments: impl IntoIterator<Item = &'a AlignmentSet>) -> String {
    let mut out = String::new();
    for set in alignments {
        out.push_str(&join_line(set.pairs().map(|p| (p, "-"))));
        out.push('\n');
    }
    out
}

/// Writes gold alignments: sure links as `i-j`, possible-only links as `i?j`.
pub fn write_gold<'a>(gold: impl IntoIterator<Item = &'a GoldAlignment>) -> String {
    let mut out = String::new();
    for g in gold {
        let tokens = g
            .possible
            .iter()
            .map(|&p| (p, if g.sure.contains(&p) { "-" } else { "?" }));
        out.push_str(&join_line(tokens));
        out.push('\n');
    }
    out
}
