use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::BufRead;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which half of a segment pair a word or matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Source => f.write_str("source"),
            Side::Target => f.write_str("target"),
        }
    }
}

/// Half-open range of subword positions owned by one word. Serialized as `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct SubwordSpan {
    pub start: usize,
    pub end: usize,
}

impl SubwordSpan {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, subword: usize) -> bool {
        (self.start..self.end).contains(&subword)
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }
}

impl From<[usize; 2]> for SubwordSpan {
    fn from([start, end]: [usize; 2]) -> Self {
        Self { start, end }
    }
}

impl From<SubwordSpan> for [usize; 2] {
    fn from(span: SubwordSpan) -> Self {
        [span.start, span.end]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Word {
    pub surface: String,
    /// UPOS-style tag. Words without a tag are never filtered by POS.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
    pub is_function: bool,
    pub span: SubwordSpan,
}

impl Word {
    pub fn new(surface: impl Into<String>, pos: Option<&str>, is_function: bool, span: SubwordSpan) -> Self {
        Self {
            surface: surface.into(),
            pos: pos.map(str::to_owned),
            is_function,
            span,
        }
    }

    /// True when the word counts as a function word under `function_pos`.
    pub fn is_function_under(&self, function_pos: &BTreeSet<String>) -> bool {
        self.is_function || self.pos.as_ref().is_some_and(|p| function_pos.contains(p))
    }
}

/// One aligned source/target unit with tokenization metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub id: String,
    pub source: Vec<Word>,
    pub target: Vec<Word>,
}

impl Segment {
    pub fn words(&self, side: Side) -> &[Word] {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    /// Number of subword positions on `side`; positions in gaps between spans count.
    pub fn subword_count(&self, side: Side) -> usize {
        self.words(side).last().map_or(0, |w| w.span.end)
    }

    /// Maps each subword position on `side` to the word owning it.
    pub fn subword_owners(&self, side: Side) -> Vec<Option<usize>> {
        let mut owners = vec![None; self.subword_count(side)];
        for (index, word) in self.words(side).iter().enumerate() {
            for slot in &mut owners[word.span.range()] {
                *slot = Some(index);
            }
        }
        owners
    }

    /// Checks every structural invariant of a segment.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        for side in [Side::Source, Side::Target] {
            let words = self.words(side);
            if words.is_empty() {
                return Err(format!("empty {side} word list"));
            }
            let mut previous_end = 0;
            for (index, word) in words.iter().enumerate() {
                let span = word.span;
                if span.is_empty() {
                    return Err(format!(
                        "{side} word {index} ({:?}): empty span [{},{})",
                        word.surface, span.start, span.end
                    ));
                }
                if span.start < previous_end {
                    return Err(format!(
                        "{side} word {index} ({:?}): span [{},{}) overlaps or precedes previous word",
                        word.surface, span.start, span.end
                    ));
                }
                previous_end = span.end;
            }
        }
        Ok(())
    }

    /// Words whose POS tag is in `function_pos` but which are not flagged as function words.
    pub fn function_flag_conflicts(&self, function_pos: &BTreeSet<String>) -> Vec<(Side, usize)> {
        let mut conflicts = Vec::new();
        for side in [Side::Source, Side::Target] {
            for (index, word) in self.words(side).iter().enumerate() {
                let tagged_function = word.pos.as_ref().is_some_and(|p| function_pos.contains(p));
                if tagged_function && !word.is_function {
                    conflicts.push((side, index));
                }
            }
        }
        conflicts
    }
}

/// Reads line-delimited segment records. Blank lines are skipped; line numbers in errors are 1-based.
pub fn parse_segments<R: BufRead>(reader: R) -> Result<Vec<Segment>> {
    let mut segments = Vec::new();
    let mut seen = HashSet::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let segment: Segment = serde_json::from_str(&line).map_err(|e| Error::malformed(line_no, e.to_string()))?;
        segment
            .validate()
            .map_err(|message| Error::malformed(line_no, format!("segment {}: {message}", segment.id)))?;
        if !seen.insert(segment.id.clone()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: segment.id,
            });
        }
        segments.push(segment);
    }
    Ok(segments)
}

/// Serializes segments in the same line-delimited format `parse_segments` reads.
pub fn write_segments(segments: &[Segment]) -> String {
    let mut out = String::new();
    for segment in segments {
        out.push_str(&serde_json::to_string(segment).expect("segment serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const APPLES: &str = r#"{"id":"s1","source":[{"surface":"I","is_function":false,"span":[0,1]},{"surface":"ate","is_function":false,"span":[1,2]},{"surface":"apples","is_function":false,"span":[2,3]},{"surface":"yesterday","is_function":false,"span":[3,5]}],"target":[{"surface":"私は","is_function":false,"span":[0,2]},{"surface":"昨日","is_function":false,"span":[2,3]},{"surface":"りんごを","is_function":false,"span":[3,5]},{"surface":"食べました","is_function":false,"span":[5,7]}]}"#;

    #[test]
    fn parses_worked_example() {
        let segments = parse_segments(APPLES.as_bytes()).unwrap();
        assert_eq!(segments.len(), 1);
        let seg = &segments[0];
        assert_eq!(seg.source.len(), 4);
        assert_eq!(seg.target.len(), 4);
        assert_eq!(seg.subword_count(Side::Source), 5);
        assert_eq!(seg.subword_count(Side::Target), 7);
        assert_eq!(seg.source[3].span, SubwordSpan::new(3, 5));
    }

    #[test]
    fn rejects_empty_span() {
        let bad = APPLES.replace("[1,2]", "[2,2]");
        let err = parse_segments(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("empty span"), "{err}");
        assert!(err.to_string().starts_with("line 1"), "{err}");
    }

    #[test]
    fn rejects_duplicate_id() {
        let input = format!("{APPLES}\n\n{APPLES}\n");
        match parse_segments(input.as_bytes()).unwrap_err() {
            Error::DuplicateId { line, id } => {
                assert_eq!(line, 3);
                assert_eq!(id, "s1");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_overlapping_spans() {
        let bad = APPLES.replace("\"span\":[2,3]", "\"span\":[1,3]");
        let err = parse_segments(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("overlaps"), "{err}");
    }

    #[test]
    fn rejects_empty_word_list() {
        let bad = r#"{"id":"x","source":[],"target":[{"surface":"a","is_function":false,"span":[0,1]}]}"#;
        let err = parse_segments(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("empty source word list"), "{err}");
    }

    #[test]
    fn rejects_unknown_field_and_bad_json() {
        let bad = APPLES.replace("\"surface\":\"I\"", "\"surface\":\"I\",\"lemma\":\"I\"");
        assert!(parse_segments(bad.as_bytes()).is_err());
        let err = parse_segments("ok\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 1, .. }));
    }

    #[test]
    fn gaps_between_spans_are_allowed() {
        let mut seg = parse_segments(APPLES.as_bytes()).unwrap().remove(0);
        for (word, span) in seg.source.iter_mut().zip([[0, 1], [2, 3], [3, 4], [4, 6]]) {
            word.span = span.into();
        }
        assert!(seg.validate().is_ok());
        assert_eq!(seg.subword_count(Side::Source), 6);
        assert_eq!(seg.subword_owners(Side::Source)[1], None);
        assert_eq!(seg.subword_owners(Side::Source)[5], Some(3));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let segments = parse_segments(APPLES.as_bytes()).unwrap();
        let text = write_segments(&segments);
        assert_eq!(parse_segments(text.as_bytes()).unwrap(), segments);
    }

    #[test]
    fn flags_function_tag_conflicts() {
        let mut seg = parse_segments(APPLES.as_bytes()).unwrap().remove(0);
        seg.source[0].pos = Some("PRON".into());
        let set: BTreeSet<String> = ["PRON".to_string()].into();
        assert_eq!(seg.function_flag_conflicts(&set), vec![(Side::Source, 0)]);
        seg.source[0].is_function = true;
        assert!(seg.function_flag_conflicts(&set).is_empty());
    }
}
