//! Frame-tagged sentences and the paired literal/metaphoric data built on
//! top of them.
//!
//! FTC1 holds one record per line, tab separated:
//! `tokens<TAB>focus_index<TAB>frame_label<TAB>focus_lemma<TAB>morph_tag`,
//! where `tokens` is the pre-tokenized sentence joined by single spaces.

mod paired;
mod window;

pub use paired::{
    build_mapping_table, emit_control_record, load_mapping_table, parse_control_record, parse_pfc,
    parse_pfc_line, save_mapping_table, symbol_overlap_filter, ControlRecord,
    LiteralMetaphoricPair, MappingFrequencyTable, SYMBOL_COUNT,
};
pub use window::{
    extract_window, is_frame_token, prepare_windows, read_windows, substitute_frame_label,
    write_windows, TrainingWindow, DEFAULT_RADIUS, FRAME_PREFIX,
};

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::inventory::normalize_frame_name;

const FORMAT: &str = "FTC1";

/// Inflectional form of a focus verb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MorphTag {
    Base,
    ThirdSingular,
    Past,
    PastParticiple,
    Gerund,
}

impl MorphTag {
    pub const ALL: [MorphTag; 5] = [
        MorphTag::Base,
        MorphTag::ThirdSingular,
        MorphTag::Past,
        MorphTag::PastParticiple,
        MorphTag::Gerund,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MorphTag::Base => "base",
            MorphTag::ThirdSingular => "3sg",
            MorphTag::Past => "past",
            MorphTag::PastParticiple => "past-participle",
            MorphTag::Gerund => "gerund",
        }
    }
}

impl fmt::Display for MorphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MorphTag {
    type Err = Error;

    /// Also accepts the long spelling `3rd-person-singular`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "3rd-person-singular" {
            return Ok(MorphTag::ThirdSingular);
        }
        MorphTag::ALL
            .into_iter()
            .find(|tag| tag.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown morph tag `{s}`")))
    }
}

/// A sentence with one frame-evoking focus verb.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub focus_index: usize,
    pub frame_label: String,
    pub focus_lemma: String,
    pub focus_morph: MorphTag,
}

impl TaggedSentence {
    pub fn new(
        tokens: Vec<String>,
        focus_index: usize,
        frame_label: &str,
        focus_lemma: &str,
        focus_morph: MorphTag,
    ) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Argument("sentence has no tokens".into()));
        }
        if tokens
            .iter()
            .any(|t| t.is_empty() || t.contains(char::is_whitespace))
        {
            return Err(Error::Argument(
                "tokens must be non-empty and whitespace-free".into(),
            ));
        }
        if focus_index >= tokens.len() {
            return Err(Error::Argument(format!(
                "focus index {focus_index} out of range for {} tokens",
                tokens.len()
            )));
        }
        let frame_label = normalize_frame_name(frame_label);
        if frame_label.is_empty() {
            return Err(Error::Argument("empty frame label".into()));
        }
        Ok(TaggedSentence {
            tokens,
            focus_index,
            frame_label,
            focus_lemma: focus_lemma.trim().to_lowercase(),
            focus_morph,
        })
    }

    pub fn focus_token(&self) -> &str {
        &self.tokens[self.focus_index]
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }

    /// Renders the record as one FTC1 line (without newline).
    pub fn to_ftc(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.text(),
            self.focus_index,
            self.frame_label,
            self.focus_lemma,
            self.focus_morph
        )
    }
}

/// Parses the five FTC1 columns of a single record.
pub(crate) fn parse_ftc_fields(fields: &[&str], line: usize) -> Result<TaggedSentence> {
    if fields.len() != 5 {
        return Err(parse_err(
            FORMAT,
            line,
            format!("expected 5 fields, found {}", fields.len()),
        ));
    }
    let tokens: Vec<String> = fields[0].split_whitespace().map(str::to_string).collect();
    let focus_index: usize = fields[1]
        .trim()
        .parse()
        .map_err(|_| parse_err(FORMAT, line, format!("bad focus index `{}`", fields[1])))?;
    let morph: MorphTag = fields[4]
        .trim()
        .parse()
        .map_err(|e: Error| parse_err(FORMAT, line, e.to_string()))?;
    TaggedSentence::new(tokens, focus_index, fields[2], fields[3], morph)
        .map_err(|e| parse_err(FORMAT, line, e.to_string()))
}

pub fn parse_ftc_line(line: &str, line_no: usize) -> Result<TaggedSentence> {
    let fields: Vec<&str> = line.split('\t').collect();
    parse_ftc_fields(&fields, line_no)
}

/// Reads every FTC1 record; blank lines and `#` comments are skipped.
pub fn parse_ftc<R: BufRead>(reader: R) -> Result<Vec<TaggedSentence>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_ftc_line(line, idx + 1)?);
    }
    Ok(out)
}
