use std::io::{BufRead, Write};

use crate::corpus::TaggedSentence;
use crate::error::{parse_err, Error, Result};
use crate::inventory::normalize_frame_name;

/// Prefix reserved for frame tokens; word tokens never carry it.
pub const FRAME_PREFIX: &str = "__frame__:";

pub const DEFAULT_RADIUS: usize = 5;

pub fn is_frame_token(token: &str) -> bool {
    token.starts_with(FRAME_PREFIX)
}

/// A center token and the context around it.
///
/// `context` holds the left context followed by the right context;
/// `center_offset` is the number of left-context tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingWindow {
    pub center: String,
    pub context: Vec<String>,
    pub center_offset: usize,
}

impl TrainingWindow {
    pub fn left(&self) -> &[String] {
        &self.context[..self.center_offset]
    }

    pub fn right(&self) -> &[String] {
        &self.context[self.center_offset..]
    }

    /// Window tokens in sentence order, center included.
    pub fn sequence(&self) -> impl Iterator<Item = &str> {
        self.left()
            .iter()
            .map(String::as_str)
            .chain(std::iter::once(self.center.as_str()))
            .chain(self.right().iter().map(String::as_str))
    }

    /// Lowercases word tokens; frame tokens are already normalized.
    pub fn lowercased(mut self) -> Self {
        if !is_frame_token(&self.center) {
            self.center = self.center.to_lowercase();
        }
        for tok in &mut self.context {
            if !is_frame_token(tok) {
                *tok = tok.to_lowercase();
            }
        }
        self
    }
}

/// Takes up to `radius` tokens on each side of the focus verb.
pub fn extract_window(sentence: &TaggedSentence, radius: usize) -> TrainingWindow {
    let focus = sentence.focus_index;
    let start = focus.saturating_sub(radius);
    let end = (focus + 1 + radius).min(sentence.tokens.len());
    let left = &sentence.tokens[start..focus];
    let right = &sentence.tokens[focus + 1..end];
    TrainingWindow {
        center: sentence.tokens[focus].clone(),
        context: left.iter().chain(right).cloned().collect(),
        center_offset: left.len(),
    }
}

/// Replaces the center with the reserved token for `frame`.
pub fn substitute_frame_label(window: &TrainingWindow, frame: &str) -> TrainingWindow {
    TrainingWindow {
        center: format!("{FRAME_PREFIX}{}", normalize_frame_name(frame)),
        ..window.clone()
    }
}

/// Training windows for a tagged corpus, lowercased: the focus-verb
/// window and its frame-substituted copy, plus a lemma-centered copy when
/// `lemma_windows` is set.
pub fn prepare_windows(
    sentences: &[TaggedSentence],
    radius: usize,
    lemma_windows: bool,
) -> Vec<TrainingWindow> {
    let mut out = Vec::with_capacity(sentences.len() * (2 + lemma_windows as usize));
    for s in sentences {
        let w = extract_window(s, radius).lowercased();
        let framed = substitute_frame_label(&w, &s.frame_label);
        let lemma =
            (lemma_windows && !s.focus_lemma.is_empty() && s.focus_lemma != w.center).then(|| {
                TrainingWindow {
                    center: s.focus_lemma.clone(),
                    ..w.clone()
                }
            });
        out.push(w);
        out.push(framed);
        out.extend(lemma);
    }
    out
}

const FORMAT: &str = "WIN1";

/// Writes windows as `center<TAB>left tokens<TAB>right tokens`.
pub fn write_windows<'a, W: Write>(
    windows: impl IntoIterator<Item = &'a TrainingWindow>,
    mut out: W,
) -> Result<()> {
    for w in windows {
        writeln!(
            out,
            "{}\t{}\t{}",
            w.center,
            w.left().join(" "),
            w.right().join(" ")
        )?;
    }
    Ok(())
}

pub fn read_windows<R: BufRead>(reader: R) -> Result<Vec<TrainingWindow>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                FORMAT,
                idx + 1,
                "expected `center<TAB>left<TAB>right`",
            ));
        }
        let center = fields[0].trim();
        if center.is_empty() {
            return Err(parse_err(FORMAT, idx + 1, "empty center"));
        }
        let left: Vec<String> = fields[1].split_whitespace().map(str::to_string).collect();
        let center_offset = left.len();
        let mut context = left;
        context.extend(fields[2].split_whitespace().map(str::to_string));
        out.push(TrainingWindow {
            center: center.to_string(),
            context,
            center_offset,
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}
