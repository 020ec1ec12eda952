use std::collections::HashMap;

use crate::corpus::{is_frame_token, TrainingWindow};
use crate::error::{Error, Result};

/// Token/id bijection with corpus frequencies.
///
/// Ids are assigned by descending frequency, ties broken by token order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
    total: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from tokens in id order with their counts.
    pub fn from_counts(entries: Vec<(String, u64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let mut index = HashMap::with_capacity(entries.len());
        let mut tokens = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        for (id, (tok, count)) in entries.into_iter().enumerate() {
            if tok.is_empty() || tok.contains(char::is_whitespace) {
                return Err(Error::Argument(format!("invalid token `{tok}`")));
            }
            if index.insert(tok.clone(), id).is_some() {
                return Err(Error::Argument(format!("duplicate token `{tok}`")));
            }
            tokens.push(tok);
            counts.push(count);
        }
        let total = counts.iter().sum();
        Ok(Vocabulary {
            tokens,
            counts,
            index,
            total,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: usize) -> &str {
        &self.tokens[id]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn total_count(&self) -> u64 {
        self.total
    }

    pub fn is_frame(&self, id: usize) -> bool {
        is_frame_token(&self.tokens[id])
    }

    pub fn word_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&id| !self.is_frame(id))
    }

    pub fn frame_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&id| self.is_frame(id))
    }
}

/// Counts every token in the windows and drops word tokens seen fewer
/// than `min_count` times. Frame tokens are always kept.
pub fn build_vocab<'a>(
    windows: impl IntoIterator<Item = &'a TrainingWindow>,
    min_count: u64,
) -> Result<Vocabulary> {
    let mut freq: HashMap<&str, u64> = HashMap::new();
    for w in windows {
        for tok in w.sequence() {
            *freq.entry(tok).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(String, u64)> = freq
        .into_iter()
        .filter(|(tok, c)| *c >= min_count || is_frame_token(tok))
        .map(|(tok, c)| (tok.to_string(), c))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Vocabulary::from_counts(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(center: &str, ctx: &[&str]) -> TrainingWindow {
        TrainingWindow {
            center: center.into(),
            context: ctx.iter().map(|s| s.to_string()).collect(),
            center_offset: 0,
        }
    }

    #[test]
    fn rare_words_dropped_frames_kept() {
        let ws = vec![
            window("__frame__:f", &["x", "y"]),
            window("y", &["x", "y"]),
            window("y", &["x", "y"]),
        ];
        let v = build_vocab(&ws, 5).unwrap();
        assert!(v.id("x").is_none());
        assert!(v.id("y").is_some());
        assert!(v.id("__frame__:f").is_some());
        assert_eq!(v.count(v.id("y").unwrap()), 5);
    }

    #[test]
    fn ids_follow_frequency() {
        let ws = vec![window("b", &["a", "a", "c"])];
        let v = build_vocab(&ws, 1).unwrap();
        assert_eq!(v.tokens(), ["a", "b", "c"]);
        assert_eq!(v.total_count(), 4);
    }

    #[test]
    fn empty_stream_is_an_error() {
        let ws: Vec<TrainingWindow> = Vec::new();
        assert!(matches!(build_vocab(&ws, 1), Err(Error::EmptyVocabulary)));
        let ws = vec![window("a", &[])];
        assert!(matches!(build_vocab(&ws, 2), Err(Error::EmptyVocabulary)));
    }

    #[test]
    fn every_token_is_word_xor_frame() {
        let ws = vec![window("__frame__:f", &["x", "__frame__:g", "z"])];
        let v = build_vocab(&ws, 1).unwrap();
        let words: Vec<_> = v.word_ids().collect();
        let frames: Vec<_> = v.frame_ids().collect();
        assert_eq!(words.len() + frames.len(), v.len());
        assert!(words.iter().all(|w| !frames.contains(w)));
    }
}
