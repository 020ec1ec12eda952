//! Intrinsic quality of frame embeddings.
//!
//! Both scores contrast the mean cosine between a frame vector and its
//! "local" items against the mean cosine to a random sample of "distant"
//! items:
//!
//! * `lex(f)`: local items are the frame's lexical units, distant items
//!   are other word tokens;
//! * `str(f)`: local items are the frames one relation away, distant
//!   items are the remaining frame tokens.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::FRAME_PREFIX;
use crate::embedding::EmbeddingSpace;
use crate::error::{Error, Result};
use crate::inventory::FrameInventory;
use crate::seed::derive_seed;

pub const DEFAULT_SAMPLE_SIZE: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricConfig {
    /// Size of the distant sample, capped at the size of its universe.
    pub sample_size: usize,
    pub seed: u64,
    /// Only count verb lexical units as local words.
    pub verbs_only: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            sample_size: DEFAULT_SAMPLE_SIZE,
            seed: 0,
            verbs_only: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    MissingFrameToken,
    NoLexicalUnits,
    NoNeighbors,
    NoDistantSample,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::MissingFrameToken => "frame token not in vocabulary",
            SkipReason::NoLexicalUnits => "no lexical unit in vocabulary",
            SkipReason::NoNeighbors => "no neighbor frame in vocabulary",
            SkipReason::NoDistantSample => "nothing to sample distant items from",
        })
    }
}

/// A per-frame score, or the reason the frame was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Score {
    Value(f64),
    Skipped(SkipReason),
}

impl Score {
    pub fn value(self) -> Option<f64> {
        match self {
            Score::Value(v) => Some(v),
            Score::Skipped(_) => None,
        }
    }
}

pub fn frame_token(frame: &str) -> String {
    format!("{FRAME_PREFIX}{frame}")
}

fn mean_cosine(space: &EmbeddingSpace, anchor: usize, ids: &[usize]) -> Result<f64> {
    let mut sum = 0.0;
    for &id in ids {
        sum += space.cosine_ids(anchor, id)?;
    }
    Ok(sum / ids.len() as f64)
}

fn contrast(
    space: &EmbeddingSpace,
    anchor: usize,
    local: &[usize],
    universe: &[usize],
    config: &MetricConfig,
    stream: &str,
) -> Result<Score> {
    if universe.is_empty() {
        return Ok(Score::Skipped(SkipReason::NoDistantSample));
    }
    let k = config.sample_size.min(universe.len());
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, stream));
    let mut picks = rand::seq::index::sample(&mut rng, universe.len(), k).into_vec();
    // Summation order must not depend on draw order.
    picks.sort_unstable();
    let distant: Vec<usize> = picks.into_iter().map(|i| universe[i]).collect();
    Ok(Score::Value(
        mean_cosine(space, anchor, local)? - mean_cosine(space, anchor, &distant)?,
    ))
}

/// Lexical score of `frame`.
pub fn lex_similarity(
    space: &EmbeddingSpace,
    inv: &FrameInventory,
    frame: &str,
    config: &MetricConfig,
) -> Result<Score> {
    let all_units = inv.lexical_units_of(frame, false)?;
    let local_units = inv.lexical_units_of(frame, config.verbs_only)?;
    let vocab = space.vocab();
    let Some(anchor) = vocab.id(&frame_token(frame)) else {
        return Ok(Score::Skipped(SkipReason::MissingFrameToken));
    };
    let local: Vec<usize> = local_units
        .iter()
        .filter_map(|lemma| vocab.id(lemma))
        .filter(|&id| !vocab.is_frame(id))
        .collect();
    if local.is_empty() {
        return Ok(Score::Skipped(SkipReason::NoLexicalUnits));
    }
    let universe: Vec<usize> = vocab
        .word_ids()
        .filter(|&id| !all_units.contains(vocab.token(id)))
        .collect();
    contrast(
        space,
        anchor,
        &local,
        &universe,
        config,
        &format!("lex/{frame}"),
    )
}

/// Structural score of `frame`.
pub fn str_similarity(
    space: &EmbeddingSpace,
    inv: &FrameInventory,
    frame: &str,
    config: &MetricConfig,
) -> Result<Score> {
    let neighbors = inv.neighbors(frame)?;
    let vocab = space.vocab();
    let Some(anchor) = vocab.id(&frame_token(frame)) else {
        return Ok(Score::Skipped(SkipReason::MissingFrameToken));
    };
    let local: BTreeSet<usize> = neighbors
        .iter()
        .filter_map(|n| vocab.id(&frame_token(n)))
        .collect();
    if local.is_empty() {
        return Ok(Score::Skipped(SkipReason::NoNeighbors));
    }
    let universe: Vec<usize> = vocab
        .frame_ids()
        .filter(|id| *id != anchor && !local.contains(id))
        .collect();
    let local: Vec<usize> = local.into_iter().collect();
    contrast(
        space,
        anchor,
        &local,
        &universe,
        config,
        &format!("str/{frame}"),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameScores {
    pub frame: String,
    pub lex: Score,
    pub str: Score,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub frames: Vec<FrameScores>,
    pub mean_lex: Option<f64>,
    pub mean_str: Option<f64>,
    pub skipped_lex: usize,
    pub skipped_str: usize,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

impl MetricReport {
    /// Average of the two means; `None` unless both exist.
    pub fn combined(&self) -> Option<f64> {
        Some((self.mean_lex? + self.mean_str?) / 2.0)
    }

    /// Writes `frame<TAB>lex<TAB>str` rows followed by the aggregate block.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        let fmt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.6}"));
        writeln!(out, "frame\tlex\tstr")?;
        for row in &self.frames {
            writeln!(
                out,
                "{}\t{}\t{}",
                row.frame,
                fmt(row.lex.value()),
                fmt(row.str.value())
            )?;
        }
        writeln!(out)?;
        writeln!(out, "mean_lex\t{}", fmt(self.mean_lex))?;
        writeln!(out, "mean_str\t{}", fmt(self.mean_str))?;
        writeln!(out, "mean\t{}", fmt(self.combined()))?;
        writeln!(out, "skipped_lex\t{}", self.skipped_lex)?;
        writeln!(out, "skipped_str\t{}", self.skipped_str)?;
        Ok(())
    }
}

/// Scores every frame of the inventory. Means are unweighted and ignore
/// skipped frames.
pub fn evaluate_space(
    space: &EmbeddingSpace,
    inv: &FrameInventory,
    config: &MetricConfig,
) -> Result<MetricReport> {
    if config.sample_size == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    let mut frames = Vec::with_capacity(inv.len());
    for name in inv.frame_names() {
        frames.push(FrameScores {
            frame: name.to_string(),
            lex: lex_similarity(space, inv, name, config)?,
            str: str_similarity(space, inv, name, config)?,
        });
    }
    let mean_lex = mean(frames.iter().filter_map(|f| f.lex.value()));
    let mean_str = mean(frames.iter().filter_map(|f| f.str.value()));
    if mean_lex.is_none() && mean_str.is_none() {
        return Err(Error::EmptyReport);
    }
    let skipped_lex = frames.iter().filter(|f| f.lex.value().is_none()).count();
    let skipped_str = frames.iter().filter(|f| f.str.value().is_none()).count();
    Ok(MetricReport {
        frames,
        mean_lex,
        mean_str,
        skipped_lex,
        skipped_str,
    })
}
