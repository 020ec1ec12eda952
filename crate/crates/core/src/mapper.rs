//! Conceptual mappings as frame-vector offsets, and lexical generation of
//! metaphoric verb substitutions.
//!
//! A mapping from a target frame to a source frame is the offset
//! `E_source - E_target`. Adding it to the vector of a target-domain verb
//! and taking the nearest word yields a source-domain replacement, which
//! is inflected like the original verb and spliced back in.

use std::collections::{BTreeSet, HashSet};
use std::io::BufRead;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::corpus::MappingFrequencyTable;
use crate::corpus::{parse_ftc_fields, TaggedSentence};
use crate::embedding::EmbeddingSpace;
use crate::error::{parse_err, Error, Result};
use crate::inflect::inflect;
use crate::inventory::{normalize_frame_name, FrameInventory};
use crate::metrics::frame_token;

pub const DEFAULT_CANDIDATES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptualMapping {
    pub target_frame: String,
    pub source_frame: String,
    pub offset: Vec<f64>,
}

pub fn compute_mapping(
    space: &EmbeddingSpace,
    target_frame: &str,
    source_frame: &str,
) -> Result<ConceptualMapping> {
    let target_frame = normalize_frame_name(target_frame);
    let source_frame = normalize_frame_name(source_frame);
    let target = space.vector(&frame_token(&target_frame))?;
    let source = space.vector(&frame_token(&source_frame))?;
    let offset = source.iter().zip(target).map(|(s, t)| s - t).collect();
    Ok(ConceptualMapping {
        target_frame,
        source_frame,
        offset,
    })
}

/// Nearest word tokens to `E_verb + m`.
pub fn map_verb(
    space: &EmbeddingSpace,
    mapping: &ConceptualMapping,
    verb_lemma: &str,
    k: usize,
    exclusions: &HashSet<&str>,
) -> Result<Vec<(String, f64)>> {
    let verb = space.vector(verb_lemma)?;
    if mapping.offset.len() != verb.len() {
        return Err(Error::Dimension {
            expected: verb.len(),
            actual: mapping.offset.len(),
        });
    }
    let query: Vec<f64> = verb
        .iter()
        .zip(&mapping.offset)
        .map(|(v, m)| v + m)
        .collect();
    space.nearest(&query, k, exclusions)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRequest {
    pub sentence: TaggedSentence,
    pub target_frame: String,
    pub source_frame: String,
    pub candidates: usize,
    pub exclude_input: bool,
    /// When set, only these tokens may be proposed as replacements.
    pub allowed: Option<HashSet<String>>,
}

impl GenerationRequest {
    pub fn new(sentence: TaggedSentence, target_frame: &str, source_frame: &str) -> Self {
        GenerationRequest {
            sentence,
            target_frame: normalize_frame_name(target_frame),
            source_frame: normalize_frame_name(source_frame),
            candidates: DEFAULT_CANDIDATES,
            exclude_input: false,
            allowed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationResult {
    /// Ranked replacement lemmas with their cosine scores.
    pub candidates: Vec<(String, f64)>,
    pub surface: String,
    pub tokens: Vec<String>,
}

impl GenerationResult {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Reorders candidates using the sentence context.
///
/// No implementation ships with the library; candidates are otherwise
/// taken in cosine order.
pub trait CandidateReranker {
    fn rerank(
        &self,
        sentence: &TaggedSentence,
        candidates: Vec<(String, f64)>,
    ) -> Vec<(String, f64)>;
}

/// The embedding lookup key for the focus verb: its lemma, or the
/// lowercased surface token when the lemma is out of vocabulary.
fn verb_key(space: &EmbeddingSpace, sentence: &TaggedSentence) -> Result<String> {
    let lemma = sentence.focus_lemma.to_lowercase();
    if space.vocab().id(&lemma).is_some() {
        return Ok(lemma);
    }
    let surface = sentence.focus_token().to_lowercase();
    if space.vocab().id(&surface).is_some() {
        return Ok(surface);
    }
    Err(Error::UnknownToken(sentence.focus_lemma.clone()))
}

fn match_case(original: &str, replacement: &str) -> String {
    if original.chars().next().is_some_and(char::is_uppercase) {
        let mut chars = replacement.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => String::new(),
        }
    } else {
        replacement.to_string()
    }
}

pub fn generate(request: &GenerationRequest, space: &EmbeddingSpace) -> Result<GenerationResult> {
    generate_with(request, space, None)
}

pub fn generate_with(
    request: &GenerationRequest,
    space: &EmbeddingSpace,
    reranker: Option<&dyn CandidateReranker>,
) -> Result<GenerationResult> {
    let sentence = &request.sentence;
    let mapping = compute_mapping(space, &request.target_frame, &request.source_frame)?;
    let key = verb_key(space, sentence)?;
    let lemma = sentence.focus_lemma.to_lowercase();
    let surface_lower = sentence.focus_token().to_lowercase();

    let mut exclusions: HashSet<&str> = HashSet::new();
    if request.exclude_input {
        exclusions.extend([key.as_str(), lemma.as_str(), surface_lower.as_str()]);
    }
    if let Some(allowed) = &request.allowed {
        exclusions.extend(
            space
                .vocab()
                .word_ids()
                .map(|id| space.vocab().token(id))
                .filter(|t| !allowed.contains(*t)),
        );
    }
    let mut candidates = map_verb(space, &mapping, &key, request.candidates, &exclusions)?;
    if let Some(r) = reranker {
        candidates = r.rerank(sentence, candidates);
    }
    let (best, _) = candidates.first().ok_or(Error::NoCandidate)?;

    let original = sentence.focus_token();
    let surface = if *best == key || *best == lemma || *best == surface_lower {
        original.to_string()
    } else {
        match_case(original, &inflect(best, sentence.focus_morph))
    };
    let mut tokens = sentence.tokens.clone();
    tokens[sentence.focus_index] = surface.clone();
    Ok(GenerationResult {
        candidates,
        surface,
        tokens,
    })
}

/// Parses a batch line: five FTC1 columns then `target_frame<TAB>source_frame`.
pub fn parse_generation_line(line: &str, line_no: usize) -> Result<GenerationRequest> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 7 {
        return Err(parse_err(
            "generation batch",
            line_no,
            format!("expected 7 fields, found {}", fields.len()),
        ));
    }
    let sentence = parse_ftc_fields(&fields[..5], line_no)?;
    let (target, source) = (fields[5].trim(), fields[6].trim());
    if target.is_empty() || source.is_empty() {
        return Err(parse_err("generation batch", line_no, "empty frame name"));
    }
    Ok(GenerationRequest::new(sentence, target, source))
}

pub fn parse_generation_batch<R: BufRead>(reader: R) -> Result<Vec<GenerationRequest>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_generation_line(line, idx + 1)?);
    }
    Ok(out)
}

/// `input<TAB>output<TAB>candidates` with candidates comma-joined.
pub fn format_generation(request: &GenerationRequest, result: &GenerationResult) -> String {
    let cands: Vec<&str> = result.candidates.iter().map(|(c, _)| c.as_str()).collect();
    format!(
        "{}\t{}\t{}",
        request.sentence.text(),
        result.text(),
        cands.join(",")
    )
}

/// Picks uniformly among the sources whose count equals the (lower)
/// median count for `target`.
pub fn select_rare_mapping<R: Rng + ?Sized>(
    table: &MappingFrequencyTable,
    target: &str,
    rng: &mut R,
) -> Result<String> {
    let target = normalize_frame_name(target);
    let sources = table.sources_for(&target);
    if sources.is_empty() {
        return Err(Error::NoMapping(target));
    }
    let mut counts: Vec<u64> = sources.iter().map(|&(_, c)| c).collect();
    counts.sort_unstable();
    let median = counts[(counts.len() - 1) / 2];
    let pool: Vec<&str> = sources
        .iter()
        .filter(|&&(_, c)| c == median)
        .map(|&(s, _)| s)
        .collect();
    Ok(pool.choose(rng).expect("median is attained").to_string())
}

/// Picks uniformly among inventory frames never observed as a source for
/// `target`, excluding the target itself.
pub fn select_unseen_mapping<R: Rng + ?Sized>(
    table: &MappingFrequencyTable,
    inv: &FrameInventory,
    target: &str,
    rng: &mut R,
) -> Result<String> {
    let target = normalize_frame_name(target);
    let observed: BTreeSet<&str> = table
        .sources_for(&target)
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    let pool: Vec<&str> = inv
        .frame_names()
        .filter(|f| *f != target && !observed.contains(f))
        .collect();
    pool.choose(rng)
        .map(|s| s.to_string())
        .ok_or(Error::MappingsExhausted(target))
}
