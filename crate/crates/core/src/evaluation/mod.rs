//! Automatic metrics for generated metaphors, computed over externally
//! supplied sentence embeddings.
//!
//! For a literal input `L`, gold metaphor `M` and generated output `G`:
//!
//! * `dis = 1 - cos(M, G)`
//! * `rel = |cos(L, M) - cos(L, G)|`
//!
//! plus the fraction of outputs matching the gold exactly after light
//! normalization.

mod agreement;
mod stats;

pub use agreement::{krippendorff_alpha, load_annotations, AnnotationMatrix, Level, MAX_RATING};
pub use stats::{paired_t_test, TTest};

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::embedding::cosine_of;
use crate::error::{parse_err, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceEmbedding {
    pub id: String,
    pub surface: String,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalTriple {
    pub literal: SentenceEmbedding,
    pub gold: SentenceEmbedding,
    pub generated: SentenceEmbedding,
}

impl EvalTriple {
    pub fn new(
        literal: SentenceEmbedding,
        gold: SentenceEmbedding,
        generated: SentenceEmbedding,
    ) -> Result<Self> {
        let dim = literal.vector.len();
        for v in [&gold.vector, &generated.vector] {
            if v.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    actual: v.len(),
                });
            }
        }
        Ok(EvalTriple {
            literal,
            gold,
            generated,
        })
    }
}

fn checked_cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            actual: b.len(),
        });
    }
    cosine_of(a, b).ok_or_else(|| Error::ZeroVector("sentence embedding".into()))
}

/// Cosine distance between gold and generated sentence vectors.
pub fn dis_metric(gold: &[f64], generated: &[f64]) -> Result<f64> {
    Ok(1.0 - checked_cosine(gold, generated)?)
}

/// Difference between `cos(L, M)` and `cos(L, G)`; absolute unless
/// `signed` is set.
pub fn rel_metric_with(
    literal: &[f64],
    gold: &[f64],
    generated: &[f64],
    signed: bool,
) -> Result<f64> {
    let d = checked_cosine(literal, gold)? - checked_cosine(literal, generated)?;
    Ok(if signed { d } else { d.abs() })
}

pub fn rel_metric(literal: &[f64], gold: &[f64], generated: &[f64]) -> Result<f64> {
    rel_metric_with(literal, gold, generated, false)
}

/// Lowercases, collapses whitespace and strips trailing punctuation.
pub fn normalize_surface(s: &str) -> String {
    let collapsed = s
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase();
    collapsed
        .trim_end_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace())
        .to_string()
}

pub fn exact_match(gold: &str, generated: &str) -> bool {
    normalize_surface(gold) == normalize_surface(generated)
}

pub fn exact_match_rate<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<f64> {
    let (hits, n) = pairs.into_iter().fold((0usize, 0usize), |(h, n), (g, o)| {
        (h + exact_match(g, o) as usize, n + 1)
    });
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(hits as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub count: usize,
    pub dis: f64,
    pub rel: f64,
    pub exact_match: f64,
}

impl EvalReport {
    /// Average of mean `dis` and mean `rel`.
    pub fn mean(&self) -> f64 {
        (self.dis + self.rel) / 2.0
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n\tdis\trel\tmean\texact")?;
        writeln!(
            out,
            "{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}",
            self.count,
            self.dis,
            self.rel,
            self.mean(),
            self.exact_match
        )?;
        Ok(())
    }
}

pub fn aggregate_report(triples: &[EvalTriple]) -> Result<EvalReport> {
    aggregate_report_with(triples, false)
}

/// Per-item metrics averaged over the set.
pub fn aggregate_report_with(triples: &[EvalTriple], signed_rel: bool) -> Result<EvalReport> {
    if triples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut dis = 0.0;
    let mut rel = 0.0;
    for t in triples {
        dis += dis_metric(&t.gold.vector, &t.generated.vector)?;
        rel += rel_metric_with(
            &t.literal.vector,
            &t.gold.vector,
            &t.generated.vector,
            signed_rel,
        )?;
    }
    let n = triples.len() as f64;
    let exact = exact_match_rate(
        triples
            .iter()
            .map(|t| (t.gold.surface.as_str(), t.generated.surface.as_str())),
    )?;
    Ok(EvalReport {
        count: triples.len(),
        dis: dis / n,
        rel: rel / n,
        exact_match: exact,
    })
}

const SEB1: &str = "SEB1";

/// Reads SEB1: a `<count> <dim>` header, then `id<TAB>surface<TAB>v1 ... vdim`.
pub fn load_sentence_embeddings<R: BufRead>(reader: R) -> Result<Vec<SentenceEmbedding>> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(l) => l?,
        None => return Err(parse_err(SEB1, 1, "missing header")),
    };
    let nums: Vec<&str> = header.split_whitespace().collect();
    if nums.len() != 2 {
        return Err(parse_err(SEB1, 1, "expected `<count> <dim>`"));
    }
    let count: usize = nums[0]
        .parse()
        .map_err(|_| parse_err(SEB1, 1, "bad count"))?;
    let dim: usize = nums[1]
        .parse()
        .map_err(|_| parse_err(SEB1, 1, "bad dimension"))?;

    let mut out = Vec::with_capacity(count);
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if out.len() == count {
            return Err(parse_err(SEB1, line_no, "more rows than declared"));
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                SEB1,
                line_no,
                "expected `id<TAB>surface<TAB>vector`",
            ));
        }
        let vector = fields[2]
            .split_whitespace()
            .map(|x| {
                x.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(SEB1, line_no, format!("bad value `{x}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vector.len() != dim {
            return Err(parse_err(
                SEB1,
                line_no,
                format!("expected {dim} values, found {}", vector.len()),
            ));
        }
        out.push(SentenceEmbedding {
            id: fields[0].to_string(),
            surface: fields[1].to_string(),
            vector,
        });
    }
    if out.len() != count {
        return Err(parse_err(
            SEB1,
            out.len() + 2,
            format!("expected {count} rows, found {}", out.len()),
        ));
    }
    Ok(out)
}

/// Groups embeddings with ids `<item>:L`, `<item>:M`, `<item>:G` into
/// triples, ordered by item id.
pub fn assemble_triples(embeddings: Vec<SentenceEmbedding>) -> Result<Vec<EvalTriple>> {
    type Slots = [Option<SentenceEmbedding>; 3];
    let mut items: BTreeMap<String, Slots> = BTreeMap::new();
    for e in embeddings {
        let (item, role) =
            e.id.rsplit_once(':')
                .ok_or_else(|| Error::Argument(format!("id `{}` lacks a `:L|M|G` suffix", e.id)))?;
        let slot = match role {
            "L" => 0,
            "M" => 1,
            "G" => 2,
            _ => {
                return Err(Error::Argument(format!(
                    "id `{}` has unknown role `{role}`",
                    e.id
                )))
            }
        };
        let entry = items.entry(item.to_string()).or_default();
        if entry[slot].is_some() {
            return Err(Error::Argument(format!("duplicate id `{}`", e.id)));
        }
        entry[slot] = Some(e);
    }
    items
        .into_iter()
        .map(|(item, [l, m, g])| match (l, m, g) {
            (Some(l), Some(m), Some(g)) => EvalTriple::new(l, m, g),
            _ => Err(Error::Argument(format!(
                "item `{item}` is missing L, M or G"
            ))),
        })
        .collect()
}
