use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::embedding::Vocabulary;
use crate::error::{parse_err, Error, Result};

/// Joint vector space over word tokens and frame tokens.
///
/// `input` rows are the embeddings used for every query; `output` rows are
/// the context vectors touched only by training.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpace {
    dim: usize,
    pub(crate) input: Vec<f64>,
    pub(crate) output: Vec<f64>,
    vocab: Vocabulary,
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine of two vectors; `None` when either has zero norm.
pub fn cosine_of(a: &[f64], b: &[f64]) -> Option<f64> {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    if a == b {
        return Some(1.0);
    }
    Some((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

impl EmbeddingSpace {
    /// Wraps row-major input vectors; output vectors start at zero.
    pub fn from_rows(vocab: Vocabulary, dim: usize, input: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        if input.len() != vocab.len() * dim {
            return Err(Error::Dimension {
                expected: vocab.len() * dim,
                actual: input.len(),
            });
        }
        if input.iter().any(|x| !x.is_finite()) {
            return Err(Error::Argument(
                "embedding contains non-finite values".into(),
            ));
        }
        let output = vec![0.0; input.len()];
        Ok(EmbeddingSpace {
            dim,
            input,
            output,
            vocab,
        })
    }

    /// Like [`from_rows`](Self::from_rows) but with explicit output vectors,
    /// e.g. to resume training.
    pub fn with_output(mut self, output: Vec<f64>) -> Result<Self> {
        if output.len() != self.input.len() {
            return Err(Error::Dimension {
                expected: self.input.len(),
                actual: output.len(),
            });
        }
        if output.iter().any(|x| !x.is_finite()) {
            return Err(Error::Argument(
                "embedding contains non-finite values".into(),
            ));
        }
        self.output = output;
        Ok(self)
    }

    /// Convenience constructor from `(token, vector)` pairs.
    pub fn from_vectors<S: Into<String>>(rows: Vec<(S, Vec<f64>)>) -> Result<Self> {
        let dim = rows.first().map(|(_, v)| v.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * dim);
        let mut entries = Vec::with_capacity(rows.len());
        for (tok, v) in rows {
            if v.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    actual: v.len(),
                });
            }
            data.extend(v);
            entries.push((tok.into(), 0));
        }
        Self::from_rows(Vocabulary::from_counts(entries)?, dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn row(&self, id: usize) -> &[f64] {
        &self.input[id * self.dim..(id + 1) * self.dim]
    }

    pub fn output_row(&self, id: usize) -> &[f64] {
        &self.output[id * self.dim..(id + 1) * self.dim]
    }

    pub fn input_matrix(&self) -> &[f64] {
        &self.input
    }

    pub fn output_matrix(&self) -> &[f64] {
        &self.output
    }

    pub fn vector(&self, token: &str) -> Result<&[f64]> {
        self.vocab
            .id(token)
            .map(|id| self.row(id))
            .ok_or_else(|| Error::UnknownToken(token.to_string()))
    }

    pub fn cosine(&self, a: &str, b: &str) -> Result<f64> {
        let va = self.vector(a)?;
        let vb = self.vector(b)?;
        cosine_of(va, vb).ok_or_else(|| Error::ZeroVector(format!("{a} / {b}")))
    }

    pub(crate) fn cosine_ids(&self, a: usize, b: usize) -> Result<f64> {
        cosine_of(self.row(a), self.row(b)).ok_or_else(|| {
            Error::ZeroVector(format!("{} / {}", self.vocab.token(a), self.vocab.token(b)))
        })
    }

    /// Top `k` word tokens by cosine to `query`, skipping `exclusions`.
    /// Frame tokens are never returned.
    pub fn nearest(
        &self,
        query: &[f64],
        k: usize,
        exclusions: &HashSet<&str>,
    ) -> Result<Vec<(String, f64)>> {
        self.nearest_with(query, k, exclusions, false)
    }

    /// Exhaustive scan; ties are broken by ascending token id. Rows with
    /// zero norm are skipped.
    pub fn nearest_with(
        &self,
        query: &[f64],
        k: usize,
        exclusions: &HashSet<&str>,
        include_frames: bool,
    ) -> Result<Vec<(String, f64)>> {
        if k == 0 {
            return Err(Error::Argument("k must be at least 1".into()));
        }
        if query.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                actual: query.len(),
            });
        }
        let qn = norm(query);
        if qn == 0.0 {
            return Err(Error::ZeroVector("query".into()));
        }
        let mut scored: Vec<(usize, f64)> = (0..self.len())
            .filter(|&id| include_frames || !self.vocab.is_frame(id))
            .filter(|&id| !exclusions.contains(self.vocab.token(id)))
            .filter_map(|id| {
                let row = self.row(id);
                let rn = norm(row);
                (rn > 0.0).then(|| (id, (dot(query, row) / (qn * rn)).clamp(-1.0, 1.0)))
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.truncate(k);
        Ok(scored
            .into_iter()
            .map(|(id, c)| (self.vocab.token(id).to_string(), c))
            .collect())
    }
}

const FORMAT: &str = "EMB1";

/// Writes the input vectors as EMB1 text.
pub fn save_embeddings<W: Write>(space: &EmbeddingSpace, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", space.len(), space.dim())?;
    let mut line = String::new();
    for id in 0..space.len() {
        line.clear();
        line.push_str(space.vocab().token(id));
        for x in space.row(id) {
            use std::fmt::Write as _;
            write!(line, " {x:.6}").unwrap();
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn load_embeddings<R: BufRead>(reader: R) -> Result<EmbeddingSpace> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(l) => l?,
        None => return Err(parse_err(FORMAT, 1, "missing header")),
    };
    let mut parts = header.split_whitespace();
    let (count, dim) = match (parts.next(), parts.next(), parts.next()) {
        (Some(c), Some(d), None) => (
            c.parse::<usize>()
                .map_err(|_| parse_err(FORMAT, 1, "bad vocabulary size"))?,
            d.parse::<usize>()
                .map_err(|_| parse_err(FORMAT, 1, "bad dimension"))?,
        ),
        _ => return Err(parse_err(FORMAT, 1, "expected `<vocab_size> <dim>`")),
    };
    if dim == 0 {
        return Err(parse_err(FORMAT, 1, "dimension must be positive"));
    }

    let mut entries = Vec::with_capacity(count);
    let mut data = Vec::with_capacity(count * dim);
    for row in 0..count {
        let line_no = row + 2;
        let line = match lines.next() {
            Some(l) => l?,
            None => {
                return Err(parse_err(
                    FORMAT,
                    line_no,
                    format!("expected {count} rows, found {row}"),
                ))
            }
        };
        let mut fields = line.split_whitespace();
        let token = fields
            .next()
            .ok_or_else(|| parse_err(FORMAT, line_no, "empty row"))?;
        let before = data.len();
        for f in fields {
            let x: f64 = f
                .parse()
                .map_err(|_| parse_err(FORMAT, line_no, format!("bad value `{f}`")))?;
            if !x.is_finite() {
                return Err(parse_err(FORMAT, line_no, "non-finite value"));
            }
            data.push(x);
        }
        if data.len() - before != dim {
            return Err(parse_err(
                FORMAT,
                line_no,
                format!("expected {dim} values, found {}", data.len() - before),
            ));
        }
        entries.push((token.to_string(), 0));
    }
    for (extra, line) in lines.enumerate() {
        if !line?.trim().is_empty() {
            return Err(parse_err(
                FORMAT,
                count + 2 + extra,
                "more rows than declared",
            ));
        }
    }
    let vocab =
        Vocabulary::from_counts(entries).map_err(|e| parse_err(FORMAT, 1, e.to_string()))?;
    EmbeddingSpace::from_rows(vocab, dim, data)
}
