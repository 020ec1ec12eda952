//! Krippendorff's alpha over a raters × items matrix with missing values.

use std::io::BufRead;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};

/// Ratings run from 0 (unintelligible) to 4.
pub const MAX_RATING: u8 = 4;
const CATEGORIES: usize = MAX_RATING as usize + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Level {
    Nominal,
    Ordinal,
    #[default]
    Interval,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nominal" => Ok(Level::Nominal),
            "ordinal" => Ok(Level::Ordinal),
            "interval" => Ok(Level::Interval),
            _ => Err(Error::Argument(format!("unknown measurement level `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationMatrix {
    ratings: Vec<Vec<Option<u8>>>,
}

impl AnnotationMatrix {
    /// One row per rater, one column per item; `None` is a missing rating.
    pub fn new(ratings: Vec<Vec<Option<u8>>>) -> Result<Self> {
        if ratings.len() < 2 {
            return Err(Error::Annotation("at least two raters are required".into()));
        }
        let items = ratings[0].len();
        if ratings.iter().any(|r| r.len() != items) {
            return Err(Error::Annotation(
                "raters rate different numbers of items".into(),
            ));
        }
        if ratings.iter().flatten().flatten().any(|&v| v > MAX_RATING) {
            return Err(Error::Annotation(format!(
                "ratings must lie in 0..={MAX_RATING}"
            )));
        }
        let m = AnnotationMatrix { ratings };
        if !(0..items).any(|i| m.item(i).count() >= 2) {
            return Err(Error::Annotation("no item has two or more ratings".into()));
        }
        Ok(m)
    }

    pub fn raters(&self) -> usize {
        self.ratings.len()
    }

    pub fn items(&self) -> usize {
        self.ratings[0].len()
    }

    pub fn rows(&self) -> &[Vec<Option<u8>>] {
        &self.ratings
    }

    /// The ratings present for item `i`.
    pub fn item(&self, i: usize) -> impl Iterator<Item = u8> + '_ {
        self.ratings.iter().filter_map(move |r| r[i])
    }
}

/// Reads a tab-separated matrix, one rater per row, `NA` for missing.
pub fn load_annotations<R: BufRead>(reader: R) -> Result<AnnotationMatrix> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split('\t')
            .map(|cell| match cell.trim() {
                "NA" => Ok(None),
                v => v.parse::<u8>().map(Some).map_err(|_| {
                    parse_err("annotation matrix", idx + 1, format!("bad rating `{v}`"))
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    AnnotationMatrix::new(rows)
}

fn coincidences(matrix: &AnnotationMatrix) -> [[f64; CATEGORIES]; CATEGORIES] {
    let mut o = [[0.0; CATEGORIES]; CATEGORIES];
    for i in 0..matrix.items() {
        let mut counts = [0usize; CATEGORIES];
        for v in matrix.item(i) {
            counts[v as usize] += 1;
        }
        let m: usize = counts.iter().sum();
        if m < 2 {
            continue;
        }
        let w = 1.0 / (m - 1) as f64;
        for c in 0..CATEGORIES {
            for k in 0..CATEGORIES {
                let pairs = if c == k {
                    counts[c] * counts[c].saturating_sub(1)
                } else {
                    counts[c] * counts[k]
                };
                o[c][k] += pairs as f64 * w;
            }
        }
    }
    o
}

fn distance(level: Level, c: usize, k: usize, marginals: &[f64; CATEGORIES]) -> f64 {
    match level {
        Level::Nominal => (c != k) as u8 as f64,
        Level::Interval => {
            let d = c as f64 - k as f64;
            d * d
        }
        Level::Ordinal => {
            let (lo, hi) = (c.min(k), c.max(k));
            let span: f64 = marginals[lo..=hi].iter().sum();
            let d = span - (marginals[c] + marginals[k]) / 2.0;
            d * d
        }
    }
}

/// `1 - D_observed / D_expected`, computed from the coincidence matrix.
/// Returns 1 when no disagreement is possible (a single value in use).
pub fn krippendorff_alpha(matrix: &AnnotationMatrix, level: Level) -> f64 {
    let o = coincidences(matrix);
    let mut marginals = [0.0; CATEGORIES];
    for (c, row) in o.iter().enumerate() {
        marginals[c] = row.iter().sum();
    }
    let n: f64 = marginals.iter().sum();

    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..CATEGORIES {
        for k in 0..CATEGORIES {
            let d = distance(level, c, k, &marginals);
            observed += o[c][k] * d;
            expected += marginals[c] * marginals[k] * d;
        }
    }
    if expected == 0.0 {
        return 1.0;
    }
    1.0 - (n - 1.0) * observed / expected
}
