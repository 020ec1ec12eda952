//! Paired literal/metaphoric sentences: the overlap filter applied to their
//! symbolic readings, control-code serialization, and mapping counts.
//!
//! PFC1 places two FTC1 records on one line separated by `<TAB>|<TAB>`,
//! literal side first.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use crate::corpus::{parse_ftc_fields, TaggedSentence};
use crate::error::{parse_err, Error, Result};
use crate::inventory::normalize_frame_name;

pub const SYMBOL_COUNT: usize = 5;

const EOT: &str = "<EOT>";
const VERB: &str = "<V>";

/// A literal sentence (target domain) and its metaphoric rewrite (source domain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralMetaphoricPair {
    pub literal: TaggedSentence,
    pub metaphoric: TaggedSentence,
}

impl LiteralMetaphoricPair {
    pub fn target_frame(&self) -> &str {
        &self.literal.frame_label
    }

    pub fn source_frame(&self) -> &str {
        &self.metaphoric.frame_label
    }
}

pub fn parse_pfc_line(line: &str, line_no: usize) -> Result<LiteralMetaphoricPair> {
    let (lit, met) = line
        .split_once("\t|\t")
        .ok_or_else(|| parse_err("PFC1", line_no, "missing `<TAB>|<TAB>` separator"))?;
    let lit: Vec<&str> = lit.split('\t').collect();
    let met: Vec<&str> = met.split('\t').collect();
    Ok(LiteralMetaphoricPair {
        literal: parse_ftc_fields(&lit, line_no)?,
        metaphoric: parse_ftc_fields(&met, line_no)?,
    })
}

pub fn parse_pfc<R: BufRead>(reader: R) -> Result<Vec<LiteralMetaphoricPair>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_pfc_line(line, idx + 1)?);
    }
    Ok(out)
}

/// True when at least `threshold` of the symbols agree.
///
/// Symbols are trimmed, lowercased and deduplicated before comparison.
pub fn symbol_overlap_filter<S: AsRef<str>>(a: &[S], b: &[S], threshold: usize) -> Result<bool> {
    if a.len() != SYMBOL_COUNT || b.len() != SYMBOL_COUNT {
        return Err(Error::Argument(format!(
            "expected {SYMBOL_COUNT} symbols per side, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let norm = |xs: &[S]| -> BTreeSet<String> {
        xs.iter()
            .map(|s| s.as_ref().trim().to_lowercase())
            .collect()
    };
    let overlap = norm(a).intersection(&norm(b)).count();
    Ok(overlap >= threshold)
}

/// The fields recoverable from a control record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlRecord {
    pub source: String,
    pub target: String,
    pub tokens: Vec<String>,
    pub focus_index: usize,
}

/// Serializes the literal side with both frames as control codes:
/// `source <EOT> prefix <V> focus : target <V> suffix`.
pub fn emit_control_record(pair: &LiteralMetaphoricPair) -> String {
    let lit = &pair.literal;
    let focus = lit.focus_index;
    let mut parts: Vec<&str> = vec![pair.source_frame(), EOT];
    parts.extend(lit.tokens[..focus].iter().map(String::as_str));
    parts.extend([
        VERB,
        lit.tokens[focus].as_str(),
        ":",
        pair.target_frame(),
        VERB,
    ]);
    parts.extend(lit.tokens[focus + 1..].iter().map(String::as_str));
    parts.join(" ")
}

pub fn parse_control_record(record: &str) -> Result<ControlRecord> {
    let bad = |msg: &str| Error::Argument(format!("malformed control record: {msg}"));
    let toks: Vec<&str> = record.split_whitespace().collect();
    if toks.len() < 6 {
        return Err(bad("too few tokens"));
    }
    if toks[1] != EOT {
        return Err(bad("missing <EOT> after source frame"));
    }
    let first_v = toks[2..]
        .iter()
        .position(|&t| t == VERB)
        .map(|p| p + 2)
        .ok_or_else(|| bad("missing first <V>"))?;
    // focus, ':', target, '<V>'
    if toks.len() < first_v + 5 || toks[first_v + 2] != ":" || toks[first_v + 4] != VERB {
        return Err(bad("expected `<V> focus : target <V>`"));
    }
    let prefix = &toks[2..first_v];
    let mut tokens: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    tokens.push(toks[first_v + 1].to_string());
    tokens.extend(toks[first_v + 5..].iter().map(|s| s.to_string()));
    Ok(ControlRecord {
        source: toks[0].to_string(),
        target: toks[first_v + 3].to_string(),
        tokens,
        focus_index: prefix.len(),
    })
}

/// Counts of observed (target frame, source frame) mappings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingFrequencyTable {
    counts: BTreeMap<(String, String), u64>,
}

impl MappingFrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, target: &str, source: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .counts
            .entry((normalize_frame_name(target), normalize_frame_name(source)))
            .or_insert(0) += count;
    }

    pub fn count(&self, target: &str, source: &str) -> u64 {
        self.counts
            .get(&(target.to_string(), source.to_string()))
            .copied()
            .unwrap_or(0)
    }

    /// Number of distinct (target, source) pairs.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.counts
            .iter()
            .map(|((t, s), &c)| (t.as_str(), s.as_str(), c))
    }

    pub fn targets(&self) -> BTreeSet<&str> {
        self.counts.keys().map(|(t, _)| t.as_str()).collect()
    }

    /// Observed sources for `target` with their counts, ordered by source name.
    pub fn sources_for(&self, target: &str) -> Vec<(&str, u64)> {
        self.counts
            .range((target.to_string(), String::new())..)
            .take_while(|((t, _), _)| t == target)
            .map(|((_, s), &c)| (s.as_str(), c))
            .collect()
    }
}

pub fn build_mapping_table(pairs: &[LiteralMetaphoricPair]) -> MappingFrequencyTable {
    let mut table = MappingFrequencyTable::new();
    for pair in pairs {
        table.add(pair.target_frame(), pair.source_frame(), 1);
    }
    table
}

/// Writes `target<TAB>source<TAB>count` rows.
pub fn save_mapping_table<W: Write>(table: &MappingFrequencyTable, mut out: W) -> Result<()> {
    for (t, s, c) in table.iter() {
        writeln!(out, "{t}\t{s}\t{c}")?;
    }
    Ok(())
}

pub fn load_mapping_table<R: BufRead>(reader: R) -> Result<MappingFrequencyTable> {
    let mut table = MappingFrequencyTable::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                "MFT",
                idx + 1,
                "expected `target<TAB>source<TAB>count`",
            ));
        }
        let count: u64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| parse_err("MFT", idx + 1, format!("bad count `{}`", fields[2])))?;
        if count == 0 {
            return Err(parse_err("MFT", idx + 1, "count must be positive"));
        }
        table.add(fields[0], fields[1], count);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::MorphTag;
    use proptest::prelude::*;

    fn sent(text: &str, focus: usize, frame: &str) -> TaggedSentence {
        let toks = text.split_whitespace().map(str::to_string).collect();
        TaggedSentence::new(toks, focus, frame, "x", MorphTag::Past).unwrap()
    }

    fn pair(target: &str, source: &str) -> LiteralMetaphoricPair {
        LiteralMetaphoricPair {
            literal: sent("a b", 0, target),
            metaphoric: sent("a c", 0, source),
        }
    }

    #[test]
    fn symbol_filter_example() {
        let met = ["loss", "loneliness", "despair", "sadness", "sorrow"];
        let lit = ["loss", "loneliness", "despair", "sadness", "life"];
        assert!(symbol_overlap_filter(&met, &lit, 4).unwrap());
        assert!(!symbol_overlap_filter(&met, &lit, 5).unwrap());
        assert!(symbol_overlap_filter(&met, &met, 5).unwrap());
        let other = ["a", "b", "c", "d", "e"];
        assert!(!symbol_overlap_filter(&met, &other, 1).unwrap());
        assert!(symbol_overlap_filter(&met[..4], &lit[..4], 4).is_err());
    }

    #[test]
    fn symbol_filter_normalizes_case() {
        let a = ["Loss", "loneliness", "despair", "sadness", "sorrow"];
        let b = ["loss ", "LONELINESS", "despair", "sadness", "sorrow"];
        assert!(symbol_overlap_filter(&a, &b, 5).unwrap());
    }

    #[test]
    fn control_record_example() {
        let p = LiteralMetaphoricPair {
            literal: sent("The party ended as soon as she left.", 2, "cause_to_end"),
            metaphoric: sent("The party died as soon as she left.", 2, "death"),
        };
        let rec = emit_control_record(&p);
        assert_eq!(
            rec,
            "death <EOT> The party <V> ended : cause_to_end <V> as soon as she left."
        );
        let parsed = parse_control_record(&rec).unwrap();
        assert_eq!(parsed.source, "death");
        assert_eq!(parsed.target, "cause_to_end");
        assert_eq!(parsed.tokens, p.literal.tokens);
        assert_eq!(parsed.focus_index, 2);
    }

    #[test]
    fn control_record_focus_at_start() {
        let p = LiteralMetaphoricPair {
            literal: sent("Ended early", 0, "t"),
            metaphoric: sent("Died early", 0, "s"),
        };
        let rec = emit_control_record(&p);
        assert_eq!(rec, "s <EOT> <V> Ended : t <V> early");
        assert_eq!(parse_control_record(&rec).unwrap().focus_index, 0);
    }

    #[test]
    fn malformed_control_records() {
        assert!(parse_control_record("a b c").is_err());
        assert!(parse_control_record("s EOT x <V> y : t <V> z").is_err());
        assert!(parse_control_record("s <EOT> x <V> y ; t <V> z").is_err());
    }

    #[test]
    fn mapping_table_counts() {
        assert!(build_mapping_table(&[]).is_empty());
        let t = build_mapping_table(&[pair("A", "B"), pair("A", "B"), pair("A", "C")]);
        assert_eq!(t.count("a", "b"), 2);
        assert_eq!(t.count("a", "c"), 1);
        assert_eq!(t.len(), 2);
        assert_eq!(t.total(), 3);
        assert_eq!(t.sources_for("a"), vec![("b", 2), ("c", 1)]);
        assert!(t.sources_for("b").is_empty());
    }

    #[test]
    fn mapping_table_file_round_trip() {
        let t = build_mapping_table(&[pair("A", "B"), pair("A", "B"), pair("x", "C")]);
        let mut buf = Vec::new();
        save_mapping_table(&t, &mut buf).unwrap();
        assert_eq!(load_mapping_table(buf.as_slice()).unwrap(), t);
        assert!(load_mapping_table("a\tb\t0\n".as_bytes()).is_err());
    }

    #[test]
    fn pfc_line() {
        let line =
            "The party ended\t2\tcause_to_end\tend\tpast\t|\tThe party died\t2\tdeath\tdie\tpast";
        let p = parse_pfc_line(line, 1).unwrap();
        assert_eq!(p.target_frame(), "cause_to_end");
        assert_eq!(p.source_frame(), "death");
        assert!(parse_pfc_line("a\t0\tf\ta\tbase", 7).is_err());
    }

    proptest! {
        #[test]
        fn control_record_round_trip(
            words in prop::collection::vec("[a-zA-Z.,']{1,8}", 1..15),
            focus_seed in 0usize..100,
            src in "[a-z_]{1,10}",
            tgt in "[a-z_]{1,10}",
        ) {
            let focus = focus_seed % words.len();
            let lit = TaggedSentence::new(words.clone(), focus, &tgt, "x", MorphTag::Base).unwrap();
            let met = TaggedSentence::new(words.clone(), focus, &src, "x", MorphTag::Base).unwrap();
            let p = LiteralMetaphoricPair { literal: lit, metaphoric: met };
            let r = parse_control_record(&emit_control_record(&p)).unwrap();
            prop_assert_eq!(r.source, src);
            prop_assert_eq!(r.target, tgt);
            prop_assert_eq!(r.tokens, words);
            prop_assert_eq!(r.focus_index, focus);
        }

        #[test]
        fn symbol_filter_symmetric(
            a in prop::collection::vec("[a-c]{1,2}", 5),
            b in prop::collection::vec("[a-c]{1,2}", 5),
            th in 0usize..6,
        ) {
            prop_assert_eq!(
                symbol_overlap_filter(&a, &b, th).unwrap(),
                symbol_overlap_filter(&b, &a, th).unwrap()
            );
        }

        #[test]
        fn table_total_matches_pairs(maps in prop::collection::vec((0u8..4, 0u8..4), 0..40)) {
            let pairs: Vec<_> = maps
                .iter()
                .map(|(t, s)| pair(&format!("t{t}"), &format!("s{s}")))
                .collect();
            prop_assert_eq!(build_mapping_table(&pairs).total(), pairs.len() as u64);
        }
    }
}
