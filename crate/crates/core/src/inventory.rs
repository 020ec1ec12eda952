//! Frame inventory: frames, the lexical units that evoke them, and the
//! relations linking frames to one another.
//!
//! Inventories are read from FIV1, a tab-separated line format:
//!
//! ```text
//! # comment
//! F  killing
//! L  kill  v
//! L  slay  v
//! F  death
//! L  die  v
//! R  killing  uses  death
//! ```
//!
//! All `F`/`L` blocks come first, `R` lines after them.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use crate::error::{parse_err, Error, Result};

const FORMAT: &str = "FIV1";

/// Lowercases a frame name and replaces inner whitespace with underscores.
pub fn normalize_frame_name(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
        .to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexicalUnit {
    pub lemma: String,
    /// Coarse part-of-speech tag, e.g. `v` or `n`.
    pub pos: String,
}

impl LexicalUnit {
    pub fn new(lemma: &str, pos: &str) -> Self {
        LexicalUnit {
            lemma: lemma.trim().to_lowercase(),
            pos: pos.trim().to_lowercase(),
        }
    }

    pub fn is_verb(&self) -> bool {
        matches!(self.pos.as_str(), "v" | "verb")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub name: String,
    pub lexical_units: BTreeSet<LexicalUnit>,
}

impl Frame {
    pub fn new(name: &str) -> Self {
        Frame {
            name: normalize_frame_name(name),
            lexical_units: BTreeSet::new(),
        }
    }

    pub fn with_units<'a>(name: &str, units: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut frame = Frame::new(name);
        frame
            .lexical_units
            .extend(units.into_iter().map(|(l, p)| LexicalUnit::new(l, p)));
        frame
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameRelation {
    pub from_frame: String,
    pub relation_type: String,
    pub to_frame: String,
}

impl FrameRelation {
    pub fn new(from: &str, relation_type: &str, to: &str) -> Self {
        FrameRelation {
            from_frame: normalize_frame_name(from),
            relation_type: relation_type.trim().to_lowercase(),
            to_frame: normalize_frame_name(to),
        }
    }
}

/// Frames keyed by name, plus the relation list.
///
/// Relations keep their direction, but neighborhoods ignore it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameInventory {
    frames: BTreeMap<String, Frame>,
    relations: Vec<FrameRelation>,
    adjacency: BTreeMap<String, BTreeSet<String>>,
}

impl FrameInventory {
    pub fn new(frames: Vec<Frame>, relations: Vec<FrameRelation>) -> Result<Self> {
        let mut by_name = BTreeMap::new();
        for frame in frames {
            if frame.name.is_empty() {
                return Err(Error::Argument("frame name is empty".into()));
            }
            if frame.lexical_units.iter().any(|lu| lu.lemma.is_empty()) {
                return Err(Error::Argument(format!(
                    "frame `{}` has a lexical unit with an empty lemma",
                    frame.name
                )));
            }
            let name = frame.name.clone();
            if by_name.insert(name.clone(), frame).is_some() {
                return Err(Error::Argument(format!("duplicate frame `{name}`")));
            }
        }

        let mut adjacency: BTreeMap<String, BTreeSet<String>> = by_name
            .keys()
            .map(|k| (k.clone(), BTreeSet::new()))
            .collect();
        for rel in &relations {
            for end in [&rel.from_frame, &rel.to_frame] {
                if !by_name.contains_key(end) {
                    return Err(Error::DanglingRelation(end.clone()));
                }
            }
            if rel.from_frame != rel.to_frame {
                adjacency
                    .get_mut(&rel.from_frame)
                    .unwrap()
                    .insert(rel.to_frame.clone());
                adjacency
                    .get_mut(&rel.to_frame)
                    .unwrap()
                    .insert(rel.from_frame.clone());
            }
        }

        Ok(FrameInventory {
            frames: by_name,
            relations,
            adjacency,
        })
    }

    pub fn frames(&self) -> impl Iterator<Item = &Frame> {
        self.frames.values()
    }

    pub fn frame_names(&self) -> impl Iterator<Item = &str> {
        self.frames.keys().map(String::as_str)
    }

    pub fn frame(&self, name: &str) -> Option<&Frame> {
        self.frames.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.frames.contains_key(name)
    }

    pub fn relations(&self) -> &[FrameRelation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn lexical_unit_count(&self) -> usize {
        self.frames.values().map(|f| f.lexical_units.len()).sum()
    }

    /// Frames one relation away from `frame`, in either direction.
    pub fn neighbors(&self, frame: &str) -> Result<&BTreeSet<String>> {
        self.adjacency
            .get(frame)
            .ok_or_else(|| Error::UnknownFrame(frame.to_string()))
    }

    /// Lemmas evoking `frame`, optionally restricted to verbs.
    pub fn lexical_units_of(&self, frame: &str, verbs_only: bool) -> Result<BTreeSet<&str>> {
        let frame = self
            .frames
            .get(frame)
            .ok_or_else(|| Error::UnknownFrame(frame.to_string()))?;
        Ok(frame
            .lexical_units
            .iter()
            .filter(|lu| !verbs_only || lu.is_verb())
            .map(|lu| lu.lemma.as_str())
            .collect())
    }
}

pub fn load_inventory<R: BufRead>(reader: R) -> Result<FrameInventory> {
    let mut frames: Vec<Frame> = Vec::new();
    let mut relations = Vec::new();
    let mut seen = BTreeSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[0] {
            "F" => {
                if !relations.is_empty() {
                    return Err(parse_err(FORMAT, line_no, "frame declared after relations"));
                }
                if fields.len() != 2 {
                    return Err(parse_err(FORMAT, line_no, "expected `F<TAB>name`"));
                }
                let frame = Frame::new(fields[1]);
                if frame.name.is_empty() {
                    return Err(parse_err(FORMAT, line_no, "empty frame name"));
                }
                if !seen.insert(frame.name.clone()) {
                    return Err(parse_err(
                        FORMAT,
                        line_no,
                        format!("duplicate frame `{}`", frame.name),
                    ));
                }
                frames.push(frame);
            }
            "L" => {
                if fields.len() != 3 {
                    return Err(parse_err(FORMAT, line_no, "expected `L<TAB>lemma<TAB>pos`"));
                }
                if !relations.is_empty() {
                    return Err(parse_err(FORMAT, line_no, "lexical unit after relations"));
                }
                let lu = LexicalUnit::new(fields[1], fields[2]);
                if lu.lemma.is_empty() {
                    return Err(parse_err(FORMAT, line_no, "empty lemma"));
                }
                match frames.last_mut() {
                    Some(frame) => {
                        frame.lexical_units.insert(lu);
                    }
                    None => {
                        return Err(parse_err(FORMAT, line_no, "lexical unit before any frame"))
                    }
                }
            }
            "R" => {
                if fields.len() != 4 {
                    return Err(parse_err(
                        FORMAT,
                        line_no,
                        "expected `R<TAB>from<TAB>type<TAB>to`",
                    ));
                }
                relations.push(FrameRelation::new(fields[1], fields[2], fields[3]));
            }
            other => {
                return Err(parse_err(
                    FORMAT,
                    line_no,
                    format!("unknown record type `{other}`"),
                ))
            }
        }
    }

    FrameInventory::new(frames, relations)
}

pub fn save_inventory<W: Write>(inv: &FrameInventory, mut out: W) -> Result<()> {
    for frame in inv.frames() {
        writeln!(out, "F\t{}", frame.name)?;
        for lu in &frame.lexical_units {
            writeln!(out, "L\t{}\t{}", lu.lemma, lu.pos)?;
        }
    }
    for rel in inv.relations() {
        writeln!(
            out,
            "R\t{}\t{}\t{}",
            rel.from_frame, rel.relation_type, rel.to_frame
        )?;
    }
    Ok(())
}
