//! Bundled data files against hand counts and independent tallies.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufReader;

use approx::assert_abs_diff_eq;
use cmgen::corpus::{
    build_mapping_table, extract_window, load_mapping_table, parse_ftc, parse_pfc,
    save_mapping_table, substitute_frame_label,
};
use cmgen::embedding::{load_embeddings, save_embeddings};
use cmgen::inventory::{load_inventory, save_inventory};
use cmgen::mapper::parse_generation_batch;

use common::read_data;

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[test]
fn mini_inventory_hand_counts() {
    let inv = load_inventory(BufReader::new(read_data("mini/inventory.fiv").as_bytes())).unwrap();
    assert_eq!(inv.len(), 12);
    assert_eq!(inv.lexical_unit_count(), 20);
    assert_eq!(inv.relations().len(), 8);

    assert_eq!(
        inv.neighbors("motion").unwrap(),
        &set(&["self_motion", "change_position_on_a_scale", "fire_burning"])
    );
    assert_eq!(
        inv.neighbors("death").unwrap(),
        &set(&["killing", "cause_to_end"])
    );
    assert_eq!(
        inv.neighbors("argument").unwrap(),
        &set(&["communication", "experiencer_focus"])
    );
    assert_eq!(inv.neighbors("killing").unwrap(), &set(&["death", "war"]));
    assert!(inv.neighbors("building").unwrap().is_empty());

    let killing: Vec<&str> = inv
        .lexical_units_of("killing", true)
        .unwrap()
        .into_iter()
        .collect();
    assert_eq!(killing, ["kill", "slay"]);
    assert!(inv
        .lexical_units_of("experiencer_focus", false)
        .unwrap()
        .is_empty());
}

#[test]
fn inventory_round_trips() {
    let inv = load_inventory(BufReader::new(read_data("mini/inventory.fiv").as_bytes())).unwrap();
    let mut out = Vec::new();
    save_inventory(&inv, &mut out).unwrap();
    let again = load_inventory(BufReader::new(out.as_slice())).unwrap();
    assert_eq!(inv, again);
}

#[test]
fn mini_corpus_hand_counts() {
    let sentences = parse_ftc(BufReader::new(read_data("mini/corpus.ftc").as_bytes())).unwrap();
    assert_eq!(sentences.len(), 30);
    let mut per_frame: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &sentences {
        *per_frame.entry(s.frame_label.as_str()).or_default() += 1;
    }
    assert_eq!(per_frame.len(), 10);
    assert!(per_frame.values().all(|&n| n == 3), "{per_frame:?}");
}

#[test]
fn died_window_by_hand() {
    let sentences = parse_ftc(BufReader::new(read_data("mini/corpus.ftc").as_bytes())).unwrap();
    let s = sentences
        .iter()
        .find(|s| s.text() == "The house where love had died")
        .unwrap();
    let w = extract_window(s, 5);
    assert_eq!(w.center, "died");
    assert_eq!(w.left(), ["The", "house", "where", "love", "had"]);
    assert!(w.right().is_empty());
    let framed = substitute_frame_label(&w, &s.frame_label);
    assert_eq!(framed.center, "__frame__:death");
    assert_eq!(framed.context, w.context);
}

#[test]
fn mapping_table_matches_independent_tally() {
    let text = read_data("mini/pairs.pfc");
    let mut tally: BTreeMap<(String, String), u64> = BTreeMap::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split('\t').collect();
        *tally
            .entry((f[2].to_string(), f[8].to_string()))
            .or_default() += 1;
    }

    let pairs = parse_pfc(BufReader::new(text.as_bytes())).unwrap();
    assert_eq!(pairs.len(), 30);
    let table = build_mapping_table(&pairs);
    assert_eq!(table.len(), tally.len());
    assert_eq!(table.len(), 17);
    assert_eq!(table.total(), 30);
    for ((t, s), n) in &tally {
        assert_eq!(table.count(t, s), *n, "{t} -> {s}");
    }
    assert_eq!(table.count("argument", "war"), 5);
    assert_eq!(table.count("cause_to_end", "death"), 4);

    let mut out = Vec::new();
    save_mapping_table(&table, &mut out).unwrap();
    assert_eq!(
        load_mapping_table(BufReader::new(out.as_slice())).unwrap(),
        table
    );
}

#[test]
fn pairs_differ_only_at_focus() {
    let pairs = parse_pfc(BufReader::new(read_data("mini/pairs.pfc").as_bytes())).unwrap();
    for p in &pairs {
        let (l, m) = (&p.literal, &p.metaphoric);
        assert_eq!(l.tokens.len(), m.tokens.len());
        assert_eq!(l.focus_index, m.focus_index);
        let diffs: Vec<usize> = (0..l.tokens.len())
            .filter(|&i| l.tokens[i] != m.tokens[i])
            .collect();
        assert_eq!(diffs, [l.focus_index], "{}", l.text());
    }
}

#[test]
fn generation_requests_parse() {
    let reqs =
        parse_generation_batch(BufReader::new(read_data("mini/requests.tsv").as_bytes())).unwrap();
    assert_eq!(reqs.len(), 7);
    assert_eq!(reqs[0].target_frame, "argument");
    assert_eq!(reqs[0].source_frame, "war");
}

#[test]
fn loads_100_by_50_space() {
    let text = read_data("fixtures/space_100x50.emb");
    let space = load_embeddings(BufReader::new(text.as_bytes())).unwrap();
    assert_eq!(space.len(), 100);
    assert_eq!(space.dim(), 50);

    let line = text.lines().nth(18).unwrap();
    let mut fields = line.split(' ');
    let token = fields.next().unwrap();
    let values: Vec<f64> = fields.map(|x| x.parse().unwrap()).collect();
    assert_eq!(token, "w017");
    assert_eq!(space.vector(token).unwrap(), values.as_slice());

    let mut out = Vec::new();
    save_embeddings(&space, &mut out).unwrap();
    let again = load_embeddings(BufReader::new(out.as_slice())).unwrap();
    for (a, b) in space.input_matrix().iter().zip(again.input_matrix()) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-6);
    }
    assert_eq!(again.vocab().tokens(), space.vocab().tokens());
}

#[test]
fn truncated_space_is_rejected() {
    let text = read_data("fixtures/space_100x50.emb");
    let cut: String = text.lines().take(60).map(|l| format!("{l}\n")).collect();
    assert!(load_embeddings(BufReader::new(cut.as_bytes())).is_err());
}
