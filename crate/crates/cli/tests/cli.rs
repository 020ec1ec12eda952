use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

fn cmgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmgen"))
        .args(args)
        .output()
        .unwrap()
}

fn cmgen_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cmgen"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn ok(out: Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cmgen(&["train", "x.win", "--bogus"]).status.code(), Some(2));
    assert_eq!(cmgen(&[]).status.code(), Some(2));
    assert_eq!(
        cmgen(&["agreement", "-", "--level", "ratio"]).status.code(),
        Some(2)
    );
}

#[test]
fn module_errors_exit_nonzero_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gen.tsv");
    let bad = "They argued against the contract .\t1\targument\targue\tpast\targument\tpeace\n";
    let res = cmgen_stdin(
        &[
            "generate",
            "--embeddings",
            p(&data("fixtures/toy_metaphor.emb")),
            "-",
            "--out",
            p(&out),
        ],
        bad,
    );
    assert_eq!(res.status.code(), Some(1));
    assert!(res.stdout.is_empty());
    assert!(String::from_utf8_lossy(&res.stderr).contains("peace"));
    assert!(!out.exists());

    let res = cmgen(&["prepare", "/nonexistent/corpus.ftc"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(res.stdout.is_empty());
}

#[test]
fn eval_metrics_with_gold_equal_to_output() {
    let seb = "\
6 3
1:L\tThey argued against the contract .\t1 0 0
1:M\tThey fought against the contract .\t0.2 0.9 0.1
1:G\tThey fought against the contract .\t0.2 0.9 0.1
2:L\tThe party ended .\t0 1 1
2:M\tThe party died .\t-0.5 0.3 0.8
2:G\tthe party  died\t-0.5 0.3 0.8
";
    let out = ok(cmgen_stdin(&["eval-metrics", "-"], seb));
    assert_eq!(
        out,
        "n\tdis\trel\tmean\texact\n2\t0.000\t0.000\t0.000\t1.000\n"
    );
}

#[test]
fn agreement_from_stdin() {
    let matrix = "1\t1\t2\t2\n1\t2\t2\t1\n";
    // Coincidences o11 = o22 = o12 = o21 = 2, so alpha = 1 - 7 * 4 / 32.
    assert_eq!(
        ok(cmgen_stdin(
            &["agreement", "-", "--level", "nominal"],
            matrix
        )),
        "0.125000\n"
    );
    assert_eq!(ok(cmgen_stdin(&["agreement", "-"], matrix)), "0.125000\n");
    assert_eq!(
        ok(cmgen_stdin(&["agreement", "-"], "3\t3\tNA\n3\t3\t3\n")),
        "1.000000\n"
    );
}

#[test]
fn toy_generation() {
    let req = "They argued against the contract .\t1\targument\targue\tpast\targument\twar\n";
    let out = ok(cmgen_stdin(
        &[
            "generate",
            "--embeddings",
            p(&data("fixtures/toy_metaphor.emb")),
            "-",
            "--k",
            "2",
        ],
        req,
    ));
    assert_eq!(
        out,
        "They argued against the contract .\tThey fought against the contract .\tfight,battle\n"
    );
}

fn train_once(windows: &Path, out: &Path) -> Vec<u8> {
    ok(cmgen(&[
        "train",
        p(windows),
        "--dim",
        "20",
        "--min-count",
        "1",
        "--seed",
        "1",
        "--threads",
        "1",
        "--out",
        p(out),
    ]));
    std::fs::read(out).unwrap()
}

#[test]
fn mini_pipeline_matches_golden_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = |name: &str| dir.path().join(name);
    let inventory = data("mini/inventory.fiv");

    ok(cmgen(&[
        "prepare",
        p(&data("mini/corpus.ftc")),
        "--lemma-windows",
        "--out",
        p(&d("windows.win")),
    ]));
    let first = train_once(&d("windows.win"), &d("a.emb"));
    let second = train_once(&d("windows.win"), &d("b.emb"));
    assert_eq!(
        first, second,
        "same seed, one thread: byte-identical embeddings"
    );

    ok(cmgen(&[
        "eval-frames",
        "--embeddings",
        p(&d("a.emb")),
        "--inventory",
        p(&inventory),
        "--seed",
        "1",
        "--out",
        p(&d("frames.tsv")),
    ]));
    ok(cmgen(&[
        "generate",
        "--embeddings",
        p(&d("a.emb")),
        p(&data("mini/requests.tsv")),
        "--exclude-input",
        "--k",
        "5",
        "--inventory",
        p(&inventory),
        "--out",
        p(&d("generated.tsv")),
    ]));
    ok(cmgen(&[
        "emit-records",
        p(&data("mini/pairs.pfc")),
        "--table",
        p(&d("table.mft")),
        "--out",
        p(&d("records.tsv")),
    ]));
    ok(cmgen(&[
        "select-mappings",
        "--table",
        p(&d("table.mft")),
        "--inventory",
        p(&inventory),
        "--seed",
        "1",
        "--out",
        p(&d("selected.tsv")),
    ]));

    for name in [
        "windows.win",
        "frames.tsv",
        "generated.tsv",
        "records.tsv",
        "table.mft",
        "selected.tsv",
    ] {
        let got = std::fs::read_to_string(d(name)).unwrap();
        let want = std::fs::read_to_string(data(&format!("mini/golden/{name}"))).unwrap();
        assert_eq!(got, want, "{name} differs from golden");
    }
}

#[test]
fn stdout_is_default_output() {
    let via_stdout = ok(cmgen(&["emit-records", p(&data("mini/pairs.pfc"))]));
    assert_eq!(via_stdout.lines().count(), 30);
    assert!(via_stdout.starts_with(
        "death <EOT> The party <V> ended : cause_to_end <V> as soon as she left .\tThe party died as soon as she left .\n"
    ));
}

#[test]
fn seed_changes_selection_stream_only() {
    let table = data("mini/golden/table.mft");
    let inv = data("mini/inventory.fiv");
    let run = |seed: &str| {
        ok(cmgen(&[
            "select-mappings",
            "--table",
            p(&table),
            "--inventory",
            p(&inv),
            "--seed",
            seed,
        ]))
    };
    assert_eq!(run("5"), run("5"));
    let outs: std::collections::HashSet<String> = (0..8).map(|s| run(&s.to_string())).collect();
    assert!(outs.len() > 1);
}
