use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

fn wins(board: &[u8; 9], p: u8) -> bool {
    LINES.iter().any(|l| l.iter().all(|&i| board[i] == p))
}

fn play(board: &mut [u8; 9], turn: u8, out: &mut Vec<[u8; 9]>) {
    if wins(board, b'x') || wins(board, b'o') || !board.contains(&b'b') {
        if !out.contains(board) {
            out.push(*board);
        }
        return;
    }
    for i in 0..9 {
        if board[i] == b'b' {
            board[i] = turn;
            play(board, if turn == b'x' { b'o' } else { b'x' }, out);
            board[i] = b'b';
        }
    }
}

fn tictactoe_csv() -> String {
    let mut boards = Vec::new();
    play(&mut [b'b'; 9], b'x', &mut boards);
    let mut s = String::from("X1,X2,X3,X4,X5,X6,X7,X8,X9,class\n");
    for b in &boards {
        for &c in b {
            s.push(c as char);
            s.push(',');
        }
        s.push_str(if wins(b, b'x') { "positive\n" } else { "negative\n" });
    }
    s
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn afd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afd"))
        .args(args)
        .output()
        .expect("failed to run afd")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "afd failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tsv(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

fn field<'a>(table: &'a [Vec<String>], row: usize, name: &str) -> &'a str {
    let col = table[0].iter().position(|h| h == name).unwrap();
    &table[row][col]
}

const TINY: &str = "a,b,c,y\n\
    1,p,u,0\n1,q,u,0\n2,p,v,1\n2,q,v,1\n3,p,u,2\n3,q,w,2\n1,p,w,0\n2,q,u,1\n\
    3,p,v,2\n1,q,v,1\n2,p,w,1\n3,q,u,0\n";

#[test]
fn discover_tictactoe_top_pattern() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tic.csv", &tictactoe_csv());
    let out = afd(&["discover", "--input", &input, "--target", "class", "--k", "1", "--alpha", "1.0"]);
    let table = tsv(&stdout(&out));
    assert_eq!(table.len(), 2);
    assert_eq!(field(&table, 1, "attributes"), "X1,X3,X5,X7,X9");
    assert_eq!(field(&table, 1, "depth"), "5");
    assert_eq!(field(&table, 1, "guarantee"), "exact");
    assert_eq!(field(&table, 1, "n"), "958");
    let f0: f64 = field(&table, 1, "f0").parse().unwrap();
    assert!((f0 - 0.45).abs() < 0.01, "f0 = {f0}");
}

#[test]
fn discover_json_alpha_approximate() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tiny.csv", TINY);
    let out = afd(&[
        "discover", "--input", &input, "--target", "y", "--k", "3", "--alpha", "0.8", "--format", "json",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["guarantee"], "alpha-approximate");
    assert_eq!(report["target"], "y");
    assert_eq!(report["dataset"], "tiny");
    assert_eq!(report["k"], 3);
    assert_eq!(report["config"]["bins"], 5);
    assert_eq!(report["config"]["seed"], 0);
    let patterns = report["patterns"].as_array().unwrap();
    assert!(!patterns.is_empty() && patterns.len() <= 3);
    let names = ["a", "b", "c"];
    let mut prev = f64::INFINITY;
    for p in patterns {
        let f0 = p["f0"].as_f64().unwrap();
        assert!(f0 <= prev);
        prev = f0;
        let attrs: Vec<&str> = p["attributes"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
        let idx: Vec<usize> = p["indices"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize).collect();
        assert_eq!(attrs.len(), idx.len());
        assert_eq!(p["depth"].as_u64().unwrap() as usize, idx.len());
        for (a, i) in attrs.iter().zip(&idx) {
            assert_eq!(names[*i], *a);
        }
    }
    assert!(report["stats"]["nodes_expanded"].as_u64().is_some());
}

#[test]
fn discover_unknown_target() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "x.csv", TINY);
    let out = afd(&["discover", "--input", &input, "--target", "nope"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown target column"));
}

#[test]
fn discover_rejections() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tiny.csv", TINY);
    let missing = dir.path().join("absent.csv");
    let constant = write(&dir, "const.csv", "a,y\n1,z\n2,z\n");
    let blank = write(&dir, "blank.csv", "a,y\n1,z\n,w\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["discover", "--input", missing.to_str().unwrap(), "--target", "y"],
        vec!["discover", "--input", &constant, "--target", "y"],
        vec!["discover", "--input", &blank, "--target", "y"],
        vec!["discover", "--input", &input, "--target", "y", "--k", "0"],
        vec!["discover", "--input", &input, "--target", "y", "--alpha", "1.5"],
        vec!["discover", "--input", &input, "--target", "y", "--bins", "0"],
        vec!["discover", "--input", &input, "--target", "y", "--format", "xml"],
        vec!["discover", "--input", &input, "--target", "y", "--budget-seconds", "-1"],
    ];
    for args in cases {
        let out = afd(&args);
        assert!(!out.status.success(), "accepted {args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn discover_writes_output_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tiny.csv", TINY);
    let target = dir.path().join("report.tsv");
    let out = afd(&[
        "discover", "--input", &input, "--target", "y", "--k", "2", "--output", target.to_str().unwrap(),
    ]);
    assert!(stdout(&out).is_empty());
    let table = tsv(&fs::read_to_string(&target).unwrap());
    assert_eq!(table.len(), 3);
    assert!(table.iter().all(|r| r.len() == table[0].len()));
}

#[test]
fn bench_bias_shape_and_determinism() {
    let args = ["bench-bias", "--pmfs-per-regime", "5", "--trials", "200", "--sizes", "5,10,20", "--seed", "7"];
    let first = stdout(&afd(&args));
    let table = tsv(&first);
    assert_eq!(table.len(), 1 + 3 * 3);
    assert_eq!(&table[0][..4], ["estimator", "n", "mu", "sigma"]);
    assert!(table.iter().all(|r| r.len() == table[0].len()));
    for est in ["F", "F_adj", "F0"] {
        let sizes: Vec<&str> = table[1..].iter().filter(|r| r[0] == est).map(|r| r[1].as_str()).collect();
        assert_eq!(sizes, ["5", "10", "20"]);
    }
    assert_eq!(first, stdout(&afd(&args)));
}

#[test]
fn bench_bias_json_round_trips() {
    let out = afd(&["bench-bias", "--pmfs-per-regime", "1", "--trials", "10", "--sizes", "8", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["reports"].as_array().unwrap().len(), 3);
    assert_eq!(value["config"]["seed"], 0);
    let again: serde_json::Value = serde_json::from_str(&value.to_string()).unwrap();
    assert_eq!(value, again);
}

#[test]
fn bench_bias_fig1_curve() {
    let args = ["bench-bias", "--fig1", "--n", "1000", "--attrs", "5", "--domain", "4", "--trials", "20", "--seed", "7"];
    let first = stdout(&afd(&args));
    let table = tsv(&first);
    assert_eq!(table[0], ["dimension", "mean_f_hat", "mean_f0"]);
    assert_eq!(table.len(), 6);
    let f_hat: Vec<f64> = table[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(f_hat.windows(2).all(|w| w[0] < w[1]));
    for r in &table[1..] {
        let f0: f64 = r[2].parse().unwrap();
        assert!(f0.abs() < 0.05);
    }
    assert_eq!(first, stdout(&afd(&args)));
}

#[test]
fn bench_bias_rejects_bad_parameters() {
    for args in [
        vec!["bench-bias", "--pmfs-per-regime", "0"],
        vec!["bench-bias", "--sizes", "0,5"],
        vec!["bench-bias", "--trials", "0", "--sizes", "5"],
        vec!["bench-bias", "--fig1", "--domain", "1"],
        vec!["bench-bias", "--sizes", "five"],
    ] {
        assert!(!afd(&args).status.success(), "accepted {args:?}");
    }
}

#[test]
fn baseline_estimate_values() {
    let table = tsv(&stdout(&afd(&["baseline-estimate", "--d", "9", "--max-depth", "7", "--t", "0.001"])));
    assert_eq!(field(&table, 1, "nodes"), "501");
    let secs: f64 = field(&table, 1, "estimate_seconds").parse().unwrap();
    assert!((secs - 0.501).abs() < 1e-12);

    let out = afd(&["baseline-estimate", "--d", "3", "--max-depth", "3", "--t", "1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["nodes"], 7);
    assert_eq!(value["estimate_seconds"].as_f64(), Some(7.0));

    let big = tsv(&stdout(&afd(&["baseline-estimate", "--d", "80", "--max-depth", "40", "--t", "1"])));
    assert!(field(&big, 1, "nodes").len() > 20);
}

#[test]
fn baseline_estimate_rejections() {
    for args in [
        ["baseline-estimate", "--d", "3", "--max-depth", "4", "--t", "1"],
        ["baseline-estimate", "--d", "3", "--max-depth", "0", "--t", "1"],
        ["baseline-estimate", "--d", "3", "--max-depth", "2", "--t", "0"],
    ] {
        let out = afd(&args);
        assert!(!out.status.success(), "accepted {args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn output_to_missing_directory_fails() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("no").join("such").join("file.tsv");
    let out = afd(&[
        "baseline-estimate", "--d", "3", "--max-depth", "3", "--t", "1", "--output", target.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(!Path::new(&target).exists());
}
