use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use lcbound_cli::ResultRecord;
use lcbound_core::Rational;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lcbound"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn error_code(out: &Output) -> String {
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr holds a JSON error object");
    err["error"].as_str().unwrap().to_string()
}

fn record(args: &[&str]) -> ResultRecord {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<HashMap<String, String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            assert_eq!(cells.len(), header.len(), "{l}");
            header
                .iter()
                .map(|h| h.to_string())
                .zip(cells.iter().map(|c| c.to_string()))
                .collect()
        })
        .collect()
}

#[test]
fn bound_worked_example() {
    let worked = data("worked.json");
    let rec = record(&["bound", worked.to_str().unwrap()]);
    assert_eq!(rec.lambda, "11/6");
    assert_eq!(rec.multiplicity, 1);
    assert_eq!((rec.k, rec.l), (1, 3));
    assert_eq!(rec.n_star, vec![1, 1, 1]);
}

#[test]
fn json_round_trips_byte_for_byte() {
    let out = run(&[
        "bound",
        data("worked.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let text = stdout(&out);
    let back: ResultRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_json(), text);
}

#[test]
fn formats_agree() {
    let path = data("worked.json");
    let path = path.to_str().unwrap();
    let json = record(&["bound", path]).lambda_value();
    let text = stdout(&run(&["bound", path]));
    let line = text.lines().find(|l| l.starts_with("lambda: ")).unwrap();
    let csv = stdout(&run(&["bound", path, "--format", "csv"]));
    let csv_lambda = &csv_rows(&csv)[0]["lambda"];
    assert_eq!(line["lambda: ".len()..].parse::<Rational>().unwrap(), json);
    assert_eq!(csv_lambda.parse::<Rational>().unwrap(), json);
    assert!(csv.ends_with('\n') && !csv.contains('\r') && !csv.contains('"'));
}

#[test]
fn inline_flags_match_file() {
    let inline = record(&[
        "bound",
        "--r",
        "2",
        "--alpha",
        "3",
        "--beta",
        "3",
        "--shelves",
        "1:1,3:1,5:1",
    ]);
    let file = record(&["bound", data("worked.json").to_str().unwrap()]);
    assert_eq!(inline, file);
}

#[test]
fn odd_tail_reproduces_listed_shelves() {
    let tail = record(&["bound", data("odd_tail.json").to_str().unwrap()]);
    let listed = record(&["bound", data("worked.json").to_str().unwrap()]);
    assert_eq!(
        (
            &tail.lambda,
            &tail.lambda_decimal,
            tail.multiplicity,
            tail.k,
            tail.l,
            &tail.n_star,
            &tail.case
        ),
        (
            &listed.lambda,
            &listed.lambda_decimal,
            listed.multiplicity,
            listed.k,
            listed.l,
            &listed.n_star,
            &listed.case
        )
    );
}

#[test]
fn validation_errors_exit_2() {
    let out = run(&["bound", data("zero_budget.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "NonPositiveBudget");
    assert!(out.stdout.is_empty());

    let out = run(&["bound", data("unknown_field.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "InvalidSpecFile");

    let out = run(&[
        "bound",
        "--r",
        "1",
        "--alpha",
        "2",
        "--beta",
        "2",
        "--shelves",
        "3:1,2:1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "NonIncreasingPrices");
}

#[test]
fn cap_exceeded_exits_3() {
    let out = run(&["bound", data("stalled_tail.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_code(&out), "ShelfCapExceeded");
}

#[test]
fn io_errors_exit_4() {
    let out = run(&["bound", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_code(&out), "Io");

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing-dir").join("out.csv");
    let out = run(&[
        "figure",
        "--M-list",
        "1",
        "--H-max",
        "3",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn nn_bound_examples() {
    let base = [
        "nn-bound",
        "--N",
        "1",
        "--H",
        "4",
        "--M",
        "1",
        "--Hstar",
        "1",
        "--activation",
        "tanh",
    ];
    let p1 = record(&[&base[..], &["--point", "P1"]].concat());
    assert_eq!(p1.lambda, "11/6");
    let p2 = record(&[&base[..], &["--point", "P2"]].concat());
    assert_eq!(p2.lambda, "5/3");
    let shelves = &p2.provenance["tuple"]["shelves"];
    assert_eq!(shelves[0]["n"], 0);
    assert_eq!(shelves.as_array().unwrap().len(), p2.l);

    let out = run(&[
        "nn-bound",
        "--N",
        "1",
        "--H",
        "2",
        "--M",
        "1",
        "--Hstar",
        "0",
        "--activation",
        "poly",
        "--exponents",
        "1",
        "--point",
        "P2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "P2RequiresTrueUnits");

    let out = run(&[
        "nn-bound",
        "--N",
        "1",
        "--H",
        "3",
        "--M",
        "1",
        "--Hstar",
        "1",
        "--activation",
        "poly",
        "--exponents",
        "1",
        "--point",
        "P1",
    ]);
    assert_eq!(error_code(&out), "PolynomialWithHiddenUnits");

    let out = run(&[
        "nn-bound",
        "--N",
        "1",
        "--H",
        "2",
        "--M",
        "1",
        "--Hstar",
        "2",
        "--activation",
        "exp",
        "--point",
        "P1",
    ]);
    assert_eq!(error_code(&out), "InvalidShape");
}

#[test]
fn network_spec_files_work_with_bound() {
    let rec = record(&["bound", data("tanh_network.json").to_str().unwrap()]);
    assert_eq!(rec.lambda, "11/6");
    assert_eq!(rec.provenance["spec"]["activation"]["family"], "tanh");
}

#[test]
fn custom_activation_extends_exponents() {
    let custom = record(&[
        "nn-bound",
        "--N",
        "1",
        "--H",
        "6",
        "--M",
        "1",
        "--Hstar",
        "1",
        "--activation",
        "custom",
        "--exponents",
        "1,3",
        "--point",
        "P1",
    ]);
    let tanh = record(&[
        "nn-bound",
        "--N",
        "1",
        "--H",
        "6",
        "--M",
        "1",
        "--Hstar",
        "1",
        "--activation",
        "tanh",
        "--point",
        "P1",
    ]);
    assert_eq!(custom.lambda, tanh.lambda);
}

fn compare_rows(args: &[&str]) -> (Vec<HashMap<String, String>>, String) {
    let out = run(&[&["compare", "--format", "csv"][..], args].concat());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let summary = text.lines().last().unwrap().to_string();
    (csv_rows(&text), summary)
}

#[test]
fn compare_tanh_single_output() {
    let (rows, summary) = compare_rows(&[
        "--M",
        "1",
        "--Hstar",
        "2",
        "--activation",
        "tanh",
        "--scan-max",
        "20",
    ]);
    assert_eq!(rows.len(), 20);
    for row in &rows {
        let d: u64 = row["H_minus_Hstar"].parse().unwrap();
        let expected = match d {
            1..=8 => "P2",
            9 => "Equal",
            _ => "P1",
        };
        assert_eq!(row["winner"], expected, "H-H* = {d}");
        assert_eq!(row["family"], "tanh");
    }
    assert_eq!(
        summary,
        "# crossover,threshold,9,strict_threshold,8,flips,1"
    );
}

#[test]
fn compare_swish_five_outputs() {
    let (_, summary) = compare_rows(&["--M", "5", "--Hstar", "2", "--activation", "swish"]);
    assert!(
        summary.starts_with("# crossover,threshold,23,"),
        "{summary}"
    );
}

#[test]
fn compare_exp_never_prefers_p1() {
    let (rows, summary) = compare_rows(&[
        "--M",
        "3",
        "--Hstar",
        "2",
        "--activation",
        "exp",
        "--scan-max",
        "20",
    ]);
    assert_eq!(rows.len(), 20);
    assert!(rows
        .iter()
        .all(|r| r["winner"] == "P2" || r["winner"] == "Equal"));
    assert_eq!(
        summary,
        "# crossover,threshold,none,strict_threshold,none,flips,0"
    );
}

#[test]
fn compare_rejects_polynomials() {
    let out = run(&[
        "compare",
        "--M",
        "1",
        "--Hstar",
        "1",
        "--activation",
        "poly",
        "--exponents",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "PolynomialActivation");
}

#[test]
fn figure_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("figure.csv");
    let out = run(&["figure", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let emitted = std::fs::read_to_string(&path).unwrap();
    let golden = std::fs::read_to_string(data("figure_default.csv")).unwrap();
    assert_eq!(emitted, golden);
}

#[test]
fn figure_single_cell_has_six_rows() {
    let out = run(&["figure", "--M-list", "1", "--H-max", "3"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 6);
}

#[test]
fn figure_fractions_are_reduced() {
    let rows = csv_rows(&std::fs::read_to_string(data("figure_default.csv")).unwrap());
    for row in rows {
        let num: i64 = row["lambda_num"].parse().unwrap();
        let den: i64 = row["lambda_den"].parse().unwrap();
        assert!(den > 0);
        assert_eq!(Rational::new(num, den).denom().to_string(), den.to_string());
    }
}

#[test]
fn figure_exp_never_below_swish() {
    let rows = csv_rows(&std::fs::read_to_string(data("figure_default.csv")).unwrap());
    let value = |r: &HashMap<String, String>| {
        Rational::new(
            r["lambda_num"].parse::<i64>().unwrap(),
            r["lambda_den"].parse::<i64>().unwrap(),
        )
    };
    let swish: HashMap<(String, String), Rational> = rows
        .iter()
        .filter(|r| r["family"] == "swish" && r["point"] == "P1")
        .map(|r| ((r["M"].clone(), r["H"].clone()), value(r)))
        .collect();
    for r in rows
        .iter()
        .filter(|r| r["family"] == "exp" && r["point"] == "P1")
    {
        assert!(value(r) >= swish[&(r["M"].clone(), r["H"].clone())]);
    }
}

#[test]
fn ledger_examples() {
    let out = run(&[
        "ledger",
        data("worked.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let values: Vec<&str> = v["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["5/2", "2/1", "11/6", "15/8", "19/10", "5/2"]);
    let flagged: Vec<bool> = v["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["is_min"].as_bool().unwrap())
        .collect();
    assert_eq!(flagged, [false, false, true, false, false, false]);
    assert_eq!(v["min"], "11/6");
    assert_eq!(v["theorem_multiplicity"], 1);

    let out = run(&[
        "ledger",
        "--r",
        "0",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--shelves",
        "1:1",
        "--format",
        "csv",
    ]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| r["value"] == "1/2" && r["is_min"] == "true"));

    let out = run(&[
        "ledger",
        "--r",
        "5",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--shelves",
        "2:1",
        "--format",
        "csv",
    ]);
    let rows = csv_rows(&stdout(&out));
    let min: Vec<_> = rows.iter().filter(|r| r["is_min"] == "true").collect();
    assert_eq!(min.len(), 1);
    assert_eq!(
        (min[0]["depth"].as_str(), min[0]["value"].as_str()),
        ("2", "11/4")
    );
}

#[test]
fn verify_runs_clean_and_deterministic() {
    let a = run(&["verify", "--cases", "500", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("result: PASS"));
    let b = run(&["verify", "--cases", "500", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);

    let empty = run(&["verify", "--cases", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(stdout(&empty).contains("checks: 0"));
}
