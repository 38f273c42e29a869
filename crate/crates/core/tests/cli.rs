use serde_json::Value;
use zerosum::cli::run;
use zerosum::Sequence;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zerosum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let mut argv = args.to_vec();
    argv.extend(["--format", "json"]);
    let (code, out, err) = call(&argv);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn extract_nt_example() {
    let (code, v) = call_json(&["extract", "--group", "Z/3", "--seq", "0^4 1^2 2^2", "--t", "2", "--method", "nt"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["method"], "nt");
    assert_eq!(v["k"], 6);
    assert_eq!(v["validated"], true);
    let total: u64 = v["witness"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c[1].as_u64().unwrap())
        .sum();
    assert_eq!(total, 6);
}

#[test]
fn verify_square_example() {
    let (code, v) = call_json(&["verify", "--suite", "square", "--n", "2..3"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for (row, want) in rows.iter().zip([5, 9]) {
        assert_eq!(row["computed_value"], want);
        assert_eq!(row["claimed_value"], want);
        assert_eq!(row["status"], "MATCH");
    }
}

#[test]
fn count_example() {
    let (code, out, _) = call(&["count", "--group", "Z/2^2", "--seq", "(0,0) (0,1) (1,0) (1,1)", "--k", "2"]);
    assert_eq!((code, out.trim()), (0, "0"));
    let (code, v) = call_json(&["count", "--group", "Z/2^2", "--seq", "(0,0) (0,1) (1,0) (1,1)", "--k", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"]["exact"], "1");
    let (_, out, _) = call(&["count", "--seq", "Z/3: 0^6", "--k", "3", "--mod", "7"]);
    assert_eq!(out.trim(), "6 (mod 7)");
}

#[test]
fn detect_output_round_trips() {
    let (code, out, _) = call(&["detect", "--group", "Z/5", "--seq", "1^3 2^4 4^2", "--k", "5"]);
    assert_eq!(code, 0);
    let w = Sequence::parse(out.trim(), false).unwrap();
    assert_eq!(w.len(), 5);
    assert!(w.is_zero_sum());
    let (code, out, _) = call(&["detect", "--seq", out.trim(), "--k", "5"]);
    assert_eq!(code, 0);
    assert_eq!(Sequence::parse(out.trim(), false).unwrap(), w);

    let (code, out, _) = call(&["detect", "--seq", "Z/6: 1^4 2^4", "--k", "6"]);
    assert_eq!((code, out.trim()), (0, "none"));
}

#[test]
fn sequence_file_formats() {
    let dir = std::env::temp_dir().join(format!("zerosum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let seq = Sequence::parse("Z/2xZ/4: (0,1)^3 (1,2) (1,3)^2", false).unwrap();
    let text = dir.join("s.txt");
    let json = dir.join("s.json");
    std::fs::write(&text, seq.to_text()).unwrap();
    std::fs::write(&json, serde_json::to_string(&seq).unwrap()).unwrap();
    let a = call(&["count", "--seq-file", text.to_str().unwrap(), "--k", "4"]);
    let b = call(&["count", "--seq-file", json.to_str().unwrap(), "--k", "4"]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn construct_families() {
    let (code, v) = call_json(&["construct", "--family", "cyclic", "--n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["validation"]["valid"], true);
    assert_eq!(v["validation"]["length"], 8);
    let (code, out, _) = call(&["construct", "--family", "square", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Z/3^2: (1,1)^2 (1,2)^2 (2,1)^2 (2,2)^2"));
    let (code, v) = call_json(&["construct", "--family", "power2", "--n", "2", "--r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["validation"]["length"], 8);
    let (code, _, err) = call(&["construct", "--family", "power2", "--n", "4"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("ERROR:precondition:"));
}

#[test]
fn constant_statuses_and_exit_codes() {
    let (code, v) = call_json(&["constant", "--group", "Z/6", "--t", "6", "--claimed-from", "formula"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["computed_value"], 9);
    assert_eq!(v["report"]["status"], "MATCH");

    let (code, v) = call_json(&["constant", "--group", "Z/3", "--t", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["status"], "UNCLAIMED");

    let (code, _, err) = call(&["constant", "--group", "Z/4", "--t", "2"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("ERROR:unbounded:"));

    let (code, _, err) = call(&["constant", "--group", "Z/7", "--t", "7", "--budget", "10"]);
    assert_eq!(code, 3);
    assert!(err.starts_with("ERROR:budget_exhausted:"), "{err}");
}

#[test]
fn extract_methods_enforce_preconditions() {
    // length 2n - d = 10 with d = 2 over Z/6
    let (code, v) = call_json(&["extract", "--group", "Z/6", "--seq", "1^5 2^3 3 4", "--method", "block"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["method"], "block");
    let (code, _, err) = call(&["extract", "--group", "Z/6", "--seq", "1^3 2^4", "--method", "block"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("ERROR:precondition:"));
    let (code, _, err) = call(&["extract", "--group", "Z/6", "--seq", "1^6", "--method", "square3n"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("ERROR:precondition:"));

    let (code, v) = call_json(&["extract", "--group", "Z/3^2", "--seq", "(0,1)^3 (1,0)^3 (2,2)^3", "--method", "auto"]);
    assert_eq!(code, 0);
    assert_eq!(v["method"], "square3n");
    let (code, v) = call_json(&["extract", "--group", "Z/5", "--seq", "1^3 2^4 4^2", "--method", "auto"]);
    assert_eq!(code, 0);
    assert_eq!(v["method"], "dp");
    let (code, _, err) = call(&["extract", "--group", "Z/6", "--seq", "1^4 2^4", "--method", "dp"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("ERROR:invariant_violated:"));
}

#[test]
fn usage_and_parse_errors() {
    let (code, _, err) = call(&["verify", "--suite", "nope"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("ERROR:usage:"));
    let (code, _, err) = call(&["count", "--group", "Z/4", "--seq", "5", "--k", "1"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("ERROR:out_of_range:"));
    let (code, out, _) = call(&["count", "--group", "Z/4", "--seq", "4", "--k", "1", "--lenient"]);
    assert_eq!((code, out.trim()), (0, "1"));
    let (code, _, err) = call(&["count", "--group", "Z/4", "--k", "1"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("ERROR:parse:"));
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn verify_csv_table() {
    let (code, out, _) = call(&["verify", "--suite", "egz", "--n", "2..4", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "sequences_checked"));
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| &r[5] == "HOLDS"));
}

#[test]
fn verify_property_suites() {
    for args in [
        &["verify", "--suite", "reiher", "--n", "2"][..],
        &["verify", "--suite", "lemma3n", "--n", "2,4", "--samples", "100"][..],
        &["verify", "--suite", "por2p", "--p", "2"][..],
        &["verify", "--suite", "conjecture", "--r", "2..3"][..],
    ] {
        let (code, v) = call_json(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(v["all_passed"], true);
    }
}
