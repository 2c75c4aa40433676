use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}.sam", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn measure_single_and_all() {
    let comp = corpus("comp");
    assert_eq!(
        stdout(&["measure", &comp, "--word", "111111", "--measure", "accept"]),
        "finite 3\n"
    );
    assert_eq!(
        stdout(&["measure", &comp, "--word", "1111"]),
        "weak finite 2\naccept finite 2\nstrong infinite\n"
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&["measure", &comp, "--word", "1111", "--json"])).unwrap();
    assert_eq!(v["values"]["strong"], "inf");
    assert_eq!(v["values"]["weak"], "2");
}

#[test]
fn classify_copy() {
    let copy = corpus("copy");
    assert_eq!(stdout(&["classify", &copy, "--measure", "strong"]), "unlimited\n");
    assert_eq!(stdout(&["classify", &copy]), "accept: linear\nstrong: unlimited\n");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["classify", &copy, "--measure", "accept", "--json"])).unwrap();
    assert_eq!(v["verdict"], "linear");
    assert_eq!(v["evidence"]["storeFinite"], false);
}

#[test]
fn deciders() {
    let comp = corpus("comp");
    assert_eq!(stdout(&["decide-limited", &comp, "--measure", "accept"]), "limited\n");
    assert_eq!(stdout(&["decide-limited", &comp, "--measure", "strong"]), "unlimited\n");
    assert_eq!(
        stdout(&["decide-constant", &corpus("nopush"), "--measure", "strong"]),
        "constant\n"
    );
    assert_eq!(
        stdout(&["decide-constant", &corpus("ww"), "--measure", "accept"]),
        "not-constant\n"
    );
}

#[test]
fn ww_weak_profile_csv() {
    let csv = stdout(&[
        "profile",
        &corpus("ww"),
        "--measure",
        "weak",
        "--n-max",
        "10",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,sigma,sigmaHat,witness");
    assert_eq!(lines.len(), 12);
    for (n, line) in lines[1..].iter().enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        let want = if n % 2 == 1 { (n - 1) / 2 } else { 0 };
        assert_eq!(f[1], want.to_string(), "n={n}");
        if want > 0 {
            // realized by some w#w
            let (l, r) = f[3].split_once('#').unwrap();
            assert_eq!(l, r, "n={n}");
        }
    }
    assert_eq!(lines[4], "3,1,1,a#a");
}

#[test]
fn profile_json_carries_a_fit_once_there_are_enough_rows() {
    let short: serde_json::Value = serde_json::from_str(&stdout(&[
        "profile",
        &corpus("comp"),
        "--measure",
        "accept",
        "--n-max",
        "5",
        "--json",
    ]))
    .unwrap();
    assert!(short["fit"].is_null());
    let long: serde_json::Value = serde_json::from_str(&stdout(&[
        "profile",
        &corpus("copy"),
        "--measure",
        "accept",
        "--n-max",
        "10",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(long["rows"].as_array().unwrap().len(), 11);
    assert!(long["fit"]["best"].is_string());
}

#[test]
fn profile_over_a_word_file() {
    let dir = tempfile::tempdir().unwrap();
    let words = dir.path().join("words.txt");
    std::fs::write(&words, "1111\n111111111\n").unwrap();
    let csv = stdout(&[
        "profile",
        &corpus("comp"),
        "--measure",
        "weak",
        "--n-max",
        "9",
        "--words-file",
        words.to_str().unwrap(),
    ]);
    let last = csv.lines().last().unwrap();
    assert_eq!(last, "9,3,3,111111111");
}

#[test]
fn store_language_exports() {
    let comp = corpus("comp");
    let dot = stdout(&["store-lang", &comp, "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["store-lang", &comp, "--json", "--max-len", "5"])).unwrap();
    assert_eq!(v["finite"], false);
    assert!(!v["words"].as_array().unwrap().is_empty());
    assert!(stdout(&["lwm", &corpus("ww"), "--max-len", "3"]).lines().count() > 0);
}

#[test]
fn exit_codes() {
    let comp = corpus("comp");
    assert_eq!(run(&["validate", &comp]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.sam");
    std::fs::write(&broken, "machine CSA name=x\ninput: a\n").unwrap();
    assert_eq!(run(&["validate", broken.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["measure", &comp, "--word", "zz"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["classify", &corpus("pref")]).status.code(), Some(2));
    assert_eq!(
        run(&["measure", "/nonexistent.sam", "--word", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn oracle_check_and_corpus_run_pass() {
    assert_eq!(
        run(&["oracle-check", &corpus("comp"), "--max-len", "4"]).status.code(),
        Some(0)
    );
    let out = run(&["corpus-run", "--name", "ww"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().ends_with("0 failed\n"));
    assert_eq!(run(&["corpus-run", "--name", "nope"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["profile", "--measure", "accept", "--n-max", "8", "--json"],
        vec!["classify", "--json"],
        vec!["store-lang"],
    ] {
        let mut full: Vec<&str> = args.clone();
        let path = corpus("copy");
        full.insert(1, &path);
        assert_eq!(stdout(&full), stdout(&full), "{full:?}");
    }
}
