use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_k2modsym"))
}

#[test]
fn present_prints_a_parsable_record() {
    let out = bin().args(["present", "--M", "11", "--cusps", "none"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rec = k2modsym::modsym::PresentationRecord::from_text(&text).unwrap();
    assert_eq!(rec.level, 11);
    assert_eq!(rec.subspace.nrows(), 2);
}

#[test]
fn verify_writes_reports_and_uses_env_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = bin()
        .args(["verify", "eisenstein", "--M", "11", "--l", "2", "--backend", "both", "--out-dir"])
        .arg(dir.path())
        .env("K2MODSYM_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["pass"], true);
    assert_eq!(json["checks"][0]["spec"]["kind"], "eisenstein");
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("eisenstein M=11 l=2"));
    assert!(cache.join("presentation-11.txt").exists());
    assert!(cache.join("lattice-11.txt").exists());
}

#[test]
fn cache_flag_overrides_env() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("flag"), dir.path().join("env"));
    let out = bin()
        .arg("--cache-dir")
        .arg(&a)
        .args(["verify", "oracles", "--M", "7", "--out-dir"])
        .arg(dir.path())
        .env("K2MODSYM_CACHE_DIR", &b)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(a.join("presentation-7.txt").exists());
    assert!(!b.exists());
}

#[test]
fn failing_check_exits_nonzero_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["verify", "theorem1-divides", "--M", "5", "--p", "2", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["pass"], false);
    assert!(json["checks"][0]["error"].as_str().unwrap().contains("does not divide"));
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!bin().args(["verify", "nonsense", "--M", "5"]).output().unwrap().status.success());
    assert!(!bin().args(["present", "--M", "5", "--cusps", "Cfoo"]).output().unwrap().status.success());
}

#[test]
fn sequential_run_matches_parallel() {
    let run = |extra: &[&str]| {
        let dir = tempfile::tempdir().unwrap();
        let out = bin()
            .args(extra)
            .args(["verify", "lemma41", "--M", "4", "--p", "3", "--trials", "50", "--seed", "9", "--out-dir"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
        let obj = v.as_object_mut().unwrap();
        for k in ["timings", "created_unix", "parallel"] {
            obj.remove(k);
        }
        v
    };
    assert_eq!(run(&[]), run(&["--sequential"]));
}
