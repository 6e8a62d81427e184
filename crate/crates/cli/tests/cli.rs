use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn etwist(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etwist"))
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .args(args)
        .output()
        .expect("spawn etwist")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(p: impl AsRef<Path>) -> Value {
    let src = std::fs::read_to_string(p.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", p.as_ref().display()));
    serde_json::from_str(&src).unwrap()
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn assert_schema(command: &str, doc: &Value) {
    let schema = read_json(schema_dir().join(format!("{command}.schema.json")));
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{command}.json violates its schema:\n{}", msgs.join("\n"));
}

#[test]
fn fss_torus_pages_are_binomial() {
    let tmp = tempfile::tempdir().unwrap();
    let o = etwist(tmp.path(), &["fss", "--model", "torus2", "--out", "out", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 0);
    let doc = read_json(tmp.path().join("out/fss.json"));
    assert_schema("fss", &doc);
    let r = &doc["result"];
    assert_eq!(r["betti"], serde_json::json!([1, 4, 6, 4, 1]));
    assert_eq!(r["degeneration_page"], 1);
    for page in r["pages"].as_array().unwrap() {
        assert_eq!(page, &serde_json::json!([[1, 2, 1], [2, 4, 2], [1, 2, 1]]));
    }
}

#[test]
fn fss_iwasawa_degenerates_at_second_page() {
    let tmp = tempfile::tempdir().unwrap();
    let o = etwist(tmp.path(), &["fss", "--model", "iwasawa", "--out", "out", "--no-cache"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("degeneration page 2"), "{text}");
    let r = &read_json(tmp.path().join("out/fss.json"))["result"];
    assert_eq!(r["degeneration_page"], 2);
    assert_eq!(r["betti"][1], 4);
}

#[test]
fn identical_runs_give_identical_reports() {
    let tmp = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = etwist(tmp.path(), &["spectrum", "--model", "iwasawa", "--degree", "1", "--out", out, "--no-cache", "--quiet"]);
        assert_eq!(code(&o), 0);
    }
    for f in ["spectrum.json", "spectrum.txt", "spectrum.csv"] {
        let a = std::fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between runs");
    }
}

#[test]
fn generated_at_is_the_only_varying_field() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |out: &str, epoch: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_etwist"))
            .current_dir(tmp.path())
            .env("SOURCE_DATE_EPOCH", epoch)
            .args(["fss", "--model", "iwasawa", "--out", out, "--no-cache", "--quiet"])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        let mut v = read_json(tmp.path().join(out).join("fss.json"));
        v.as_object_mut().unwrap().remove("generated_at");
        v
    };
    assert_eq!(run("a", "1"), run("b", "2"));
}

#[test]
fn warm_cache_matches_cold_run() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["spectrum", "--model", "iwasawa", "--verify-criterion", "r=2", "--eta", "0.5", "--out", out, "--cache-dir", "cache"];
    let cold = etwist(tmp.path(), &args("cold"));
    assert_eq!(code(&cold), 0);
    assert!(!String::from_utf8_lossy(&cold.stderr).contains("cached result"));
    let warm = etwist(tmp.path(), &args("warm"));
    assert_eq!(code(&warm), 0);
    assert!(String::from_utf8_lossy(&warm.stderr).contains("cached result"));
    for f in ["spectrum.json", "spectrum.txt", "spectrum.csv"] {
        assert_eq!(std::fs::read(tmp.path().join("cold").join(f)).unwrap(), std::fs::read(tmp.path().join("warm").join(f)).unwrap(), "{f}");
    }
    assert_eq!(std::fs::read_dir(tmp.path().join("cache")).unwrap().count(), 1);
}

#[test]
fn cache_key_tracks_configuration() {
    let tmp = tempfile::tempdir().unwrap();
    let key = |r: &str, out: &str| {
        let o = etwist(tmp.path(), &["fss", "--model", "torus2", "--r-max", r, "--out", out, "--cache-dir", "cache", "--quiet"]);
        assert_eq!(code(&o), 0);
        read_json(tmp.path().join(out).join("fss.json"))["cache_key"].as_str().unwrap().to_string()
    };
    let (a, b, c) = (key("2", "a"), key("3", "b"), key("2", "c"));
    assert_ne!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.len(), 64);
}

#[test]
fn spectrum_criterion_passes_on_iwasawa() {
    let tmp = tempfile::tempdir().unwrap();
    let o = etwist(tmp.path(), &["spectrum", "--model", "iwasawa", "--verify-criterion", "r=2", "--out", "out", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 0);
    let doc = read_json(tmp.path().join("out/spectrum.json"));
    assert_schema("spectrum", &doc);
    assert_eq!(doc["result"]["criterion"]["pass"], true);
    assert_eq!(doc["passed"], true);
    let rows = doc["result"]["comparison"].as_array().unwrap();
    let at = |k: u64, r: u64| rows.iter().find(|x| x["k"] == k && x["r"] == r).unwrap().clone();
    assert_eq!(at(1, 1)["decay_count"], 5);
    assert_eq!(at(1, 1)["betti"], 4);
    assert_eq!(at(1, 2)["decay_count"], 4);
    let csv = std::fs::read_to_string(tmp.path().join("out/spectrum.csv")).unwrap();
    assert!(csv.starts_with("k,h,i,lambda\n"));
}

#[test]
fn hypotheses_report_eligible_bidegrees() {
    let tmp = tempfile::tempdir().unwrap();
    let o = etwist(tmp.path(), &["hypotheses", "--check", "twisted-vanishing", "--phi", "ball-log", "--n", "2", "--out", "out", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 0);
    let doc = read_json(tmp.path().join("out/hypotheses.json"));
    assert_schema("hypotheses", &doc);
    assert_eq!(doc["result"]["eligible_bidegrees"], serde_json::json!([[0, 1], [2, 1]]));
    // the threshold is not met on this ball, so --strict turns that into exit 1
    let strict = etwist(tmp.path(), &["hypotheses", "--check", "twisted-vanishing", "--n", "2", "--strict", "--out", "s", "--no-cache", "--quiet"]);
    assert_eq!(code(&strict), 1);
}

#[test]
fn hypotheses_curvature_on_model() {
    let tmp = tempfile::tempdir().unwrap();
    let o = etwist(
        tmp.path(),
        &["hypotheses", "--check", "curvature-vanishing", "--model", "iwasawa", "--bidegree", "3,0", "--out", "out", "--no-cache", "--quiet"],
    );
    assert_eq!(code(&o), 0);
    let doc = read_json(tmp.path().join("out/hypotheses.json"));
    assert_schema("hypotheses", &doc);
    let m = &doc["result"]["model_check"];
    assert!((m["dbar_omega_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let missing = etwist(tmp.path(), &["hypotheses", "--check", "curvature-vanishing", "--out", "x", "--no-cache"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn verify_single_identity() {
    let tmp = tempfile::tempdir().unwrap();
    let o = etwist(tmp.path(), &["verify", "--filter", "id=A4", "--out", "out", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 0);
    let doc = read_json(tmp.path().join("out/verify.json"));
    assert_schema("verify", &doc);
    let reports = doc["result"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["id"], "A4");
    assert!(!tmp.path().join("out/counterexamples.json").exists());
}

#[test]
fn verify_standard_section() {
    let tmp = tempfile::tempdir().unwrap();
    let o = etwist(tmp.path(), &["verify", "--section", "appendix", "--n", "2", "--trials", "5", "--seed", "7", "--out", "out", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(tmp.path().join("out/verify.json"));
    assert_eq!(doc["result"]["failed"], 0);
    assert_eq!(doc["result"]["reports"].as_array().unwrap().len(), 7);
}

#[test]
fn mutation_exits_one_with_counterexamples() {
    let tmp = tempfile::tempdir().unwrap();
    let list = etwist(tmp.path(), &["verify", "--list-mutations"]);
    let first = String::from_utf8_lossy(&list.stdout).lines().next().unwrap().to_string();
    let o = etwist(tmp.path(), &["verify", "--section", "twist", "--mutation", &first, "--out", "out", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 1);
    let cex = read_json(tmp.path().join("out/counterexamples.json"));
    let first = &cex.as_array().unwrap()[0]["counterexample"];
    assert!(first["statement"].as_str().is_some_and(|s| !s.is_empty()));
    assert_schema("verify", &read_json(tmp.path().join("out/verify.json")));
}

#[test]
fn configuration_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&etwist(tmp.path(), &["fss", "--model", "no-such-model", "--no-cache"])), 2);
    assert_eq!(code(&etwist(tmp.path(), &["fss", "--no-cache"])), 2);
    assert_eq!(code(&etwist(tmp.path(), &["verify", "--n", "5", "--no-cache"])), 2);
    assert_eq!(code(&etwist(tmp.path(), &["verify", "--mutation", "bogus", "--no-cache"])), 2);
    assert_eq!(code(&etwist(tmp.path(), &["hypotheses", "--check", "nope", "--no-cache"])), 2);
    assert_eq!(code(&etwist(tmp.path(), &["hypotheses", "--check", "twisted-vanishing", "--radius", "1.5", "--no-cache"])), 2);
    std::fs::write(tmp.path().join("bad.toml"), "bogus = 1\n").unwrap();
    assert_eq!(code(&etwist(tmp.path(), &["fss", "--model", "torus2", "--config", "bad.toml", "--no-cache"])), 2);
    std::fs::write(tmp.path().join("bad2.toml"), "[fss]\nmodel = \"torus2\"\nextra = 3\n").unwrap();
    assert_eq!(code(&etwist(tmp.path(), &["fss", "--config", "bad2.toml", "--no-cache"])), 2);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("etwist.toml"), "out_dir = \"from-config\"\nformats = [\"json\"]\n[fss]\nmodel = \"torus2\"\nr_max = 2\n").unwrap();
    let o = etwist(tmp.path(), &["fss", "--config", "etwist.toml", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 0);
    let doc = read_json(tmp.path().join("from-config/fss.json"));
    assert_eq!(doc["config"]["r_max"], 2);
    assert!(!tmp.path().join("from-config/fss.txt").exists());
    let o = etwist(tmp.path(), &["fss", "--config", "etwist.toml", "--model", "iwasawa", "--no-cache", "--quiet"]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_json(tmp.path().join("from-config/fss.json"))["result"]["model"], "iwasawa");
}

#[test]
fn report_collects_envelopes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&etwist(tmp.path(), &["fss", "--model", "iwasawa", "--out", "out", "--no-cache", "--quiet"])), 0);
    assert_eq!(code(&etwist(tmp.path(), &["verify", "--filter", "id=A4", "--out", "out", "--no-cache", "--quiet"])), 0);
    std::fs::write(tmp.path().join("out/unrelated.json"), "{\"a\": 1}").unwrap();
    let o = etwist(tmp.path(), &["report", "--out", "out", "--quiet"]);
    assert_eq!(code(&o), 0);
    let doc = read_json(tmp.path().join("out/report.json"));
    assert_schema("report", &doc);
    let commands: Vec<&str> = doc["result"]["entries"].as_array().unwrap().iter().map(|e| e["command"].as_str().unwrap()).collect();
    assert_eq!(commands, ["fss", "verify"]);
    // a second report run ignores the first report
    assert_eq!(code(&etwist(tmp.path(), &["report", "--out", "out", "--quiet"])), 0);
    assert_eq!(read_json(tmp.path().join("out/report.json"))["result"]["entries"].as_array().unwrap().len(), 2);
    std::fs::create_dir(tmp.path().join("empty")).unwrap();
    assert_eq!(code(&etwist(tmp.path(), &["report", "--input", "empty", "--out", "empty"])), 2);
}

#[test]
fn report_fails_when_a_component_failed() {
    let tmp = tempfile::tempdir().unwrap();
    let list = etwist(tmp.path(), &["verify", "--list-mutations"]);
    let first = String::from_utf8_lossy(&list.stdout).lines().next().unwrap().to_string();
    assert_eq!(code(&etwist(tmp.path(), &["verify", "--section", "twist", "--mutation", &first, "--out", "out", "--no-cache", "--quiet"])), 1);
    assert_eq!(code(&etwist(tmp.path(), &["report", "--out", "out", "--quiet"])), 1);
}
