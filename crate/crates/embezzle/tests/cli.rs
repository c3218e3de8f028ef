use std::path::Path;
use std::process::{Command, Output};

use embezzle::{run, Experiment, ExperimentConfig, RunReport};
use proptest::prelude::*;

fn embezzle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_embezzle")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn small_e5(seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(Experiment::E5);
    for (k, v) in [("seed", seed.to_string()), ("samples", "200".into()), ("pairs", "50".into()), ("max-support", "16".into())] {
        cfg.set(k, &v).unwrap();
    }
    cfg
}

#[test]
fn exit_codes() {
    assert_eq!(code(&embezzle(&["e3-lemma"])), 0);
    assert_eq!(code(&embezzle(&["e1-vdh", "--max-k", "16"])), 2);
    assert_eq!(code(&embezzle(&["e1-vdh", "--max-k", "10"])), 0);
    assert_eq!(code(&embezzle(&["e2-nogo"])), 3);
    assert_eq!(code(&embezzle(&["e2-nogo", "--seed", "abc"])), 3);
    assert_eq!(code(&embezzle(&["e2-nogo", "--bogus"])), 3);
    assert_eq!(code(&embezzle(&["e2-nogo", "--seed", "1", "--max-support", "65"])), 4);
    assert_eq!(code(&embezzle(&["e4-car", "--seed", "1", "--window", "2", "--max-weight", "9"])), 4);
    assert_eq!(code(&embezzle(&["e3-lemma", "--grid-step", "0.3"])), 3);
    assert_eq!(code(&embezzle(&["--help"])), 0);
}

#[test]
fn csv_layout() {
    let out = embezzle(&["e3-lemma", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "kind,index,support,units,denominator,p1,m,mu,distance,bruteforce,counterexample");
    let first = lines.next().unwrap();
    assert!(first.starts_with("lemma,0,2,\"8,4\",12,0.666666666666667,"), "{first}");
    for field in text.split([',', '\n']) {
        if let Ok(v) = field.parse::<f64>() {
            let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
            let significant = mantissa.trim_start_matches(['0', '.']).chars().filter(char::is_ascii_digit).count();
            assert!(significant <= 15, "{field} = {v}");
        }
    }
}

#[test]
fn runs_are_byte_identical() {
    for args in [&["e2-nogo", "--seed", "5", "--samples", "300"][..], &["e5-channel", "--seed", "5", "--samples", "500"]] {
        let a = embezzle(args);
        let b = embezzle(args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
    let a = embezzle(&["e2-nogo", "--seed", "5", "--samples", "300"]);
    let b = embezzle(&["e2-nogo", "--seed", "6", "--samples", "300"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# lemma scan\nexperiment = e3-lemma\ngrid-step = 1/6\nmax-support = 4\nformat = json\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = embezzle(&["run", "--config", cfg]);
    assert_eq!(code(&out), 0);
    let r = RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.experiment, "e3-lemma");
    assert_eq!(r.config["grid-step"], 1.0 / 6.0);
    assert_eq!(r.config["max-support"], 4);

    let out = embezzle(&["e3-lemma", "--config", cfg, "--max-support", "6"]);
    let r = RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.config["max-support"], 6);

    assert_eq!(code(&embezzle(&["e1-vdh", "--config", cfg])), 3);
    std::fs::write(dir.path().join("bad.cfg"), "grid-step 1/6\n").unwrap();
    assert_eq!(code(&embezzle(&["e3-lemma", "--config", dir.path().join("bad.cfg").to_str().unwrap()])), 3);
    assert_eq!(code(&embezzle(&["e3-lemma", "--config", dir.path().join("missing.cfg").to_str().unwrap()])), 3);
}

fn write_report(dir: &Path, args: &[&str]) -> std::path::PathBuf {
    let out = dir.to_str().unwrap();
    let mut full = args.to_vec();
    full.extend(["--out", out, "--format", "json,csv,svg"]);
    let o = embezzle(&full);
    assert!(code(&o) == 0 || code(&o) == 2, "{}", String::from_utf8_lossy(&o.stderr));
    dir.join(format!("{}.json", args[0]))
}

#[test]
fn outputs_and_report_merge() {
    let dir = tempfile::tempdir().unwrap();
    let e3 = write_report(dir.path(), &["e3-lemma"]);
    let e2 = write_report(dir.path(), &["e2-nogo", "--seed", "3", "--samples", "200"]);
    assert!(dir.path().join("e3-lemma.csv").exists());
    assert!(dir.path().join("e2-nogo.svg").exists());
    assert!(!dir.path().join("e3-lemma.svg").exists());

    let out = embezzle(&["report", e3.to_str().unwrap(), e2.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let merged: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(merged["all_pass"], true);
    assert_eq!(merged["reports"].as_array().unwrap().len(), 2);

    let e1 = write_report(dir.path(), &["e1-vdh"]);
    assert_eq!(code(&embezzle(&["report", e1.to_str().unwrap()])), 2);

    // a doctored row no longer supports the stored verdicts
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&e3).unwrap()).unwrap();
    v["rows"][0][8] = serde_json::json!(0.1);
    let forged = dir.path().join("forged.json");
    std::fs::write(&forged, v.to_string()).unwrap();
    let out = embezzle(&["report", forged.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let merged: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(merged["reports"][0]["consistent"], false);

    std::fs::write(dir.path().join("junk.json"), "{").unwrap();
    assert_eq!(code(&embezzle(&["report", dir.path().join("junk.json").to_str().unwrap()])), 3);
}

#[test]
fn extra_generators() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "# pairs of the catalyst\nA1:-1:X;B1:-1:X\nA2:-2:Z\nI\nA1:3:XZ;B2:-5:X\n").unwrap();
    let out = embezzle(&["e4-car", "--seed", "2", "--window", "2", "--samples", "1000", "--extra-generators", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.values("mismatches", &[("kind", "extra".into())]).len(), 4);
    assert!(r.verdict("extra_generators").unwrap().passed);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "A1:-1:X\nA1:-1:Y\n").unwrap();
    let out = embezzle(&["e4-car", "--seed", "2", "--window", "2", "--extra-generators", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_reproducible_and_recheckable(seed in any::<u64>()) {
        let a = run(small_e5(seed)).unwrap();
        let b = run(small_e5(seed)).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        let back = RunReport::from_json(&a.to_json()).unwrap();
        let again = back.recheck();
        prop_assert_eq!(again.len(), a.verdicts.len());
        for (x, y) in again.iter().zip(&a.verdicts) {
            prop_assert_eq!(x.passed, y.passed);
            prop_assert_eq!(x.failures, y.failures);
        }
        prop_assert_eq!(a.to_csv().unwrap(), back.to_csv().unwrap());
    }
}
