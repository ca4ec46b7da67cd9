use std::path::Path;
use std::process::{Command, Output};

use gft_frac::{BanachModel, C64};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gft-frac"));
    c.env_remove("GFT_FRAC_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, alpha: &str, mu: &str, order: &str) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_owned();
    let o = run(&["gen", "--alpha", alpha, "--mu", mu, "--order", order, "--out", &p]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn coeffs(path: &str) -> Vec<[f64; 2]> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    serde_json::from_value(v["coeffs"].clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn gen_examples() {
    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "2", "1", "4");
    assert_eq!(coeffs(&k), vec![[1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [4.0, 0.0]]);
    let k = gen(dir.path(), "k3.json", "1", "3", "3");
    assert_eq!(coeffs(&k), vec![[1.0, 0.0]; 3]);

    let o = run(&["gen", "--alpha", "0.5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha must be a finite real >= 1"));
}

#[test]
fn gen_table_goes_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("k.json");
    let o = run(&["gen", "--alpha", "2", "--order", "3", "--table", "--out", p.to_str().unwrap()]);
    assert_eq!(stdout(&o), "n,re,im\n1,1.0,0.0\n2,2.0,0.0\n3,3.0,0.0\n");
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "2", "1", "128");
    let starlike = run(&["check", "--in", &k, "--check", "starlike"]);
    assert_eq!(code(&starlike), 0);
    let ucv = run(&["check", "--in", &k, "--check", "ucv"]);
    assert_eq!(code(&ucv), 1);
    let report: Value = serde_json::from_str(&stdout(&ucv)).unwrap();
    assert_eq!(report["verdict"], "fail");
    assert_eq!(report["check"], "ucv");

    let missing = dir.path().join("nope.json");
    assert_eq!(code(&run(&["check", "--in", missing.to_str().unwrap(), "--check", "ucv"])), 2);
    assert_eq!(code(&run(&["check", "--in", &k, "--check", "no-such-check"])), 2);
}

#[test]
fn premise_not_met_exits_three() {
    // (5)_1 = 5 > 2! at n = 2
    let o = run(&["bound", "--kind", "theorem2", "--alpha", "5", "--beta", "1"]);
    assert_eq!(code(&o), 3);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], "premise-not-met");
}

#[test]
fn exit_code_follows_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "2", "1", "64");
    for check in ["starlike", "convex", "ucv", "ucv-two-point", "duren-starlike", "duren-convex", "goodman"] {
        let o = run(&["check", "--in", &k, "--check", check, "--rmax", "0.9", "--angles", "32"]);
        let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let expected = match report["verdict"].as_str().unwrap() {
            "pass" => 0,
            "fail" => 1,
            "premise-not-met" => 3,
            other => panic!("verdict {other}"),
        };
        assert_eq!(code(&o), expected, "{check}");
    }
}

#[test]
fn csv_report() {
    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "1", "1", "64");
    let o = run(&["check", "--in", &k, "--check", "convex", "--format", "csv"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "convex");
    assert_eq!(rows[0][1], "pass");
}

#[test]
fn sweep_theorem2_grid() {
    let o = run(&[
        "sweep",
        "--check",
        "theorem2",
        "--alpha",
        "1",
        "--beta",
        "1,2",
        "--mu",
        "1,2",
        "--radii",
        "0.3,0.6,0.9",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("check,alpha,beta,mu,r,verdict,margin,witness_re,witness_im,literal_verdict\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r[5] == "pass"));
    // row order: β outer, then μ, then r
    let keys: Vec<(&str, &str, &str)> = rows.iter().map(|r| (r[2].as_str(), r[3].as_str(), r[4].as_str())).collect();
    assert_eq!(keys[0], ("1.0", "1.0", "0.3"));
    assert_eq!(keys[3], ("1.0", "2.0", "0.3"));
    assert_eq!(keys[11], ("2.0", "2.0", "0.9"));
}

#[test]
fn sweep_empty_range_is_header_only() {
    let o = run(&["sweep", "--check", "theorem3", "--radii", ""]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "check,alpha,beta,mu,r,verdict,margin,witness_re,witness_im,literal_verdict\n");
}

#[test]
fn sweep_theorem8_small_beta() {
    let o = run(&["sweep", "--check", "theorem8", "--beta", "0.5", "--radii", "0.3,0.6"]);
    assert_eq!(code(&o), 3);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[5] == "premise-not-met"));
}

#[test]
fn sweep_theorem6_rows() {
    let o = run(&["sweep", "--check", "theorem6", "--radii", "0.25,0.5"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert!(rows.iter().all(|r| r[0] == "theorem6" && r[5] == "pass"));
}

#[test]
fn plotdata_identity_circle() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("id.json");
    std::fs::write(&p, r#"{"mu": 1.0, "N": 1, "coeffs": [[1.0, 0.0]]}"#).unwrap();
    let o = run(&["plotdata", "--in", p.to_str().unwrap(), "--radii", "0.5", "--samples", "8"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 8);
    for r in rows {
        let (x, y): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!((x.hypot(y) - 0.5).abs() < 1e-15);
    }
}

#[test]
fn plotdata_real_coefficients_are_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "2", "1", "64");
    let o = run(&["plotdata", "--in", &k, "--radii", "0.9", "--samples", "64"]);
    let pts: Vec<(f64, f64)> =
        csv_rows(&stdout(&o)).iter().map(|r| (r[2].parse().unwrap(), r[3].parse().unwrap())).collect();
    for k in 1..64 {
        let (a, b) = (pts[k], pts[64 - k]);
        assert!((a.0 - b.0).abs() < 1e-9 && (a.1 + b.1).abs() < 1e-9, "{k}");
    }
}

#[test]
fn plotdata_after_noor_matches_log() {
    // I_{1,1} of z/(1−z) has coefficients 1/n, i.e. −log(1−z)
    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "1", "1", "32");
    let o = run(&["plotdata", "--in", &k, "--radii", "0.9", "--samples", "16", "--op", "noor", "--beta", "1"]);
    assert_eq!(code(&o), 0);
    for r in csv_rows(&stdout(&o)) {
        let theta: f64 = r[1].parse().unwrap();
        let w = C64::new(r[2].parse().unwrap(), r[3].parse().unwrap());
        let exact = -(C64::new(1.0, 0.0) - C64::from_polar(0.9, theta)).ln();
        assert!((w - exact).norm() < 1e-10, "θ = {theta}: {w} vs {exact}");
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let model = BanachModel::diagonal(3, vec![0.05, -0.005, 0.001], 1.0).unwrap();
    std::fs::write(&m, model.to_json().unwrap()).unwrap();
    let m = m.to_str().unwrap();
    let args = ["banach", "--in", m, "--check", "theorem4", "--seed", "9", "--directions", "12", "--angles", "64"];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, run(&args).stdout);
    let threaded = bin().args(args).env("GFT_FRAC_THREADS", "1").output().unwrap();
    assert_eq!(first.stdout, threaded.stdout);

    let other_seed =
        run(&["banach", "--in", m, "--check", "theorem4", "--seed", "10", "--directions", "12", "--angles", "64"]);
    assert_ne!(first.stdout, other_seed.stdout);
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let o = bin().args(["gen", "--alpha", "2"]).env("GFT_FRAC_THREADS", "many").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn apply_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "1", "1", "16");
    let noor = dir.path().join("noor.json");
    let o = run(&["apply", "--in", &k, "--op", "noor", "--beta", "1", "--out", noor.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["eval", "--in", noor.to_str().unwrap(), "--at", "0.5,0", "--at", "-0.25,0.5"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let value = &v[0]["value"];
    assert!((value[0].as_f64().unwrap() - 2f64.ln()).abs() < 1e-13);
    let d1 = &v[0]["d1"];
    assert!((d1[0].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn foxwright_and_norm() {
    let o = run(&["foxwright", "--kind", "theorem2", "--radii", "0.5", "--format", "csv"]);
    let rows = csv_rows(&stdout(&o));
    assert!((rows[0][1].parse::<f64>().unwrap() - 0.5).abs() < 1e-10);

    // ₂Ψ₁((1,1),(1,1);(1,1); z) = Σ n! zⁿ/n! = 1/(1−z)
    let o = run(&["foxwright", "--coeffs", "1,1,1,1,1,1", "--z", "0.25"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v[0]["value"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-11);

    let dir = tempfile::tempdir().unwrap();
    let k = gen(dir.path(), "k.json", "2", "1", "128");
    let o = run(&["norm", "--in", &k, "--rmax", "0.999"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let n = v["value"].as_f64().unwrap();
    assert!((5.9..=6.0).contains(&n));
}

#[test]
fn banach_kernel_in_dimension_one_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, BanachModel::diagonal(1, vec![0.1], 1.0).unwrap().to_json().unwrap()).unwrap();
    assert_eq!(code(&run(&["banach", "--in", m.to_str().unwrap(), "--check", "kernel"])), 2);
}
