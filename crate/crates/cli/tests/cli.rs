use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dppzeros"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV artifact, header line and column names stripped.
fn rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    lines.next().unwrap();
    lines.map(|l| l.split(',').map(String::from).collect()).collect()
}

fn header(csv: &str) -> serde_json::Value {
    serde_json::from_str(csv.lines().next().unwrap().strip_prefix("# ").unwrap()).unwrap()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn gue_traces() {
    let o = run(&["traces", "--scheme", "gue", "--n", "5", "--moments", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let r = rows(&text);
    assert_eq!(r.len(), 5);
    let ell2 = &r[2];
    assert_eq!((ell2[0].as_str(), ell2[1].as_str()), ("5", "2"));
    assert!((f(&ell2[2]) - 1.0).abs() < 1e-12);
    assert!((f(&ell2[3]) - 0.8).abs() < 1e-12);
    assert!((f(&ell2[4]) - 0.2).abs() < 1e-12);
    assert!((f(&r[1][6]) - 1.0 / 25.0).abs() < 1e-12);
}

#[test]
fn semicircle_density_from_curve() {
    let o = run(&["curve", "--kind", "hermite", "--q", "1", "--a", "0", "--density", "0", "--eps", "1e-6"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert!((f(&r[0][1]) - 1.0 / std::f64::consts::PI).abs() < 1e-6, "{}", r[0][1]);
}

#[test]
fn malformed_config_exits_2_and_names_key() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"command":"traces","scheme":{"ensemble":"gue"},"n":[5],"moments":4,"seeed":1}"#).unwrap();
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seeed"));

    std::fs::write(&p, r#"{"command":"traces","scheme":{"ensemble":"jacobi","params":{"alpha":1}},"n":[5],"moments":4}"#).unwrap();
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("scheme.params.beta"));

    std::fs::write(&p, "{\"command\": \"traces\",").unwrap();
    assert_eq!(run(&["run", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn invalid_parameters_exit_2() {
    let o = run(&["traces", "--scheme", "wishart", "--alpha", "-3", "--n", "5", "--moments", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sample", "--model", "wishart", "--n", "10", "--alpha", "0.15", "--samples", "4", "--seed", "1", "--moments", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degenerate_s_transform_is_rejected() {
    // S-transform of delta_0 does not exist
    let o = run(&["free-conv", "--op", "mul", "--atoms", "0", "--weights", "1", "--moments", "4"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

fn write_and_read(dir: &Path, name: &str, config: &str, threads: &str) -> String {
    let cfg = dir.join(format!("{name}.json"));
    std::fs::write(&cfg, config).unwrap();
    let o = bin().arg("run").arg(&cfg).env("DPPZEROS_THREADS", threads).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(dir.join("out.txt")).unwrap()
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    let out = out.to_str().unwrap();
    let configs = [
        format!(r#"{{"command":"sample","model":"gue-source","n":12,"ratios":[0.5,0.5],"atoms":[1,-1],"samples":24,"seed":5,"moments":4,"output":"{out}"}}"#),
        format!(r#"{{"command":"gap-sweep","scheme":{{"kind":"multiple-hermite","a":[1,-1],"q":[0.5,0.5]}},"n":[8,16,32],"moments":4,"output":"{out}"}}"#),
        format!(r#"{{"command":"mop-zeros","scheme":{{"kind":"multiple-laguerre","alpha":1,"a":[1,2],"q":[0.5,0.5]}},"n":[10,20],"moments":4,"format":"json","output":"{out}"}}"#),
    ];
    for (i, c) in configs.iter().enumerate() {
        let a = write_and_read(dir.path(), &format!("c{i}"), c, "1");
        let b = write_and_read(dir.path(), &format!("c{i}"), c, "3");
        assert_eq!(a, b);
    }
}

#[test]
fn flags_and_config_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    let o = run(&["variance-sweep", "--scheme", "meixner", "--alpha", "0.5", "--beta", "1", "--n", "4,8", "--moments", "3", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let from_flags = std::fs::read_to_string(&out).unwrap();
    let cfg = format!(
        r#"{{"command":"variance-sweep","scheme":{{"ensemble":"meixner","params":{{"alpha":0.5,"beta":1}}}},"n":[4,8],"moments":3,"output":"{}"}}"#,
        out.to_str().unwrap()
    );
    let from_file = write_and_read(dir.path(), "vs", &cfg, "2");
    assert_eq!(from_flags, from_file);
}

#[test]
fn every_artifact_has_a_header() {
    let csv = stdout(&run(&["kva", "--scheme", "jacobi", "--alpha", "1", "--beta", "1", "--moments", "4"]));
    let h = header(&csv);
    assert_eq!(h["command"], "kva");
    assert_eq!(h["config_hash"].as_str().unwrap().len(), 64);
    assert!(h["versions"]["dppzeros-core"].is_string());

    let json = stdout(&run(&["zeros", "--scheme", "gue", "--n", "4", "--moments", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["header"]["command"], "zeros");
    assert!((v["results"][0]["moments"][2].as_f64().unwrap() - 0.75).abs() < 1e-12);

    let other = header(&stdout(&run(&["kva", "--scheme", "jacobi", "--alpha", "1", "--beta", "2", "--moments", "4"])));
    assert_ne!(h["config_hash"], other["config_hash"]);
}

#[test]
fn free_conv_and_curve_moments_agree() {
    let series = rows(&stdout(&run(&["free-conv", "--op", "add", "--atoms", "1,-1", "--weights", "0.5,0.5", "--moments", "6"])));
    let curve = rows(&stdout(&run(&["curve", "--kind", "hermite", "--q", "0.5,0.5", "--a", "1,-1", "--moments", "6"])));
    assert!((f(&series[2][1]) - 2.0).abs() < 1e-12 && (f(&series[4][1]) - 7.0).abs() < 1e-12);
    for (s, c) in series.iter().zip(&curve) {
        assert!((f(&s[1]) - f(&c[1])).abs() < 1e-8, "{s:?} {c:?}");
    }
}

#[test]
fn sample_json_shape() {
    let o = run(&["sample", "--model", "gue", "--n", "6", "--samples", "50", "--seed", "3", "--moments", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["mean", "var", "se"] {
        assert_eq!(v[key].as_array().unwrap().len(), 3);
    }
    assert_eq!(v["mean"][0], 1.0);
}

#[test]
fn kva_against_zeros() {
    let r = rows(&stdout(&run(&["kva", "--scheme", "gue", "--n", "50,100", "--moments", "4"])));
    let last = r.iter().find(|row| row[0] == "100" && row[1] == "4").unwrap();
    assert!(f(&last[4]) < 0.1 && (f(&last[3]) - 2.0).abs() < 1e-12);
}
