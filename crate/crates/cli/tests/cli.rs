use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("convolab-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn config(&self, body: &str) -> PathBuf {
        let p = self.0.join("config.json");
        std::fs::write(&p, body).unwrap();
        p
    }

    fn out(&self) -> PathBuf {
        self.0.join("out")
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convolab"))
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn kernel_csv_has_header_and_rows() {
    let s = Scratch::new("kernel");
    let cfg = s.config(r#"{"schema_version": 1, "kernel": {"kind": "k-half"}, "grid": {"t_max": 2.0, "steps": 20}}"#);
    let o = run("kernel", &cfg, &s.out(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(s.out().join("kernel.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# schema_version: 1");
    assert!(lines.iter().any(|l| l.starts_with("# quadrature: method=closed-form")));
    let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("t,"), "{header}");
    assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 1 + 20);
    assert!(s.out().join("kernel_laplace.csv").exists());
}

#[test]
fn flags_override_config_grid() {
    let s = Scratch::new("override");
    let cfg = s.config(r#"{"schema_version": 1, "kernel": {"kind": "k-half"}, "grid": {"t_max": 2.0, "steps": 20}}"#);
    let o = run("kernel", &cfg, &s.out(), &["--steps", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(s.out().join("kernel.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 32);
}

#[test]
fn empty_class_list_gives_empty_report() {
    let s = Scratch::new("classify");
    let cfg = s.config(r#"{"schema_version": 1, "operator": {"eigenvalues": [-1, -4]}, "classes": []}"#);
    let o = run("classify", &cfg, &s.out(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(s.out().join("classification.json")).unwrap()).unwrap();
    assert_eq!(v["verdicts"].as_object().unwrap().len(), 0);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn configuration_errors_exit_with_two() {
    let s = Scratch::new("config");
    let bad_schema = s.config(r#"{"schema_version": 7}"#);
    assert_eq!(run("verify", &bad_schema, &s.out(), &[]).status.code(), Some(2));
    let unknown = s.config(r#"{"schema_version": 1, "bogus": true}"#);
    assert_eq!(run("verify", &unknown, &s.out(), &[]).status.code(), Some(2));
    let ok = s.config(r#"{"schema_version": 1}"#);
    assert_eq!(run("verify", &ok, &s.out(), &["--steps", "4"]).status.code(), Some(2));
    assert_eq!(run("verify", &ok, &s.out(), &["--tolerance", "0.5"]).status.code(), Some(2));
    let bad_kernel = s.config(r#"{"schema_version": 1, "kernel": {"kind": "riesz", "params": {"alpha": -1}}}"#);
    assert_eq!(run("kernel", &bad_kernel, &s.out(), &[]).status.code(), Some(2));
    assert_eq!(run("reproduce", &ok, &s.out(), &[]).status.code(), Some(2));
}

#[test]
fn corrupted_kernel_fails_verification() {
    let s = Scratch::new("verify");
    let cfg = s.config(r#"{"schema_version": 1, "grid": {"t_max": 1.0, "steps": 200}}"#);
    assert_eq!(run("verify", &cfg, &s.out(), &[]).status.code(), Some(0));
    let o = run("verify", &cfg, &s.out(), &["--corrupt-kernel"]);
    assert_eq!(o.status.code(), Some(4));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(s.out().join("verify.json")).unwrap()).unwrap();
    assert_eq!(v["corrupted_kernel"], true);
    assert!(v["failures"].as_u64().unwrap() > 0);
}

#[test]
fn simulate_writes_trajectory() {
    let s = Scratch::new("simulate");
    let cfg = s.config(
        r#"{"schema_version": 1, "kernel": {"kind": "riesz", "params": {"alpha": 1.0}},
            "operator": {"eigenvalues": [-1, -4]}, "family": "cosine", "grid": {"t_max": 1.0, "steps": 50}}"#,
    );
    let o = run("simulate", &cfg, &s.out(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(s.out().join("trajectory.csv").exists());
    assert!(s.out().join("trajectory.json").exists());
}
