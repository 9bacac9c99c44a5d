use std::path::Path;
use std::process::{Command, Output};

fn slnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slnet")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const RING_SYNC: &str = r#"
seed = 2024

[topology]
kind = "ring"
n = 6
s = 2

[params]
mu = 1.0
omega = 1.0
c = 0.02

[initial]
kind = "polar"
radii = 0.5
phase_range = [0.3, 2.8]

[run]
t_end = 200.0
sample_every = 0.05
"#;

const K3: &str = r#"
[topology]
kind = "complete"
n = 3

[params]
mu = 1.0
omega = 0.0
c = 0.01

[initial]
kind = "polar"
radii = 0.5
phase_range = [0.2, 1.3]

[run]
t_end = 100.0
sample_every = 0.05
"#;

#[test]
fn critical_values_even_ring() {
    let dir = tempfile::tempdir().unwrap();
    let o = slnet(&["critical-values", "--n", "6", "--s", "2", "--c", "0.05", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("mu_2 = mu_4 = mu_6 = 0.200000"), "{text}");
    assert!(text.contains("mu_3 = mu_5 = 0.300000"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("critical_values.csv")).unwrap();
    assert!(csv.starts_with("mu_crit,modes,simple\n"));
}

#[test]
fn critical_values_all_to_all() {
    let dir = tempfile::tempdir().unwrap();
    let o = slnet(&["critical-values", "--n", "7", "--s", "3", "--c", "0.05", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("= 0.350000: highly degenerate"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("mu_")).count(), 2);
}

#[test]
fn critical_values_validate_against_numeric_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    for (n, s) in [("6", "2"), ("7", "2"), ("6", "3"), ("9", "4")] {
        let o = slnet(&[
            "critical-values",
            "--n",
            n,
            "--s",
            s,
            "--c",
            "0.05",
            "--validate",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "N={n} s={s}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("numeric diagonalization gap = "));
    }
}

#[test]
fn critical_values_bad_range_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = slnet(&["critical-values", "--n", "6", "--s", "4", "--c", "0.05", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hopf_prints_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let o = slnet(&["hopf", "--omega", "1.0", "--validate", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("p2      +1.000000"), "{text}");
    assert!(text.contains("zeta2   -2.000000"), "{text}");
    assert!(text.contains("T2      +0.000000") || text.contains("T2      -0.000000"), "{text}");
    let kv = std::fs::read_to_string(dir.path().join("hopf.txt")).unwrap();
    assert!(kv.contains("classification = supercritical"));
}

#[test]
fn simulate_reports_complete_sync() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), RING_SYNC);
    let out = dir.path().join("out");
    let o = slnet(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("state = complete"), "{text}");
    assert!(text.contains("complete_sync = true"));
    for f in ["trajectory.csv", "diagnostics.csv", "sync_report.txt"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let header = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(header.starts_with("t,x_1,y_1,"));
}

#[test]
fn simulate_validate_refines_integrator() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), K3);
    let o = slnet(&["simulate", "--config", &cfg, "--validate", "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("refined-integrator trajectory gap = "));

    let coarse = K3.replace("omega = 0.0", "omega = 1.0").replace("t_end = 100.0", "t_end = 300.0")
        + "\n[integrator]\nscheme = \"rk4\"\ndt = 0.5\n";
    let cfg = write_config(dir.path(), &coarse.replace("sample_every = 0.05", "sample_every = 0.5"));
    let o = slnet(&["simulate", "--config", &cfg, "--validate", "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn simulate_is_bit_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), K3);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = slnet(&["simulate", "--config", &cfg, "--seed", "9", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["trajectory.csv", "diagnostics.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn simulate_decayed_without_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), K3);
    let out = dir.path().join("out");
    let o = slnet(&[
        "simulate",
        "--config",
        &cfg,
        "--set",
        "params.mu=-1",
        "--set",
        "params.c=0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("state = decayed"));
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[topology\nkind = ");
    let o = slnet(&["simulate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let cfg = write_config(dir.path(), &K3.replace("c = 0.01", "c = 0.01\nstrength = 2"));
    assert_eq!(slnet(&["simulate", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(slnet(&["simulate", "--config", "/nonexistent/run.toml"]).status.code(), Some(2));
}

#[test]
fn divergence_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let body = K3.replace("radii = 0.5", "radii = 50.0") + "\n[integrator]\nscheme = \"rk4\"\ndt = 1.0\n";
    let cfg = write_config(dir.path(), &body);
    let o = slnet(&["simulate", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("diverged"));
}

#[test]
fn certify_anti_death_and_degree_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), K3);
    let out = dir.path().join("out");
    let o =
        slnet(&["certify", "--config", &cfg, "--validate", "--set", "run.t_end=600", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("[anti-death]\nsatisfied = true"), "{text}");
    assert!(text.contains("anti-death: confirmed"), "{text}");
    assert!(text.contains("robust-sync: confirmed"), "{text}");
    assert!(out.join("validation.txt").exists());

    let o = slnet(&["certify", "--config", &cfg, "--set", "params.c=0.2", "--out", out.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("[anti-death]\nsatisfied = false"), "{text}");
    assert!(text.contains("clause i : c < c_star") && text.contains(": VIOLATED"), "{text}");
    assert!(text.contains("[degree-sync]\nsatisfied = true"), "{text}");
}

#[test]
fn certify_reports_frequency_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &K3.replace("omega = 0.0", "omega = [1.0, 1.2, 1.0]"));
    let o = slnet(&["certify", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let robust = text.split("[robust-sync]").nth(1).unwrap();
    assert!(robust.contains("satisfied = false"));
    assert!(robust.contains("clause identical_frequencies") && robust.contains("VIOLATED"));
}

#[test]
fn spectrum_writes_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &RING_SYNC.replace("c = 0.02", "c = 0.05"));
    let out = dir.path().join("out");
    let o = slnet(&["spectrum", "--config", &cfg, "--validate", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(stdout(&o).contains("reconstruction_residual"));

    let cfg = write_config(dir.path(), K3);
    assert_eq!(slnet(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let cfg = write_config(dir.path(), &K3.replace("omega = 0.0", "omega = [1.0, 1.2, 1.0]"));
    assert_eq!(slnet(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn scan_writes_branch_files() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
[topology]
kind = "ring"
n = 6
s = 2

[params]
mu = 0.0
omega = 1.0
c = 0.05

[scan]
mu_grid = [-0.1, 0.1, 0.2]
perturbation = "synchronous"
transient_t = 100.0
"#;
    let cfg = write_config(dir.path(), body);
    let out = dir.path().join("out");
    let o = slnet(&["scan", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["scan.csv", "markers.csv", "branch_synchronous.dat", "branch_decayed.dat", "markers.dat"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert!(stdout(&o).contains("onset estimate = "));

    let o = slnet(&["scan", "--config", &cfg, "--validate", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("onset vs synchronous Hopf point"));
}

#[test]
fn edge_list_topology_resolves_relative_path() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("graph.txt"), "# path graph\n1 2\n2 3\n3 4\n").unwrap();
    let body = K3.replace("kind = \"complete\"\nn = 3", "kind = \"edge-list\"\npath = \"graph.txt\"");
    let cfg = write_config(dir.path(), &body);
    let o = slnet(&["certify", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    std::fs::write(dir.path().join("graph.txt"), "1 2\n3 4\n").unwrap();
    let o = slnet(&["certify", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
