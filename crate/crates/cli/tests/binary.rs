use std::path::Path;
use std::process::Command;

fn rmi() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmi"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn run_writes_snapshots_into_the_override_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(
        dir.path(),
        "problem=sod\ncells=50\noutput_interval=0.5\noutput_dir=/nonexistent/ignored\n",
    );
    let status = rmi()
        .arg("run")
        .arg(&cfg)
        .env("RMI_OUTPUT_DIR", &out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let names: Vec<String> = {
        let mut v: Vec<_> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        v.sort();
        v
    };
    assert_eq!(names.len(), 5);
    assert_eq!(names[4], "snapshot_0004.csv");
    let last = rmi_cli::read_snapshot(&out.join("snapshot_0004.csv")).unwrap();
    assert_eq!(last.time, 2.0);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem=sod\ncfl=1.5\n");
    let out = rmi().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("cfl"), "{err}");
}

#[test]
fn solver_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "problem=shu-osher\ncells=50\ncfl=0.99\nacm_strength=1000\nepsilon=1e30\n",
    );
    let out = rmi()
        .arg("run")
        .arg(&cfg)
        .env("RMI_OUTPUT_DIR", dir.path().join("o"))
        .output()
        .unwrap();
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(3), "{err}");
    assert!(err.contains("invalid state"), "{err}");
}

#[test]
fn oracle_prints_the_exact_sod_solution() {
    let out = rmi()
        .args(["oracle", "sod", "--cells", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,rho,u,p,M");
    assert_eq!(lines.len(), 11);
    let first: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(first, vec![-4.5, 1.0, 0.0, 1.0, 0.0]);
}

#[test]
fn converge_subcommand_prints_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem=sod\nt_end=0.5\n");
    let out = rmi()
        .args(["converge"])
        .arg(&cfg)
        .args(["--cells", "20,40"])
        .env("RMI_OUTPUT_DIR", dir.path().join("c"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(dir.path().join("c/sod_40/snapshot_0001.csv").exists());
}

#[test]
fn unreadable_config_and_bad_usage() {
    let out = rmi().args(["run", "/nonexistent.cfg"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = rmi().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
