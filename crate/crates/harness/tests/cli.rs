use std::process::Command;

fn ksbesov() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ksbesov"))
}

#[test]
fn verify_khm_exits_zero() {
    let out = ksbesov().args(["verify", "khm"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("khm: all checks passed"));
}

#[test]
fn aliased_energy_run_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("energy.csv");
    let out = ksbesov()
        .args(["verify", "energy", "--N", "64", "--no-dealias", "--csv"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    let report = std::fs::read_to_string(&csv).unwrap();
    assert!(report.starts_with("suite,check,value,limit,kind,passed,note"));
    assert!(report.contains("energy,per-frame residual_rel"));
    assert!(report.contains(",false,"));
}

#[test]
fn unknown_suite_is_rejected() {
    let out = ksbesov().args(["verify", "nonsense"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let snap = dir.path().join("run.ksb");
    std::fs::write(&cfg, "# short run\nL = 22\nN = 64\nt-burn = 5\nt-avg = 100\ndt-rec = 1\n").unwrap();
    let out = ksbesov()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args(["--t-avg", "4", "--out"])
        .arg(&snap)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let traj = ksbesov_harness::snapshot::load_trajectory(&snap).unwrap();
    assert_eq!(traj.len(), 5);
    assert_eq!(traj.grid().n(), 64);

    let spec = dir.path().join("spec.csv");
    let out = ksbesov().args(["spectrum", "--input"]).arg(&snap).arg("--out").arg(&spec).output().unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&spec).unwrap();
    assert_eq!(text.lines().next(), Some("xi,S"));
    assert_eq!(text.lines().count(), 1 + 31);

    let out = ksbesov().args(["structure", "--input"]).arg(&snap).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("h,value"));

    let out = ksbesov().args(["norms", "--input"]).arg(&snap).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 5);
}

#[test]
fn bad_config_key_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "L = 22\nviscosity = 3\n").unwrap();
    let out = ksbesov().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
