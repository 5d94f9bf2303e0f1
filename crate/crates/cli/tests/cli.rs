use std::process::{Command, Output};

fn lqfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lqfi")).args(args).output().expect("spawn lqfi")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn csv_headers_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let deph = lqfi(&["dephasing", "--s-steps", "2", "--grid", "100", "--detail-dir", d]);
    assert_eq!(stdout(&deph).lines().next(), Some("s,N_lqfi,N_lqu"));
    let detail = std::fs::read_to_string(dir.path().join("dephasing_s_1.csv")).unwrap();
    assert_eq!(detail.lines().next(), Some("t,gamma,P,Q,U,dQdt,dUdt"));
    assert_eq!(detail.lines().count(), 101);

    let amp = lqfi(&["amplitude", "--steps", "2", "--grid", "100", "--detail-dir", d]);
    assert_eq!(stdout(&amp).lines().next(), Some("lambda_over_gamma0,N_lqfi,N_lqu"));
    let detail = std::fs::read_to_string(dir.path().join("amplitude_ratio_0.05.csv")).unwrap();
    assert_eq!(detail.lines().next(), Some("t,absR,Q,U,dQdt,dUdt"));

    let dep = lqfi(&["depolarizing", "--steps", "100"]);
    assert_eq!(stdout(&dep).lines().next(), Some("nu,Upsilon,Q,U,dQdt,dUdt"));
    assert!(String::from_utf8_lossy(&dep.stderr).starts_with("N_lqfi="));
}

#[test]
fn dephasing_eleven_rows_with_markovian_first() {
    let out = lqfi(&["dephasing", "--s-min", "1", "--s-max", "6", "--s-steps", "11", "--grid", "500"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 11);
    let first: Vec<f64> = rows[0].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], 1.0);
    assert!(first[1].abs() <= 1e-10);
}

#[test]
fn exit_codes() {
    assert_eq!(lqfi(&["dephasing", "--grid", "99"]).status.code(), Some(2));
    assert_eq!(lqfi(&["nonsense"]).status.code(), Some(2));
    assert_eq!(lqfi(&["--format", "xml", "verify"]).status.code(), Some(2));
    assert_eq!(lqfi(&["depolarizing", "--mu", "-1"]).status.code(), Some(2));
    assert_eq!(lqfi(&["depolarizing", "--r1", "0.9", "--r2", "0.9", "--r3", "0.9"]).status.code(), Some(2));
    assert_eq!(lqfi(&["sweep"]).status.code(), Some(2));
    assert_eq!(lqfi(&["--help"]).status.code(), Some(0));
    assert_eq!(lqfi(&["oracle", "--states", "2"]).status.code(), Some(0));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# depolarizing run\nmu = 5\nnu_max = 2\nsteps = 300\n").unwrap();
    let c = conf.to_str().unwrap();
    let out = lqfi(&["--config", c, "--format", "json", "depolarizing", "--steps", "150"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["mu"], 5.0);
    assert_eq!(doc["config"]["nu_max"], 2.0);
    assert_eq!(doc["config"]["steps"], 150);
    assert_eq!(doc["config"]["r1"], 0.6);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 150);
    assert!(doc["report"]["n_lqfi"].as_f64().unwrap() > 0.0);
}

#[test]
fn out_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/dep.csv");
    let out = lqfi(&["--out", path.to_str().unwrap(), "depolarizing", "--steps", "100"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 101);
}
