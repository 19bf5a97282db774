use std::fs;
use std::process::{Command, Output};

fn slabwell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slabwell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(text: &str, index: usize) -> Vec<f64> {
    csv_rows(text).iter().map(|r| r[index].parse().unwrap()).collect()
}

#[test]
fn solve_reproduces_harmonic_block() {
    let out = slabwell(&["solve", "--potential", "harmonic", "--walls", "-10", "10", "--n", "2000", "--scan", "0", "14"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "index,energy,bracket_lo,bracket_hi,residual_shoot,residual_B,nodes"
    );
    let energies = column(&text, 1);
    assert_eq!(energies.len(), 7);
    for (p, e) in energies.iter().enumerate() {
        assert!((e - (2 * p + 1) as f64).abs() < 5e-3);
    }
    let nodes: Vec<usize> = csv_rows(&text).iter().map(|r| r[6].parse().unwrap()).collect();
    assert_eq!(nodes, (0..7).collect::<Vec<_>>());
}

#[test]
fn solve_quartic_narrow_walls() {
    let out = slabwell(&["solve", "--potential", "poly:1*x^2+1*x^4", "--walls", "-1", "1", "--n", "2000", "--scan", "0", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let energies = column(&stdout(&out), 1);
    assert_eq!(energies.len(), 2);
    assert!((energies[0] - 2.635).abs() < 1e-2);
    assert!((energies[1] - 10.265).abs() < 1e-2);
}

#[test]
fn csv_and_json_carry_identical_values() {
    let base = ["solve", "--potential", "morse:400,1", "--walls", "-2", "2", "--n", "500", "--scan", "0", "100"];
    let csv = stdout(&slabwell(&base));
    let mut args = base.to_vec();
    args.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&slabwell(&args))).unwrap();
    let levels = json["levels"].as_array().unwrap();
    let rows = csv_rows(&csv);
    assert_eq!(levels.len(), rows.len());
    for (row, level) in rows.iter().zip(levels) {
        for (k, key) in ["energy", "bracket_lo", "bracket_hi", "residual_shoot", "residual_B"].iter().enumerate() {
            let from_csv: f64 = row[k + 1].parse().unwrap();
            assert_eq!(from_csv, level[*key].as_f64().unwrap(), "{key}");
        }
        assert_eq!(row[0].parse::<u64>().unwrap(), level["index"].as_u64().unwrap());
    }
}

#[test]
fn reversed_walls_are_a_usage_error() {
    let out = slabwell(&["solve", "--potential", "harmonic", "--walls", "10", "-10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--walls"));
}

#[test]
fn validation_failures_exit_2() {
    for args in [
        vec!["oracle", "--walls", "-1", "1"],
        vec!["solve", "--potential", "harmonic", "--walls", "-1", "1", "--n", "-1"],
        vec!["solve", "--potential", "harmonic", "--walls", "-1", "1", "--de", "0"],
        vec!["solve", "--potential", "poly:1*x^", "--walls", "-1", "1"],
        vec!["solve", "--potential", "morse:-1,1", "--walls", "-1", "1"],
        vec!["solve", "--potential", "harmonic", "--walls", "-1", "1", "--scan", "5", "1"],
        vec!["convergence", "--potential", "harmonic", "--walls", "-1", "1"],
        vec!["solve", "--bogus"],
    ] {
        let out = slabwell(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn wavefunction_ground_state_of_square_well() {
    let out = slabwell(&["wavefunction", "--potential", "squarewell", "--walls", "-5", "5", "--n", "0", "--level", "0", "--points", "101"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "x,psi");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 101);
    let psi: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(psi[0].abs() <= 1e-10 && psi[100].abs() <= 1e-10);
    assert!(psi[1..100].iter().all(|&p| p > 0.0));
    let exact = 0.2f64.sqrt();
    assert!((psi[50] - exact).abs() < 1e-8);
}

#[test]
fn wavefunction_first_excited_harmonic_is_odd() {
    let out = slabwell(&[
        "wavefunction", "--potential", "harmonic", "--walls", "-10", "10", "--n", "2000", "--level", "1",
        "--points", "2001", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["nodes"], 1);
    let psi: Vec<f64> = json["psi"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for j in 0..psi.len() {
        assert!((psi[j] + psi[psi.len() - 1 - j]).abs() <= 1e-6);
    }
}

#[test]
fn missing_level_exits_3() {
    let out = slabwell(&[
        "wavefunction", "--potential", "harmonic", "--walls", "-10", "10", "--n", "2000", "--scan", "0", "14", "--level", "99",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn morse_convergence_table() {
    let out = slabwell(&["convergence", "--potential", "morse:400,1", "--walls", "-2", "2", "--n-values", "10,30,50,200,2000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "n,E0");
    let ns: Vec<usize> = csv_rows(&text).iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(ns, vec![10, 30, 50, 200, 2000]);
    let e0 = column(&text, 1);
    assert!(e0.windows(2).all(|w| w[1] <= w[0]));
    assert!(e0[..3].iter().all(|&e| e > 19.75));
    assert!((e0[4] - 19.75).abs() <= 0.05);
}

#[test]
fn convergence_header_lists_levels() {
    let out = slabwell(&["convergence", "--potential", "harmonic", "--walls", "-5", "5", "--n-values", "10,30", "--levels", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next().unwrap(), "n,E0,E1,E2");
}

#[test]
fn oracle_compare_on_harmonic() {
    let out = slabwell(&[
        "oracle", "--potential", "harmonic", "--walls", "-10", "10", "--levels", "4", "--richardson", "--compare",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "index,oracle_coarse,oracle_fine,oracle,solver,delta"
    );
    let oracle = column(&text, 3);
    for (p, e) in oracle.iter().enumerate() {
        assert!((e - (2 * p + 1) as f64).abs() < 1e-4);
    }
    assert!(column(&text, 5).iter().all(|d| d.abs() <= 2e-3));

    let plain = slabwell(&["oracle", "--potential", "harmonic", "--walls", "-10", "10"]);
    assert_eq!(stdout(&plain).lines().next().unwrap(), "index,oracle");
}

#[test]
fn oracle_records_literature_values() {
    let out = slabwell(&[
        "oracle", "--potential", "poly:1*x^2+1*x^4", "--walls", "-2", "2", "--levels", "2", "--richardson", "--compare",
        "--reference", "1:reported=4.695", "--reference", "1:Alhendi=4.58734092", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(json["max_abs_delta"].as_f64().unwrap() <= 2e-3);
    let refs = json["references"].as_array().unwrap();
    assert_eq!(refs.len(), 2);
    let closest: Vec<&str> = refs
        .iter()
        .filter(|r| r["closest"] == true)
        .map(|r| r["label"].as_str().unwrap())
        .collect();
    assert_eq!(closest, vec!["reported"]);
    let oracle = json["levels"][1]["oracle"].as_f64().unwrap();
    assert_eq!(refs[0]["oracle"].as_f64().unwrap(), oracle);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        "potential = \"squarewell\"\nwalls = [-5.0, 5.0]\nn = 7\nscan = [0.0, 1.0]\nformat = \"json\"\n",
    )
    .unwrap();
    let path = config.to_str().unwrap();
    let out = slabwell(&["solve", "--config", path]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["n"], 7);
    assert_eq!(json["levels"].as_array().unwrap().len(), 3);

    let out = slabwell(&["solve", "--config", path, "--format", "csv", "--scan", "0", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&out)).len(), 2);

    fs::write(&config, "potentail = \"harmonic\"\n").unwrap();
    assert_eq!(slabwell(&["solve", "--config", path]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("levels.csv");
    let out = slabwell(&[
        "solve", "--potential", "squarewell", "--walls", "-5", "5", "--n", "0", "--scan", "0", "1", "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&target).unwrap();
    assert_eq!(csv_rows(&text).len(), 3);
}
