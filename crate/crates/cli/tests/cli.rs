use std::process::Command;

use moltiming_cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("moltiming").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

/// Data rows of a CSV table as string cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn scalar(csv: &str, name: &str) -> f64 {
    rows(csv)
        .into_iter()
        .find(|r| r[0] == name)
        .unwrap_or_else(|| panic!("no row {name} in {csv}"))[1]
        .parse()
        .unwrap()
}

#[test]
fn threshold_rows() {
    let out = ok(&["threshold", "--c", "2", "--delta", "1", "--m", "1,3,15"]);
    assert!(out.starts_with("m,theta\n"));
    let expected = [(1, 1.372), (3, 1.286), (15, 1.146)];
    for (row, (m, theta)) in rows(&out).iter().zip(expected) {
        assert_eq!(row[0].parse::<usize>().unwrap(), m);
        assert!((row[1].parse::<f64>().unwrap() - theta).abs() < 1e-3);
    }
}

#[test]
fn threshold_accepts_ranges() {
    let out = ok(&["threshold", "--c", "2", "--delta", "1", "--m", "1-4"]);
    assert_eq!(rows(&out).len(), 4);
}

#[test]
fn invalid_flags_exit_2() {
    let (code, _, err) = invoke(&["threshold", "--c", "2", "--delta", "1", "--m", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("M must be ≥ 1"), "{err}");
    assert_eq!(invoke(&["threshold", "--c", "-1", "--delta", "1", "--m", "1"]).0, 2);
    assert_eq!(invoke(&["threshold", "--delta", "1"]).0, 2);
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["pe", "--detector", "ml", "--c", "1", "--delta", "1", "--m", "2"]).0, 2);
    assert_eq!(invoke(&["sweep", "--fig", "6"]).0, 2);
}

#[test]
fn help_exits_0() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("required-m"));
}

#[test]
fn unwritable_output_exits_4() {
    let (code, _, _) = invoke(&[
        "threshold", "--c", "2", "--delta", "1", "--out", "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(code, 4);
}

#[test]
fn pe_examples() {
    let fa = scalar(&ok(&["pe", "--detector", "fa", "--c", "1", "--delta", "1", "--m", "2"]), "pe");
    assert!((fa - 0.2186).abs() < 5e-4, "{fa}");

    let fa1 = ok(&["pe", "--detector", "fa", "--c", "1", "--delta", "1", "--m", "1"]);
    let single = ok(&["pe", "--detector", "ml-single", "--c", "1", "--delta", "1"]);
    assert_eq!(fa1, single);

    let gray = scalar(
        &ok(&["pe", "--detector", "gray-fa", "--c", "1", "--delta", "3", "--bits", "3", "--m", "25"]),
        "pe",
    );
    assert!((0.005..=0.02).contains(&gray), "{gray}");
}

#[test]
fn pe_monte_carlo() {
    let out = ok(&[
        "pe", "--detector", "ml", "--c", "1", "--delta", "1", "--m", "2", "--mc", "--trials", "2e5",
    ]);
    let p = scalar(&out, "p_hat");
    let (lo, hi) = (scalar(&out, "ci_lo"), scalar(&out, "ci_hi"));
    assert!(lo <= p && p <= hi);
    assert!((p - 0.2174).abs() < 0.005, "{p}");
    assert_eq!(scalar(&out, "trials"), 2e5);
}

#[test]
fn exponent_example() {
    let out = ok(&["exponent", "--c", "0.5", "--delta", "0.1"]);
    assert!((scalar(&out, "E_FA") - 0.025674).abs() < 5e-4);
    assert!((scalar(&out, "E_ML") - 0.044106).abs() < 5e-4);
}

#[test]
fn exponent_tolerance_flags() {
    let loose = ok(&["exponent", "--c", "0.5", "--delta", "0.1", "--tol-x", "1e-3", "--tol-f", "1e-6"]);
    let tight = ok(&["exponent", "--c", "0.5", "--delta", "0.1"]);
    assert!((scalar(&loose, "E_ML") - scalar(&tight, "E_ML")).abs() < 1e-5);
}

#[test]
fn mismatch_example() {
    let out = ok(&["mismatch", "--c", "1", "--delta", "5", "--m", "5"]);
    assert!((scalar(&out, "bound") - 0.001).abs() < 1e-4);
}

#[test]
fn required_m_single_point() {
    let out = ok(&["required-m", "--c", "1", "--delta", "1", "--target", "0.01"]);
    let m: usize = rows(&out)[0][3].parse().unwrap();
    let pe = |m: &str| scalar(&ok(&["pe", "--c", "1", "--delta", "1", "--m", m]), "pe");
    assert!(pe(&m.to_string()) <= 0.01);
    assert!(pe(&(m - 1).to_string()) > 0.01);
}

#[test]
fn required_m_figure_has_full_grid() {
    let out = ok(&["required-m", "--fig", "6"]);
    assert!(out.starts_with("c,delta,target,m_required\n"));
    assert_eq!(rows(&out).len(), 24);
}

const SWEEP: [&str; 14] = [
    "sweep", "--detector", "fa", "--vary", "delta", "--grid", "0.5,1,2", "--c", "1", "--m", "2",
    "--trials", "20000", "--seed",
];

#[test]
fn sweep_is_byte_identical_on_rerun() {
    let mut args = SWEEP.to_vec();
    args.push("9");
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a, b);
    assert!(a.starts_with("param,value,detector,p_hat,ci_lo,ci_hi,trials,seed\n"));
    assert_eq!(rows(&a).len(), 3);
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let mut args = SWEEP.to_vec();
    args.push("3");
    let csv = ok(&args);
    args.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&ok(&args)).unwrap();
    let json = json.as_array().unwrap();
    for (row, obj) in rows(&csv).iter().zip(json) {
        for (i, key) in ["value", "p_hat", "ci_lo", "ci_hi"].iter().enumerate() {
            let from_csv: f64 = row[[1, 3, 4, 5][i]].parse().unwrap();
            assert_eq!(from_csv.to_bits(), obj[key].as_f64().unwrap().to_bits(), "{key}");
        }
        assert_eq!(row[2], obj["detector"].as_str().unwrap());
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let p = path.to_str().unwrap();
    let stdout = ok(&["threshold", "--c", "2", "--delta", "1", "--m", "1,3", "--out", p]);
    assert!(stdout.is_empty());
    let direct = ok(&["threshold", "--c", "2", "--delta", "1", "--m", "1,3"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn failed_sweep_points_exit_3_after_writing() {
    // a Lévy detector on a drift channel cannot be built
    let (code, out, err) = invoke(&[
        "sweep", "--detector", "fa", "--vary", "velocity", "--grid", "0,0.5", "--distance", "1",
        "--diffusion", "0.5", "--m", "2", "--trials", "1000",
    ]);
    assert_eq!(code, 3, "{err}");
    let r = rows(&out);
    assert_eq!(r.len(), 2);
    assert!(!r[0][3].is_empty());
    assert!(r[1][3].is_empty());
}

#[test]
fn presets_come_from_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("presets.toml");
    std::fs::write(&path, "[lab]\nd = 2.0\nD = 1.0\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_moltiming");
    let output = Command::new(bin)
        .args(["threshold", "--channel-preset", "lab", "--delta", "1", "--m", "3"])
        .env("MOLTIMING_CONFIG", &path)
        .output()
        .unwrap();
    assert!(output.status.success());
    // d²/2D = 2, the same channel as --c 2
    let direct = ok(&["threshold", "--c", "2", "--delta", "1", "--m", "3"]);
    assert_eq!(String::from_utf8(output.stdout).unwrap(), direct);

    let missing = Command::new(bin)
        .args(["threshold", "--channel-preset", "nope", "--delta", "1"])
        .env("MOLTIMING_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let unreadable = Command::new(bin)
        .args(["threshold", "--channel-preset", "lab", "--delta", "1"])
        .env("MOLTIMING_CONFIG", dir.path().join("absent.toml"))
        .output()
        .unwrap();
    assert_eq!(unreadable.status.code(), Some(4));
}

#[test]
fn builtin_presets_resolve() {
    let a = ok(&["threshold", "--channel-preset", "still-c2", "--delta", "1", "--m", "3"]);
    let b = ok(&["threshold", "--c", "2", "--delta", "1", "--m", "3"]);
    assert_eq!(a, b);
}
