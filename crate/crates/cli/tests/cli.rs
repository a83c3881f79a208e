use std::path::Path;
use std::process::{Command, Output};

fn isum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isum")).args(args).env_remove("ISUM_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn chi_limits() {
    let o = isum(&["chi", "--N", "4", "--g", "0:0:1"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["N", "g", "chi_closed"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), 0.25);

    let o = isum(&["chi", "--N", "8", "--g", "1:1:1"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), 1.75);
}

#[test]
fn chi_with_direct_sum() {
    let o = isum(&["chi", "--N", "4", "--g", "0.5:0.1:0.7", "--parity", "+"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["N", "g", "chi_closed", "chi_direct", "rel_err"]);
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        assert!(r[4].parse::<f64>().unwrap() <= 1e-12, "{r:?}");
    }
}

#[test]
fn cd_at_critical_point() {
    let o = isum(&["cd", "--N", "4", "--parity", "+", "--g", "1"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["N", "parity", "g", "m", "h_closed", "h_direct", "rel_err"]);
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        assert_eq!(r[4].parse::<f64>().unwrap(), 0.125);
        assert!((r[5].parse::<f64>().unwrap() - 0.125).abs() < 1e-15);
    }
}

#[test]
fn cd_skips_direct_above_cutoff() {
    let o = isum(&["cd", "--N", "64", "--parity", "-", "--g", "0.9", "--m", "3", "--direct-cutoff", "10"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0].len(), 5);
    assert_eq!(rows.len(), 2);
}

#[test]
fn cd_table_folds_orders() {
    let o = isum(&["cd", "--N", "6", "--parity", "+", "--g", "0.5,1.5", "--table"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["N", "parity", "g", "m", "weight"]);
    assert_eq!(rows.len(), 1 + 2 * 3);
    assert_eq!(rows[3][3], "3");
}

#[test]
fn edcheck_exit_codes() {
    let o = isum(&["edcheck", "--N", "8", "--g", "1", "--delta", "1e-3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("chi_fd"));
    assert_eq!(isum(&["edcheck", "--N", "13", "--g", "1"]).status.code(), Some(2));
    assert_eq!(isum(&["edcheck", "--N", "4", "--g", "1", "--delta", "0.5"]).status.code(), Some(2));
}

fn order_count(even: bool, n: u64) -> u64 {
    if even {
        (2 * n + 1) + (2 * n - 1)
    } else {
        (2 * n + 2) + 2 * n
    }
}

#[test]
fn verify_report_covers_the_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = isum(&["verify", "--n-max", "8", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: Vec<serde_json::Value> = serde_json::from_str(&read(&out)).unwrap();
    let per_family = |even| (1..=8).map(|n| order_count(even, n)).sum::<u64>() * 10;
    assert_eq!(reports.len() as u64, 2 * per_family(true) + 2 * per_family(false));
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn verify_single_family() {
    let o = isum(&["verify", "--families", "kb", "--kinds", "f", "--n-max", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("kb: 30/30"));
}

#[test]
fn verify_impossible_tolerance_fails() {
    let o = isum(&["verify", "--n-max", "3", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(isum(&["chi", "--N", "4", "--g", "1:-1:2"]).status.code(), Some(2));
    assert_eq!(isum(&["chi", "--N", "4", "--g", "abc"]).status.code(), Some(2));
    assert_eq!(isum(&["verify", "--n-max", "0"]).status.code(), Some(2));
    assert_eq!(isum(&["cd", "--N", "4", "--parity", "+", "--g", "1", "--m", "9"]).status.code(), Some(2));
    assert_eq!(isum(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn thread_variable_is_honored() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_isum"))
            .args(["chi", "--N", "16", "--g", "0:0.05:2"])
            .env("ISUM_THREADS", v)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("lots").status.code(), Some(2));
}

#[test]
fn chimax_rows() {
    let o = isum(&["chimax", "--N-list", "2,8,32"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["N", "g_star", "chi_star", "one_minus_gstar"]);
    let g: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(g[0] < g[1] && g[1] < g[2] && g[2] < 1.0);
}

#[test]
fn bench_reports_timings() {
    let o = isum(&["bench", "--n", "100", "--kind", "h", "--family", "kc", "--m", "3", "--x", "0.7", "--reps", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for key in ["closed_ns_per_eval", "direct_ns_per_eval", "speedup"] {
        assert!(s.contains(key), "{s}");
    }
}

#[test]
fn csv_files_are_lf_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = isum(&["chi", "--N", "10", "--g", "-2:0.25:2", "--parity", "+", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let text = read(&a);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert_eq!(text, read(&b));
}
