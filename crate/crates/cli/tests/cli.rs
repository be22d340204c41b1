//! End-to-end tests of the `twocell` binary: flag handling, config files,
//! output artifacts, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn twocell(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twocell"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Small but complete run: 2 users so the exhaustive methods stay cheap.
const TINY_RUN: &[&str] = &[
    "run",
    "--users",
    "2",
    "--trials",
    "4",
    "--snr-start",
    "0",
    "--snr-stop",
    "10",
    "--snr-step",
    "5",
];

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["--help"][..], &["run", "--help"][..], &["--version"][..]] {
        let out = twocell(args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // Bare invocation, unknown subcommand, unknown flag, malformed value.
    for args in [
        &[][..],
        &["frobnicate"][..],
        &["run", "--no-such-flag"][..],
        &["run", "--trials", "many"][..],
    ] {
        let out = twocell(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn run_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = TINY_RUN.to_vec();
    args.extend(["--out", "sweep.csv", "--plot", "sweep.svg"]);
    let out = twocell(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("sweep.csv"));

    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,snr_db,trials,mean_sum_rate,std_error"
    );
    // 5 methods x 3 SNR points.
    assert_eq!(lines.count(), 15);

    let svg = std::fs::read_to_string(dir.path().join("sweep.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 5);
}

#[test]
fn method_subset_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = TINY_RUN.to_vec();
    args.extend([
        "--methods",
        "hungarian_full,random_full",
        "--out",
        "two.csv",
    ]);
    let out = twocell(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("two.csv")).unwrap();
    let methods: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert!(methods
        .iter()
        .all(|m| *m == "hungarian_full" || *m == "random_full"));
    assert_eq!(
        methods.iter().filter(|m| **m == "hungarian_full").count(),
        3
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let mut args = TINY_RUN.to_vec();
        args.extend(["--seed", "7", "--out", name]);
        let out = twocell(&args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn changing_the_seed_changes_the_numbers() {
    let dir = tempfile::tempdir().unwrap();
    for (name, seed) in [("a.csv", "7"), ("b.csv", "8")] {
        let mut args = TINY_RUN.to_vec();
        args.extend(["--seed", seed, "--out", name]);
        assert_eq!(twocell(&args, dir.path()).status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn config_file_supplies_values_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("sweep.conf"),
        "# desk-scale check\n\
         users = 2\n\
         trials = 5\n\
         snr-start = 0\n\
         snr-stop = 5\n\
         snr-step = 5\n\
         methods = hungarian_full\n\
         out = from_file.csv\n",
    )
    .unwrap();

    // File alone.
    let out = twocell(&["run", "--config", "sweep.conf"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("from_file.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("hungarian_full,0.000000,5,"));

    // Flag overrides the file's trial count and output path.
    let out = twocell(
        &[
            "run",
            "--config",
            "sweep.conf",
            "--trials",
            "2",
            "--out",
            "cli_wins.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("cli_wins.csv")).unwrap();
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("hungarian_full,0.000000,2,"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.conf"), "userz = 3\n").unwrap();
    let out = twocell(&["run", "--config", "bad.conf"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown key 'userz'"));
}

#[test]
fn malformed_config_line_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.conf"), "users\n").unwrap();
    let out = twocell(&["run", "--config", "bad.conf"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("key = value"));
}

#[test]
fn missing_config_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = twocell(&["run", "--config", "nope.conf"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_settings_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["run", "--trials", "0"],
        &["run", "--users", "0"],
        &["run", "--snr-step", "0"],
        &["run", "--snr-start", "10", "--snr-stop", "0"],
        &["run", "--alpha", "-1"],
        &["run", "--delta", "0"],
        &["run", "--methods", "hungarian_opt,"],
        &["run", "--methods", "bogus_method"],
        // Exhaustive joint search is capped at 6 users.
        &[
            "run",
            "--users",
            "7",
            "--trials",
            "1",
            "--methods",
            "exhaustive_full",
        ],
        &["verify", "--grid-resolution", "1"],
    ];
    for args in cases {
        let out = twocell(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn oversized_users_without_exhaustive_methods_is_fine() {
    let dir = tempfile::tempdir().unwrap();
    let out = twocell(
        &[
            "run",
            "--users",
            "8",
            "--trials",
            "2",
            "--snr-start",
            "0",
            "--snr-stop",
            "0",
            "--snr-step",
            "5",
            "--methods",
            "hungarian_opt,random_full",
            "--out",
            "big.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn reserved_method_name_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = TINY_RUN.to_vec();
    args.extend(["--methods", "dc_programming"]);
    let out = twocell(&args, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("reserved but not implemented"));
}

#[test]
fn verify_passes_at_coarse_resolution() {
    // Coarse grid keeps this test quick; the acceptance suite runs the full
    // resolution. A coarse grid only weakens the oracle, never the solver.
    let dir = tempfile::tempdir().unwrap();
    let out = twocell(&["verify", "--grid-resolution", "201"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("hungarian vs enumeration: 500/500"));
    assert!(text.contains("resolution 201"));
    assert!(text.contains("1500/1500"));
}

#[test]
fn verify_reads_grid_resolution_from_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("v.conf"), "grid-resolution = 151\n").unwrap();
    let out = twocell(&["verify", "--config", "v.conf"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("resolution 151"));
}
