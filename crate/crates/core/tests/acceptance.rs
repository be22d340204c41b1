//! Acceptance gate: seven end-to-end checks with pinned tolerances and
//! runtime budgets. Each test prints one `[k/7] name: pass|fail` line
//! (visible with `--nocapture`) and then enforces the result.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twocell::channel::{generate_realization, Cell};
use twocell::harness::{emit_csv, evaluate_method, run_sweep};
use twocell::power::fractional_form;
use twocell::rate::pair_sum_rate;
use twocell::verify::{verify_dinkelbach, verify_hungarian};
use twocell::{Method, PairChannel, SimConfig};

const SEED: u64 = 42;

fn report(index: usize, name: &str, ok: bool, detail: String) {
    println!("[{index}/7] {name}: {}", if ok { "pass" } else { "fail" });
    assert!(ok, "{name}: {detail}");
}

fn log_uniform_gain(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.gen_range(-3.0..1.0))
}

#[test]
fn acceptance_1_hungarian_matches_enumeration() {
    let start = Instant::now();
    let outcome = verify_hungarian(500, SEED);
    let elapsed = start.elapsed();
    let ok = outcome.passed() && outcome.checks == 500 && elapsed < Duration::from_secs(10);
    report(
        1,
        "hungarian equals brute force on 500 matrices (exact, < 10 s)",
        ok,
        format!("elapsed {elapsed:?}, failures {:?}", outcome.failures),
    );
}

#[test]
fn acceptance_2_pair_rate_equals_ratio_form() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let pc = PairChannel::new(
            log_uniform_gain(&mut rng),
            log_uniform_gain(&mut rng),
            log_uniform_gain(&mut rng),
            log_uniform_gain(&mut rng),
            1.0,
        );
        let p_max = [0.1, 1.0, 10.0][rng.gen_range(0..3)];
        let p1 = rng.gen_range(0.0..=p_max);
        let p2 = rng.gen_range(0.0..=p_max);
        let qf = fractional_form(&pc);
        let direct = pair_sum_rate(&pc, p1, p2);
        let via_ratio = (1.0 + qf.ratio(p1, p2)).log2();
        worst = worst.max((direct - via_ratio).abs());
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-9 && elapsed < Duration::from_secs(5);
    report(
        2,
        "pair rate equals log2(1 + f/g) on 1e4 samples (1e-9 abs, < 5 s)",
        ok,
        format!("worst gap {worst:.3e}, elapsed {elapsed:?}"),
    );
}

#[test]
fn acceptance_3_power_solver_matches_grid() {
    let start = Instant::now();
    let outcome = verify_dinkelbach(500, 1001, SEED);
    let elapsed = start.elapsed();
    let ok = outcome.passed() && outcome.checks == 1500 && elapsed < Duration::from_secs(60);
    report(
        3,
        "power solver within 1e-3 of the 1001-point grid, monotone λ, ≤ 50 iterations (< 60 s)",
        ok,
        format!("elapsed {elapsed:?}, failures {:?}", outcome.failures),
    );
}

#[test]
fn acceptance_4_sweep_curves_are_ordered() {
    let start = Instant::now();
    let cfg = SimConfig::new(3); // 2000 trials, seed 42, -10..30 dB in 5 dB steps
    let sr = run_sweep(&cfg, &Method::ALL).expect("sweep runs");
    let mean = |m: Method, snr: f64| {
        sr.rows
            .iter()
            .find(|r| r.method == m && r.snr_db == snr)
            .expect("row present")
            .mean_sum_rate
    };

    let mut failures = Vec::new();
    for &snr in &cfg.snr_grid_db {
        let ex_opt = mean(Method::ExhaustiveOpt, snr);
        let hu_opt = mean(Method::HungarianOpt, snr);
        let ex_full = mean(Method::ExhaustiveFull, snr);
        let hu_full = mean(Method::HungarianFull, snr);
        let rand_full = mean(Method::RandomFull, snr);

        if snr <= 0.0 && ex_opt - hu_opt > 0.02 * ex_opt {
            failures.push(format!(
                "{snr} dB: hungarian mean {hu_opt} not within 2% of exhaustive {ex_opt}"
            ));
        }
        if hu_opt < hu_full {
            failures.push(format!(
                "{snr} dB: power control loses, {hu_opt} < {hu_full}"
            ));
        }
        if ex_opt < ex_full {
            failures.push(format!(
                "{snr} dB: power control loses, {ex_opt} < {ex_full}"
            ));
        }
        if snr >= 10.0 && (hu_opt <= hu_full || ex_opt <= ex_full) {
            failures.push(format!("{snr} dB: power-control gap not strictly positive"));
        }
        if rand_full > hu_full {
            failures.push(format!(
                "{snr} dB: random assignment beats hungarian, {rand_full} > {hu_full}"
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(300) {
        failures.push(format!("sweep took {elapsed:?}"));
    }
    report(
        4,
        "2000-trial sweep reproduces the method ordering and low-SNR match (< 5 min)",
        failures.is_empty(),
        failures.join("; "),
    );
}

#[test]
fn acceptance_5_per_instance_dominance() {
    let cfg = SimConfig::new(3);
    let mut failures = Vec::new();
    for trial in 0..100 {
        let r = generate_realization(&cfg, trial);
        for snr in [0.0, 20.0] {
            let ex_opt = evaluate_method(Method::ExhaustiveOpt, &r, &cfg, snr).unwrap();
            let hu_opt = evaluate_method(Method::HungarianOpt, &r, &cfg, snr).unwrap();
            let hu_full = evaluate_method(Method::HungarianFull, &r, &cfg, snr).unwrap();
            if !(ex_opt >= hu_opt && hu_opt >= hu_full) {
                failures.push(format!(
                    "trial {trial} at {snr} dB: {ex_opt} vs {hu_opt} vs {hu_full}"
                ));
            }
        }
    }
    report(
        5,
        "exhaustive ≥ hungarian ≥ full power on every one of 100 instances at 0/20 dB",
        failures.is_empty(),
        failures.join("; "),
    );
}

#[test]
fn acceptance_6_sweeps_are_byte_identical() {
    let cfg = SimConfig::new(3);
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("first.csv"), dir.path().join("second.csv")];
    for path in &paths {
        let sr = run_sweep(&cfg, &Method::ALL).expect("sweep runs");
        emit_csv(&sr, path).expect("csv written");
    }
    let first = std::fs::read(&paths[0]).unwrap();
    let second = std::fs::read(&paths[1]).unwrap();
    let ok = !first.is_empty() && first == second;
    report(
        6,
        "two identically configured sweeps emit byte-identical CSV",
        ok,
        format!("{} vs {} bytes", first.len(), second.len()),
    );
}

#[test]
fn acceptance_7_channel_statistics() {
    let cfg = SimConfig::new(3); // path-loss exponent 3
    let per_realization = cfg.num_subchannels * cfg.users_per_cell * 2;
    let realizations = 100_000usize.div_ceil(per_realization);
    let (mut direct_sum, mut cross_sum, mut count) = (0.0, 0.0, 0usize);
    for trial in 0..realizations {
        let r = generate_realization(&cfg, trial as u64);
        for sub in 0..cfg.num_subchannels {
            for cell in Cell::BOTH {
                for user in 0..cfg.users_per_cell {
                    direct_sum += r.gain(sub, cell, user, cell);
                    cross_sum += r.gain(sub, cell, user, cell.other());
                    count += 1;
                }
            }
        }
    }
    let direct_mean = direct_sum / count as f64;
    let cross_mean = cross_sum / count as f64;
    let expected_cross = 5f64.powi(-3);
    let ok = count >= 100_000
        && (direct_mean - 1.0).abs() <= 0.02
        && (cross_mean - expected_cross).abs() <= 0.03 * expected_cross;
    report(
        7,
        "mean direct gain 1 ± 2% and mean cross gain 0.008 ± 3% over 1e5 draws",
        ok,
        format!("direct {direct_mean}, cross {cross_mean} (expected {expected_cross}), n {count}"),
    );
}
