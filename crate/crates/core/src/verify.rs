//! Self-check suites pitting the fast solvers against exhaustive oracles.
//!
//! These back the CLI `verify` subcommand: the Hungarian solve is compared
//! against permutation enumeration, and the fractional power solver against
//! a dense grid search. Both are deterministic given the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assign::{brute_force_max, hungarian_max, CostMatrix};
use crate::channel::PairChannel;
use crate::power::{dinkelbach, fractional_form, grid_oracle};

/// Budgets every solve in a verification run is held to.
pub const DINKELBACH_MAX_ITERATIONS: usize = 50;
pub const DINKELBACH_GRID_GAP: f64 = 1e-3;

/// Outcome of one oracle suite.
#[derive(Clone, Debug, Default)]
pub struct VerifyOutcome {
    /// Individual comparisons performed.
    pub checks: usize,
    /// Human-readable description of each failed comparison.
    pub failures: Vec<String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Hungarian vs. permutation enumeration on random square matrices.
///
/// Sizes cycle through 2–7; entries are uniform in [0, 1). The optimal
/// values must agree exactly.
pub fn verify_hungarian(cases: usize, seed: u64) -> VerifyOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = VerifyOutcome::default();
    for case in 0..cases {
        let size = 2 + case % 6;
        let rows: Vec<Vec<f64>> = (0..size)
            .map(|_| (0..size).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let cm = CostMatrix::new(rows).expect("uniform draws form a valid matrix");
        let perm = hungarian_max(&cm);
        let value = cm.value_of(&perm);
        let (_, brute) = brute_force_max(&cm);
        outcome.checks += 1;
        if value != brute {
            outcome.failures.push(format!(
                "case {case} (size {size}): hungarian value {value} != brute force {brute}"
            ));
        }
    }
    outcome
}

/// Per-case power budgets of the fractional-solver suite.
pub const VERIFY_P_MAX: [f64; 3] = [0.1, 1.0, 10.0];

/// Fractional power solver vs. dense grid search on random pair channels.
///
/// Gains are log-uniform over 1e-3..1e1 with unit noise; each channel is
/// solved at three budgets. Checks: relative gap to the grid maximum at the
/// given resolution, a non-decreasing λ sequence, and convergence within
/// [`DINKELBACH_MAX_ITERATIONS`] at tolerance 1e-8.
pub fn verify_dinkelbach(cases: usize, grid_resolution: usize, seed: u64) -> VerifyOutcome {
    let per_case: Vec<Vec<String>> = (0..cases as u64)
        .into_par_iter()
        .map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(case);
            let mut gain = || 10f64.powf(rng.gen_range(-3.0..1.0));
            let pc = PairChannel::new(gain(), gain(), gain(), gain(), 1.0);
            let qf = fractional_form(&pc);

            let mut failures = Vec::new();
            for p_max in VERIFY_P_MAX {
                let label = format!("case {case} p_max {p_max}");
                let out = match dinkelbach(&qf, p_max, 1e-8) {
                    Ok(out) => out,
                    Err(e) => {
                        failures.push(format!("{label}: solver failed: {e}"));
                        continue;
                    }
                };
                if out.trace.iterations() > DINKELBACH_MAX_ITERATIONS {
                    failures.push(format!(
                        "{label}: {} iterations exceeds {DINKELBACH_MAX_ITERATIONS}",
                        out.trace.iterations()
                    ));
                }
                if out.trace.lambdas.windows(2).skip(1).any(|w| w[1] < w[0]) {
                    failures.push(format!("{label}: λ sequence decreased"));
                }
                let (_, grid) = grid_oracle(&pc, p_max, grid_resolution);
                let gap = (out.lambda - grid).abs() / grid.max(1e-12);
                if gap > DINKELBACH_GRID_GAP {
                    failures.push(format!(
                        "{label}: relative gap {gap:.3e} to grid ratio {grid} exceeds {DINKELBACH_GRID_GAP}"
                    ));
                }
            }
            failures
        })
        .collect();

    let mut outcome = VerifyOutcome {
        checks: cases * VERIFY_P_MAX.len(),
        failures: Vec::new(),
    };
    for fs in per_case {
        outcome.failures.extend(fs);
    }
    outcome
}
