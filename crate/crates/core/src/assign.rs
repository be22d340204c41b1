//! Sub-channel assignment.
//!
//! Three strategies share the [`Assignment`] representation: an exact
//! Hungarian solve of the low-SNR surrogate (one square problem per cell,
//! since dropping interference decouples the cells), an exhaustive joint
//! search over both cells' permutations (the optimality reference, guarded to
//! small instances), and a uniform random draw (the naive baseline).

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::{Cell, ChannelRealization};
use crate::error::{Error, Result};
use crate::power::{dinkelbach, fractional_form};
use crate::rate::{user_rate, PowerAllocation};

/// How per-pair transmit powers are chosen once an assignment is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerPolicy {
    /// Ratio-optimal pair powers from the fractional solver.
    Optimal,
    /// Every user transmits at the budget.
    Full,
}

// ============================================================================
// Cost matrix
// ============================================================================

/// Square benefit matrix of one cell's user/sub-channel pairing.
///
/// `entry(i, n)` is the (dimensionless) benefit of giving sub-channel `n` to
/// user `i`; assignment quality is the sum of picked entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    size: usize,
    entries: Vec<f64>, // row-major, entries[i * size + n]
}

impl CostMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::BadCostMatrix("matrix is empty".into()));
        }
        let mut entries = Vec::with_capacity(size * size);
        for row in &rows {
            if row.len() != size {
                return Err(Error::BadCostMatrix(format!(
                    "row of length {} in a {}-row matrix",
                    row.len(),
                    size
                )));
            }
            for &e in row {
                if !e.is_finite() || e < 0.0 {
                    return Err(Error::BadCostMatrix(format!(
                        "entries must be finite and non-negative, got {e}"
                    )));
                }
                entries.push(e);
            }
        }
        Ok(CostMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, user: usize, subchannel: usize) -> f64 {
        self.entries[user * self.size + subchannel]
    }

    /// Total benefit of a user-to-sub-channel permutation.
    pub fn value_of(&self, perm: &[usize]) -> f64 {
        perm.iter()
            .enumerate()
            .map(|(user, &sub)| self.entry(user, sub))
            .sum()
    }
}

/// Low-SNR benefit of giving sub-channel `n` to user `i` of `cell`:
/// the interference-free SNR proxy `p_max * direct_gain / noise`.
pub fn build_cost_matrix(
    r: &ChannelRealization,
    cell: Cell,
    p_max: f64,
    noise_power: f64,
) -> CostMatrix {
    let rows = (0..r.users_per_cell())
        .map(|user| {
            (0..r.num_subchannels())
                .map(|sub| p_max * r.gain(sub, cell, user, cell) / noise_power)
                .collect()
        })
        .collect();
    CostMatrix::new(rows).expect("gain tensors produce valid cost matrices")
}

// ============================================================================
// Assignment
// ============================================================================

/// One user-to-sub-channel bijection per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    user_to_sub: [Vec<usize>; 2],
    sub_to_user: [Vec<usize>; 2],
}

impl Assignment {
    /// Build from per-cell permutations mapping user index to sub-channel.
    pub fn new(pi1: Vec<usize>, pi2: Vec<usize>) -> Result<Self> {
        if pi1.len() != pi2.len() {
            return Err(Error::DimensionMismatch(format!(
                "cell permutations of lengths {} and {}",
                pi1.len(),
                pi2.len()
            )));
        }
        let sub_to_user = [invert(&pi1)?, invert(&pi2)?];
        Ok(Assignment {
            user_to_sub: [pi1, pi2],
            sub_to_user,
        })
    }

    pub fn identity(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        Assignment::new(id.clone(), id).expect("identity is a bijection")
    }

    pub fn num_subchannels(&self) -> usize {
        self.user_to_sub[0].len()
    }

    /// Sub-channel given to `user` of `cell`.
    pub fn subchannel_of(&self, cell: Cell, user: usize) -> usize {
        self.user_to_sub[cell.index()][user]
    }

    /// User of `cell` occupying `subchannel`.
    pub fn user_on(&self, cell: Cell, subchannel: usize) -> usize {
        self.sub_to_user[cell.index()][subchannel]
    }

    /// The user-to-sub-channel permutation of one cell.
    pub fn permutation(&self, cell: Cell) -> &[usize] {
        &self.user_to_sub[cell.index()]
    }
}

fn invert(perm: &[usize]) -> Result<Vec<usize>> {
    let n = perm.len();
    let mut inv = vec![usize::MAX; n];
    for (user, &sub) in perm.iter().enumerate() {
        if sub >= n {
            return Err(Error::InvalidConfig(format!(
                "sub-channel {sub} out of range in a {n}-element permutation"
            )));
        }
        if inv[sub] != usize::MAX {
            return Err(Error::InvalidConfig(format!(
                "sub-channel {sub} assigned twice; permutation is not a bijection"
            )));
        }
        inv[sub] = user;
    }
    Ok(inv)
}

// ============================================================================
// Hungarian solve
// ============================================================================

/// Exact maximum-total-benefit bijection of a square matrix, O(n³).
///
/// Internally the classical shortest-augmenting-path minimization with row
/// and column potentials, applied to `max_entry - c`. When several
/// permutations share the optimal value the algorithm's deterministic output
/// is returned as-is.
pub fn hungarian_max(cm: &CostMatrix) -> Vec<usize> {
    let n = cm.size();
    let max_entry = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| cm.entry(i, j))
        .fold(f64::NEG_INFINITY, f64::max);
    let cost = |i: usize, j: usize| max_entry - cm.entry(i, j);

    // 1-based arrays with a sentinel row/column 0, as in the standard
    // potentials formulation. matched[j] is the row matched to column j.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        // Unwind the augmenting path.
        while j0 != 0 {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[matched[j] - 1] = j - 1;
    }
    perm
}

/// Permutation-enumeration reference for [`hungarian_max`]: the
/// lexicographically smallest argmax and its value. Exponential; oracle use
/// only.
pub fn brute_force_max(cm: &CostMatrix) -> (Vec<usize>, f64) {
    let n = cm.size();
    let mut best: Option<(Vec<usize>, f64)> = None;
    for perm in (0..n).permutations(n) {
        let value = cm.value_of(&perm);
        if best.as_ref().is_none_or(|(_, bv)| value > *bv) {
            best = Some((perm, value));
        }
    }
    best.expect("non-empty matrix has at least one permutation")
}

// ============================================================================
// Assignment strategies
// ============================================================================

/// Hungarian assignment on the low-SNR cost matrix, independently per cell.
pub fn assign_hungarian(
    r: &ChannelRealization,
    p_max: f64,
    noise_power: f64,
) -> Result<Assignment> {
    if r.users_per_cell() != r.num_subchannels() {
        return Err(Error::DimensionMismatch(format!(
            "{} users per cell vs {} sub-channels; need a square instance",
            r.users_per_cell(),
            r.num_subchannels()
        )));
    }
    let pi1 = hungarian_max(&build_cost_matrix(r, Cell::One, p_max, noise_power));
    let pi2 = hungarian_max(&build_cost_matrix(r, Cell::Two, p_max, noise_power));
    Assignment::new(pi1, pi2)
}

/// Largest instance the exhaustive joint search accepts.
pub const EXHAUSTIVE_MAX_SUBCHANNELS: usize = 6;

#[derive(Clone, Copy, Default)]
struct PairSolve {
    rate_bs1: f64,
    rate_bs2: f64,
    p1: f64,
    p2: f64,
}

/// Exhaustive joint search over both cells' permutations, scored by the
/// exact sum rate under the given power policy.
///
/// Pair solves are memoized over (sub-channel, user, user) — `N³` fractional
/// solves instead of one per joint assignment. Ties go to the
/// lexicographically smallest `(π₁, π₂)`. `tolerance` is the fractional
/// solver's convergence threshold, unused under [`PowerPolicy::Full`].
pub fn assign_exhaustive(
    r: &ChannelRealization,
    noise_power: f64,
    p_max: f64,
    policy: PowerPolicy,
    tolerance: f64,
) -> Result<(Assignment, PowerAllocation)> {
    let n = r.num_subchannels();
    if n > EXHAUSTIVE_MAX_SUBCHANNELS {
        return Err(Error::ExhaustiveGuard {
            n,
            max: EXHAUSTIVE_MAX_SUBCHANNELS,
        });
    }
    if r.users_per_cell() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} users per cell vs {} sub-channels; need a square instance",
            r.users_per_cell(),
            n
        )));
    }

    let mut memo = vec![PairSolve::default(); n * n * n];
    let idx = |sub: usize, i1: usize, i2: usize| (sub * n + i1) * n + i2;
    for sub in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                let pc = r.pair_channel(sub, i1, i2, noise_power)?;
                let (p1, p2) = match policy {
                    PowerPolicy::Full => (p_max, p_max),
                    PowerPolicy::Optimal => {
                        let outcome = dinkelbach(&fractional_form(&pc), p_max, tolerance)?;
                        outcome.powers
                    }
                };
                memo[idx(sub, i1, i2)] = PairSolve {
                    // Kept as two addends so joint scores accumulate in the
                    // same order as the network-rate evaluator.
                    rate_bs1: user_rate(p1, pc.direct1, p2 * pc.cross21, noise_power),
                    rate_bs2: user_rate(p2, pc.direct2, p1 * pc.cross12, noise_power),
                    p1,
                    p2,
                };
            }
        }
    }

    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let inverses: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| invert(p).expect("generated permutations are bijections"))
        .collect();

    let mut best_value = f64::NEG_INFINITY;
    let mut best_pair = (0usize, 0usize);
    for (k1, inv1) in inverses.iter().enumerate() {
        for (k2, inv2) in inverses.iter().enumerate() {
            let mut total = 0.0;
            for sub in 0..n {
                let s = &memo[idx(sub, inv1[sub], inv2[sub])];
                total += s.rate_bs1;
                total += s.rate_bs2;
            }
            // Strict improvement keeps the lexicographically first optimum:
            // permutations enumerate in lexicographic order.
            if total > best_value {
                best_value = total;
                best_pair = (k1, k2);
            }
        }
    }

    let (k1, k2) = best_pair;
    let asg = Assignment::new(perms[k1].clone(), perms[k2].clone())?;
    let powers = (0..n)
        .map(|sub| {
            let s = &memo[idx(sub, inverses[k1][sub], inverses[k2][sub])];
            [s.p1, s.p2]
        })
        .collect();
    Ok((asg, PowerAllocation::new(powers)?))
}

/// Independent uniform permutation per cell, drawn from the given stream.
pub fn assign_random(n: usize, rng: &mut impl Rng) -> Assignment {
    let mut pi1: Vec<usize> = (0..n).collect();
    let mut pi2: Vec<usize> = (0..n).collect();
    pi1.shuffle(rng);
    pi2.shuffle(rng);
    Assignment::new(pi1, pi2).expect("shuffles of the identity are bijections")
}
