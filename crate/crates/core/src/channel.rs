//! Channel realizations for the two-cell uplink.
//!
//! A realization holds one power gain per (sub-channel, user, base station)
//! link: unit-mean exponential fading (the squared magnitude of a Rayleigh
//! amplitude) scaled by distance-based path loss. Gains are normalized by the
//! own-cell path loss, so the mean direct gain is 1 and an SNR sweep in dB
//! maps straight onto the per-user power budget.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One of the two cells (equivalently, one of the two base stations).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    One,
    Two,
}

impl Cell {
    pub const BOTH: [Cell; 2] = [Cell::One, Cell::Two];

    /// Zero-based storage index.
    pub fn index(self) -> usize {
        match self {
            Cell::One => 0,
            Cell::Two => 1,
        }
    }

    /// The neighbouring cell.
    pub fn other(self) -> Cell {
        match self {
            Cell::One => Cell::Two,
            Cell::Two => Cell::One,
        }
    }
}

/// Simulation parameters shared by the channel generator and the sweep harness.
#[derive(Clone, Debug)]
pub struct SimConfig {
    /// Number of orthogonal sub-channels per cell.
    pub num_subchannels: usize,
    /// Users per cell; the square assignment pipeline requires this to equal
    /// `num_subchannels`.
    pub users_per_cell: usize,
    /// Path-loss exponent of the distance decay law.
    pub path_loss_exponent: f64,
    /// Distance from a user to its own base station, metres.
    pub own_cell_distance: f64,
    /// Distance from a user to the neighbouring base station, metres.
    pub cross_cell_distance: f64,
    /// Noise power at each base station, linear scale.
    pub noise_power: f64,
    /// SNR sweep grid in dB; the per-user budget is `noise_power * 10^(snr/10)`.
    pub snr_grid_db: Vec<f64>,
    /// Monte Carlo trials per SNR point.
    pub trials: usize,
    /// Master seed; every random stream in a run derives from it.
    pub master_seed: u64,
    /// Convergence tolerance of the fractional power solver.
    pub dinkelbach_tolerance: f64,
    /// Grid resolution used by the brute-force power oracle.
    pub grid_resolution: usize,
}

impl SimConfig {
    /// Default parameters for a square `n`-user, `n`-sub-channel instance:
    /// 100 m / 500 m distances, path-loss exponent 3, unit noise power, and
    /// an SNR grid from -10 dB to 30 dB in 5 dB steps.
    pub fn new(n: usize) -> Self {
        SimConfig {
            num_subchannels: n,
            users_per_cell: n,
            path_loss_exponent: 3.0,
            own_cell_distance: 100.0,
            cross_cell_distance: 500.0,
            noise_power: 1.0,
            snr_grid_db: (0..9).map(|k| -10.0 + 5.0 * k as f64).collect(),
            trials: 2000,
            master_seed: 42,
            dinkelbach_tolerance: 1e-8,
            grid_resolution: 1001,
        }
    }

    /// Per-user power budget at the given SNR point.
    pub fn p_max(&self, snr_db: f64) -> f64 {
        self.noise_power * 10f64.powf(snr_db / 10.0)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.num_subchannels == 0 {
            return fail("need at least one sub-channel");
        }
        if self.users_per_cell != self.num_subchannels {
            return fail("users per cell must equal the number of sub-channels");
        }
        let positive_finite = |x: f64| x.is_finite() && x > 0.0;
        if !positive_finite(self.path_loss_exponent) {
            return fail("path-loss exponent must be positive and finite");
        }
        if !positive_finite(self.own_cell_distance) || !positive_finite(self.cross_cell_distance) {
            return fail("distances must be positive and finite");
        }
        if !positive_finite(self.noise_power) {
            return fail("noise power must be positive and finite");
        }
        if self.snr_grid_db.is_empty() {
            return fail("SNR grid must be non-empty");
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return fail("SNR grid entries must be finite");
        }
        if self.trials == 0 {
            return fail("need at least one trial");
        }
        if !positive_finite(self.dinkelbach_tolerance) {
            return fail("solver tolerance must be positive and finite");
        }
        if self.grid_resolution < 2 {
            return fail("grid resolution must be at least 2");
        }
        Ok(())
    }
}

/// Independent random streams carved out of one (seed, trial) pair.
#[derive(Clone, Copy, Debug)]
pub enum StreamLane {
    /// Fading draws of the channel tensor.
    Gains,
    /// Permutation draws of the random-assignment baseline.
    Assignment,
}

/// Counter-style stream derivation: the master seed keys the cipher and the
/// (trial, lane) pair selects the stream, so trials can be generated in any
/// order, serially or in parallel, with identical output.
pub fn trial_rng(master_seed: u64, trial_index: u64, lane: StreamLane) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    let lane_id = match lane {
        StreamLane::Gains => 0,
        StreamLane::Assignment => 1,
    };
    rng.set_stream(trial_index.wrapping_mul(2).wrapping_add(lane_id));
    rng
}

/// Power gains of every uplink, one trial.
///
/// `gain(n, j, i, j')` is the gain on sub-channel `n` from user `i` of cell
/// `j` to the base station of cell `j'`. Direct links have `j == j'`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    num_subchannels: usize,
    users_per_cell: usize,
    trial_index: u64,
    gains: Vec<f64>,
}

impl ChannelRealization {
    /// Wrap an explicit gain tensor, laid out as
    /// `[n][cell][user][base station]` in row-major order.
    pub fn from_gains(
        num_subchannels: usize,
        users_per_cell: usize,
        gains: Vec<f64>,
    ) -> Result<Self> {
        let expected = num_subchannels * users_per_cell * 4;
        if gains.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "gain tensor holds {} entries, expected {}",
                gains.len(),
                expected
            )));
        }
        if gains.iter().any(|g| !g.is_finite() || *g <= 0.0) {
            return Err(Error::InvalidConfig(
                "all gains must be strictly positive and finite".into(),
            ));
        }
        Ok(ChannelRealization {
            num_subchannels,
            users_per_cell,
            trial_index: 0,
            gains,
        })
    }

    pub fn num_subchannels(&self) -> usize {
        self.num_subchannels
    }

    pub fn users_per_cell(&self) -> usize {
        self.users_per_cell
    }

    /// Index of the Monte Carlo trial this realization was drawn for.
    pub fn trial_index(&self) -> u64 {
        self.trial_index
    }

    fn offset(&self, subchannel: usize, cell: Cell, user: usize, station: Cell) -> usize {
        debug_assert!(subchannel < self.num_subchannels);
        debug_assert!(user < self.users_per_cell);
        ((subchannel * 2 + cell.index()) * self.users_per_cell + user) * 2 + station.index()
    }

    /// Gain on `subchannel` from `user` of `cell` to the base station of `station`.
    pub fn gain(&self, subchannel: usize, cell: Cell, user: usize, station: Cell) -> f64 {
        self.gains[self.offset(subchannel, cell, user, station)]
    }

    /// Coefficient bundle of the co-channel pair `(user1, user2)` on
    /// `subchannel`, with `user1` in cell one and `user2` in cell two.
    pub fn pair_channel(
        &self,
        subchannel: usize,
        user1: usize,
        user2: usize,
        noise_power: f64,
    ) -> Result<PairChannel> {
        if subchannel >= self.num_subchannels {
            return Err(Error::IndexOutOfRange(format!(
                "sub-channel {} of {}",
                subchannel, self.num_subchannels
            )));
        }
        if user1 >= self.users_per_cell || user2 >= self.users_per_cell {
            return Err(Error::IndexOutOfRange(format!(
                "user pair ({}, {}) of {}",
                user1, user2, self.users_per_cell
            )));
        }
        Ok(PairChannel {
            direct1: self.gain(subchannel, Cell::One, user1, Cell::One),
            cross21: self.gain(subchannel, Cell::Two, user2, Cell::One),
            direct2: self.gain(subchannel, Cell::Two, user2, Cell::Two),
            cross12: self.gain(subchannel, Cell::One, user1, Cell::Two),
            noise_power,
        })
    }
}

/// Channel coefficients seen by one co-channel user pair.
///
/// Naming convention: `direct1` is the gain of the cell-one user at its own
/// base station; `cross12` is the same user's gain at the neighbouring base
/// station (where it acts as interference), and symmetrically for the
/// cell-two user.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairChannel {
    /// Cell-one user at base station one.
    pub direct1: f64,
    /// Cell-two user at base station one (interference path).
    pub cross21: f64,
    /// Cell-two user at base station two.
    pub direct2: f64,
    /// Cell-one user at base station two (interference path).
    pub cross12: f64,
    /// Noise power at both base stations.
    pub noise_power: f64,
}

impl PairChannel {
    pub fn new(direct1: f64, cross21: f64, direct2: f64, cross12: f64, noise_power: f64) -> Self {
        debug_assert!(direct1 > 0.0 && direct2 > 0.0);
        debug_assert!(cross21 >= 0.0 && cross12 >= 0.0);
        debug_assert!(noise_power > 0.0);
        PairChannel {
            direct1,
            cross21,
            direct2,
            cross12,
            noise_power,
        }
    }
}

/// Draw the channel tensor of one trial.
///
/// Each link gain is an independent unit-mean exponential fade scaled by
/// `(distance / own_cell_distance)^(-alpha)`, so direct links have unit mean
/// and cross links mean `(cross/own)^(-alpha)`. The draw is a pure function
/// of `(config.master_seed, trial_index)`.
pub fn generate_realization(config: &SimConfig, trial_index: u64) -> ChannelRealization {
    let n = config.num_subchannels;
    let users = config.users_per_cell;
    let cross_scale =
        (config.cross_cell_distance / config.own_cell_distance).powf(-config.path_loss_exponent);

    let mut rng = trial_rng(config.master_seed, trial_index, StreamLane::Gains);
    let mut gains = Vec::with_capacity(n * users * 4);
    for _subchannel in 0..n {
        for _cell in 0..2 {
            for _user in 0..users {
                for station in 0..2 {
                    let scale = if station == _cell { 1.0 } else { cross_scale };
                    gains.push(unit_exponential(&mut rng) * scale);
                }
            }
        }
    }
    debug_assert!(gains.iter().all(|g| *g > 0.0 && g.is_finite()));
    ChannelRealization {
        num_subchannels: n,
        users_per_cell: users,
        trial_index,
        gains,
    }
}

/// Unit-mean exponential draw (squared magnitude of a complex Gaussian with
/// unit-mean power), strictly positive.
fn unit_exponential(rng: &mut impl Rng) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return -u.ln();
        }
    }
}
