//! Exact Shannon-rate bookkeeping.
//!
//! Everything a method reports is computed here, in bits/s/Hz, from the exact
//! `log2(1 + SINR)` formula. The low-SNR proxy used to build assignment cost
//! matrices never appears in any scored number.

use crate::assign::Assignment;
use crate::channel::{Cell, ChannelRealization, PairChannel};
use crate::error::{Error, Result};

/// Transmit powers of the user pair on each sub-channel.
///
/// `power(n, j)` is the linear transmit power of the cell-`j` user assigned
/// to sub-channel `n`; which user that is lives in the [`Assignment`].
#[derive(Clone, Debug, PartialEq)]
pub struct PowerAllocation {
    // powers[n] = [cell-one power, cell-two power]
    powers: Vec<[f64; 2]>,
}

impl PowerAllocation {
    pub fn new(powers: Vec<[f64; 2]>) -> Result<Self> {
        for pair in &powers {
            for &p in pair {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "transmit powers must be finite and non-negative, got {p}"
                    )));
                }
            }
        }
        Ok(PowerAllocation { powers })
    }

    /// Every user at the same fixed power.
    pub fn uniform(num_subchannels: usize, p: f64) -> Result<Self> {
        PowerAllocation::new(vec![[p, p]; num_subchannels])
    }

    pub fn num_subchannels(&self) -> usize {
        self.powers.len()
    }

    pub fn power(&self, subchannel: usize, cell: Cell) -> f64 {
        self.powers[subchannel][cell.index()]
    }

    /// True when every power respects the per-user budget.
    pub fn within_budget(&self, p_max: f64) -> bool {
        self.powers
            .iter()
            .all(|pair| pair.iter().all(|&p| p <= p_max * (1.0 + 1e-12)))
    }
}

/// One user's rate: `log2(1 + p * h_direct / (noise + interference))`.
pub fn user_rate(p: f64, h_direct: f64, interference: f64, noise_power: f64) -> f64 {
    debug_assert!(p >= 0.0 && h_direct >= 0.0 && interference >= 0.0);
    debug_assert!(noise_power > 0.0);
    (1.0 + p * h_direct / (noise_power + interference)).log2()
}

/// Sum rate of one co-channel pair, each user interfered only by the other.
pub fn pair_sum_rate(pc: &PairChannel, p1: f64, p2: f64) -> f64 {
    user_rate(p1, pc.direct1, p2 * pc.cross21, pc.noise_power)
        + user_rate(p2, pc.direct2, p1 * pc.cross12, pc.noise_power)
}

/// Exact network sum rate of an assignment plus power allocation.
///
/// Pairs on distinct sub-channels are orthogonal, so the total is the sum of
/// per-user rates where each user's interference is exactly its co-channel
/// partner's received power.
pub fn sum_rate(
    r: &ChannelRealization,
    asg: &Assignment,
    pw: &PowerAllocation,
    noise_power: f64,
) -> Result<f64> {
    let n = r.num_subchannels();
    if asg.num_subchannels() != n || pw.num_subchannels() != n {
        return Err(Error::DimensionMismatch(format!(
            "realization has {} sub-channels, assignment {}, powers {}",
            n,
            asg.num_subchannels(),
            pw.num_subchannels()
        )));
    }
    let mut total = 0.0;
    for sub in 0..n {
        let i1 = asg.user_on(Cell::One, sub);
        let i2 = asg.user_on(Cell::Two, sub);
        let p1 = pw.power(sub, Cell::One);
        let p2 = pw.power(sub, Cell::Two);
        let g11 = r.gain(sub, Cell::One, i1, Cell::One);
        let g21 = r.gain(sub, Cell::Two, i2, Cell::One);
        let g22 = r.gain(sub, Cell::Two, i2, Cell::Two);
        let g12 = r.gain(sub, Cell::One, i1, Cell::Two);
        total += user_rate(p1, g11, p2 * g21, noise_power);
        total += user_rate(p2, g22, p1 * g12, noise_power);
    }
    Ok(total)
}
