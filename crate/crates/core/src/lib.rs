//! Joint sub-channel assignment and power control for the uplink of a
//! two-cell OFDMA network.
//!
//! Each cell serves one user per orthogonal sub-channel, so the only
//! interference a user sees comes from the co-channel user of the
//! neighbouring cell. The library provides:
//!
//! - [`channel`]: seeded Rayleigh-fading channel realizations and the
//!   per-pair coefficient bundles the solvers consume,
//! - [`rate`]: exact Shannon-rate bookkeeping used to score every method,
//! - [`assign`]: low-SNR cost matrices, a Hungarian solver, an exhaustive
//!   joint search, and a random baseline,
//! - [`power`]: per-pair optimal power control via Dinkelbach's method with
//!   an exact box-constrained inner maximizer, plus a grid-search oracle,
//! - [`harness`]: Monte Carlo SNR sweeps comparing the methods, with CSV
//!   and SVG emission,
//! - [`verify`]: self-check suites pitting the fast solvers against
//!   brute-force references.
//!
//! All randomness is derived from a single master seed, so every result is
//! reproducible bit-for-bit regardless of parallelism.

pub mod assign;
pub mod channel;
mod error;
pub mod harness;
pub mod power;
pub mod rate;
pub mod verify;

pub use assign::{Assignment, CostMatrix, PowerPolicy};
pub use channel::{Cell, ChannelRealization, PairChannel, SimConfig};
pub use error::{Error, Result};
pub use harness::{Method, SweepResult, SweepRow};
pub use power::{DinkelbachOutcome, DinkelbachTrace, QuadraticFractional};
pub use rate::PowerAllocation;
