//! Monte Carlo SNR sweep comparing the assignment/power strategies.
//!
//! Every method is scored on the same channel realization at the same SNR
//! (common random numbers), with the exact sum rate. Trials parallelize
//! across a thread pool; results are keyed by trial index before reduction,
//! so the output is a pure function of the configuration.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::assign::{assign_exhaustive, assign_hungarian, assign_random, PowerPolicy};
use crate::channel::{
    generate_realization, trial_rng, Cell, ChannelRealization, SimConfig, StreamLane,
};
use crate::error::{Error, Result};
use crate::power::{dinkelbach, fractional_form};
use crate::rate::{sum_rate, PowerAllocation};

/// One assignment-plus-power strategy of the comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Joint exhaustive assignment, ratio-optimal pair powers (the optimum).
    ExhaustiveOpt,
    /// Per-cell Hungarian assignment, ratio-optimal pair powers (proposed).
    HungarianOpt,
    /// Per-cell Hungarian assignment, full power.
    HungarianFull,
    /// Joint exhaustive assignment, full power.
    ExhaustiveFull,
    /// Uniform random assignment, full power (baseline).
    RandomFull,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::ExhaustiveOpt,
        Method::HungarianOpt,
        Method::HungarianFull,
        Method::ExhaustiveFull,
        Method::RandomFull,
    ];

    /// Stable identifier used in CLI flags and CSV rows.
    pub fn name(self) -> &'static str {
        match self {
            Method::ExhaustiveOpt => "exhaustive_opt",
            Method::HungarianOpt => "hungarian_opt",
            Method::HungarianFull => "hungarian_full",
            Method::ExhaustiveFull => "exhaustive_full",
            Method::RandomFull => "random_full",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
                Error::InvalidConfig(format!(
                    "unknown method '{s}'; expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

/// Aggregated outcome of one (method, SNR) cell of the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub method: Method,
    pub snr_db: f64,
    pub trials: usize,
    /// Monte Carlo mean of the network sum rate, bits/s/Hz.
    pub mean_sum_rate: f64,
    /// Standard error of that mean (sample std dev / √trials; 0 for one trial).
    pub std_error: f64,
}

/// All rows of a sweep, sorted by (method name, SNR).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn new(mut rows: Vec<SweepRow>) -> Self {
        rows.sort_by(|a, b| {
            a.method
                .name()
                .cmp(b.method.name())
                .then(a.snr_db.total_cmp(&b.snr_db))
        });
        SweepResult { rows }
    }

    /// Methods present, in row order.
    pub fn methods(&self) -> Vec<Method> {
        let mut out = Vec::new();
        for row in &self.rows {
            if !out.contains(&row.method) {
                out.push(row.method);
            }
        }
        out
    }

    /// `(snr_db, mean_sum_rate)` series of one method, ordered by SNR.
    pub fn series(&self, method: Method) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| (r.snr_db, r.mean_sum_rate))
            .collect()
    }
}

// ============================================================================
// Scoring
// ============================================================================

fn optimal_powers(
    r: &ChannelRealization,
    asg: &crate::assign::Assignment,
    p_max: f64,
    noise_power: f64,
    tolerance: f64,
) -> Result<PowerAllocation> {
    let mut powers = Vec::with_capacity(r.num_subchannels());
    for sub in 0..r.num_subchannels() {
        let pc = r.pair_channel(
            sub,
            asg.user_on(Cell::One, sub),
            asg.user_on(Cell::Two, sub),
            noise_power,
        )?;
        let (p1, p2) = dinkelbach(&fractional_form(&pc), p_max, tolerance)?.powers;
        powers.push([p1, p2]);
    }
    PowerAllocation::new(powers)
}

/// Exact network sum rate of `method` on one realization at one SNR point.
///
/// The power budget is `noise_power * 10^(snr_db/10)`. The random baseline
/// draws its permutations from the realization's own trial stream, so it is
/// as reproducible as the channel itself.
pub fn evaluate_method(
    method: Method,
    r: &ChannelRealization,
    cfg: &SimConfig,
    snr_db: f64,
) -> Result<f64> {
    let p_max = cfg.p_max(snr_db);
    let noise = cfg.noise_power;
    let tol = cfg.dinkelbach_tolerance;
    let (asg, powers) = match method {
        Method::ExhaustiveOpt => assign_exhaustive(r, noise, p_max, PowerPolicy::Optimal, tol)?,
        Method::ExhaustiveFull => assign_exhaustive(r, noise, p_max, PowerPolicy::Full, tol)?,
        Method::HungarianOpt => {
            let asg = assign_hungarian(r, p_max, noise)?;
            let pw = optimal_powers(r, &asg, p_max, noise, tol)?;
            (asg, pw)
        }
        Method::HungarianFull => {
            let asg = assign_hungarian(r, p_max, noise)?;
            let pw = PowerAllocation::uniform(r.num_subchannels(), p_max)?;
            (asg, pw)
        }
        Method::RandomFull => {
            let mut rng = trial_rng(cfg.master_seed, r.trial_index(), StreamLane::Assignment);
            let asg = assign_random(r.num_subchannels(), &mut rng);
            let pw = PowerAllocation::uniform(r.num_subchannels(), p_max)?;
            (asg, pw)
        }
    };
    sum_rate(r, &asg, &powers, noise)
}

/// Raw per-trial sum rates, indexed `[trial][snr][method]`.
///
/// This is the sweep's inner loop, exposed so callers can inspect per-trial
/// values (the aggregate statistics lose the pairing across methods).
pub fn collect_trial_values(cfg: &SimConfig, methods: &[Method]) -> Result<Vec<Vec<Vec<f64>>>> {
    cfg.validate()?;
    if methods.is_empty() {
        return Err(Error::InvalidConfig("need at least one method".into()));
    }
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let r = generate_realization(cfg, trial);
            cfg.snr_grid_db
                .iter()
                .map(|&snr| {
                    methods
                        .iter()
                        .map(|&m| evaluate_method(m, &r, cfg, snr))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Monte Carlo sweep: every method scored on every trial's realization at
/// every SNR, aggregated to mean and standard error.
pub fn run_sweep(cfg: &SimConfig, methods: &[Method]) -> Result<SweepResult> {
    let values = collect_trial_values(cfg, methods)?;
    let trials = cfg.trials;
    let mut rows = Vec::with_capacity(methods.len() * cfg.snr_grid_db.len());
    for (si, &snr_db) in cfg.snr_grid_db.iter().enumerate() {
        for (mi, &method) in methods.iter().enumerate() {
            let mean = values.iter().map(|t| t[si][mi]).sum::<f64>() / trials as f64;
            let std_error = if trials > 1 {
                let var = values
                    .iter()
                    .map(|t| (t[si][mi] - mean).powi(2))
                    .sum::<f64>()
                    / (trials - 1) as f64;
                (var / trials as f64).sqrt()
            } else {
                0.0
            };
            rows.push(SweepRow {
                method,
                snr_db,
                trials,
                mean_sum_rate: mean,
                std_error,
            });
        }
    }
    Ok(SweepResult::new(rows))
}

// ============================================================================
// Emission
// ============================================================================

/// CSV rendering: fixed header, six-decimal floats, rows already sorted.
pub fn csv_string(sr: &SweepResult) -> String {
    let mut out = String::from("method,snr_db,trials,mean_sum_rate,std_error\n");
    for row in &sr.rows {
        out.push_str(&format!(
            "{},{:.6},{},{:.6},{:.6}\n",
            row.method, row.snr_db, row.trials, row.mean_sum_rate, row.std_error
        ));
    }
    out
}

pub fn emit_csv(sr: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(sr))?;
    Ok(())
}

const PLOT_PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

fn bounds(values: &[f64], fallback: (f64, f64)) -> (f64, f64) {
    if values.is_empty() {
        return fallback;
    }
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |acc, &v| {
            (acc.0.min(v), acc.1.max(v))
        })
}

/// Self-contained SVG of mean sum rate vs SNR, one polyline per method.
pub fn svg_string(sr: &SweepResult) -> String {
    let (width, height) = (760.0, 500.0);
    let (left, right, top, bottom) = (70.0, 190.0, 40.0, 60.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    let methods = sr.methods();
    let xs: Vec<f64> = sr.rows.iter().map(|r| r.snr_db).collect();
    let (mut x_min, mut x_max) = bounds(&xs, (0.0, 1.0));
    if x_min == x_max {
        x_min -= 1.0;
        x_max += 1.0;
    }
    let ys: Vec<f64> = sr.rows.iter().map(|r| r.mean_sum_rate).collect();
    let (_, y_top) = bounds(&ys, (0.0, 1.0));
    let y_max = if y_top > 0.0 { y_top * 1.08 } else { 1.0 };

    let x_of = |snr: f64| left + (snr - x_min) / (x_max - x_min) * plot_w;
    let y_of = |rate: f64| top + plot_h - rate / y_max * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">Mean sum rate vs SNR</text>\n",
        left + plot_w / 2.0
    ));

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{l:.2}\" y1=\"{b:.2}\" x2=\"{r:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{l:.2}\" y1=\"{t:.2}\" x2=\"{l:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n",
        l = left,
        r = left + plot_w,
        t = top,
        b = top + plot_h
    ));

    // Y ticks and horizontal grid.
    for k in 0..=5 {
        let value = y_max * k as f64 / 5.0;
        let y = y_of(value);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>\n",
            left,
            left + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{value:.2}</text>\n",
            left - 8.0,
            y + 4.0
        ));
    }

    // X ticks at each distinct SNR point.
    let mut snrs: Vec<f64> = xs.clone();
    snrs.sort_by(f64::total_cmp);
    snrs.dedup();
    for &snr in &snrs {
        let x = x_of(snr);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            top + plot_h,
            top + plot_h + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{snr}</text>\n",
            top + plot_h + 20.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">SNR (dB)</text>\n",
        left + plot_w / 2.0,
        height - 16.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">\
         Mean sum rate (bits/s/Hz)</text>\n",
        top + plot_h / 2.0,
        top + plot_h / 2.0
    ));

    // One series per method, plus the legend.
    for (k, &method) in methods.iter().enumerate() {
        let color = PLOT_PALETTE[k % PLOT_PALETTE.len()];
        let mut series = sr.series(method);
        series.sort_by(|a, b| a.0.total_cmp(&b.0));
        let points: Vec<String> = series
            .iter()
            .map(|&(snr, rate)| format!("{:.2},{:.2}", x_of(snr), y_of(rate)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        for &(snr, rate) in &series {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                x_of(snr),
                y_of(rate)
            ));
        }
        let ly = top + 14.0 + 20.0 * k as f64;
        let lx = left + plot_w + 18.0;
        svg.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" \
             stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            lx + 22.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\">{method}</text>\n",
            lx + 28.0,
            ly + 4.0
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

pub fn emit_plot(sr: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(sr))?;
    Ok(())
}
