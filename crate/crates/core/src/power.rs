//! Per-pair power control as quadratic fractional programming.
//!
//! The pair sum rate equals `log2(1 + f(p)/g(p))` for quadratics f, g in the
//! two transmit powers, so maximizing the rate means maximizing the ratio.
//! The outer loop is the classic parametric reduction: solve
//! `max f - λ·g`, update λ to the achieved ratio, stop when the residual
//! vanishes. The inner problem is a (generally indefinite) 2-D quadratic
//! over a box, solved exactly by enumerating the finite candidate set where
//! a box-constrained quadratic can peak: the four vertices, the stationary
//! point of each edge, and the interior stationary point.

use crate::channel::PairChannel;
use crate::error::{Error, Result};

/// Ratio objective `(pᵀMp + cvecᵀp + alpha) / (pᵀQp + dvecᵀp + beta)` over
/// `p = (p₁, p₂) ≥ 0`.
///
/// Both matrices are symmetric; the denominator's coefficients are all
/// non-negative with `beta > 0`, so the ratio is defined on the whole
/// feasible box. `Q` is indefinite whenever both cross gains are nonzero
/// (eigenvalues ±bd/2), which is why the inner solver never assumes
/// definiteness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticFractional {
    pub m: [[f64; 2]; 2],
    pub cvec: [f64; 2],
    pub alpha: f64,
    pub q: [[f64; 2]; 2],
    pub dvec: [f64; 2],
    pub beta: f64,
}

impl QuadraticFractional {
    /// Numerator `f(p)`.
    pub fn f_value(&self, p1: f64, p2: f64) -> f64 {
        quad(&self.m, &self.cvec, self.alpha, p1, p2)
    }

    /// Denominator `g(p)`; strictly positive on the feasible box.
    pub fn g_value(&self, p1: f64, p2: f64) -> f64 {
        quad(&self.q, &self.dvec, self.beta, p1, p2)
    }

    /// The objective `f(p)/g(p)`.
    pub fn ratio(&self, p1: f64, p2: f64) -> f64 {
        self.f_value(p1, p2) / self.g_value(p1, p2)
    }
}

fn quad(m: &[[f64; 2]; 2], lin: &[f64; 2], constant: f64, p1: f64, p2: f64) -> f64 {
    m[0][0] * p1 * p1
        + 2.0 * m[0][1] * p1 * p2
        + m[1][1] * p2 * p2
        + lin[0] * p1
        + lin[1] * p2
        + constant
}

/// Quadratic fractional form of a pair's sum rate:
/// `pair_sum_rate(pc, p) == log2(1 + f(p)/g(p))`.
///
/// Expanding `(1 + SINR₁)(1 + SINR₂) - 1` over the common denominator gives
///   f = p₁²·a·d + p₂²·b·c + p₁p₂·a·c + σ²(a·p₁ + c·p₂)
///   g = σ⁴ + σ²(d·p₁ + b·p₂) + p₁p₂·b·d
/// with (a, b, c, d) the pair's direct/cross gains and σ² the noise power.
pub fn fractional_form(pc: &PairChannel) -> QuadraticFractional {
    let (a, b, c, d) = (pc.direct1, pc.cross21, pc.direct2, pc.cross12);
    let s2 = pc.noise_power;
    QuadraticFractional {
        m: [[a * d, a * c / 2.0], [a * c / 2.0, b * c]],
        cvec: [s2 * a, s2 * c],
        alpha: 0.0,
        q: [[0.0, b * d / 2.0], [b * d / 2.0, 0.0]],
        dvec: [s2 * d, s2 * b],
        beta: s2 * s2,
    }
}

/// Exact global maximum of `F(p; λ) = pᵀ(M-λQ)p + (cvec-λ·dvec)ᵀp + (α-λβ)`
/// over the box `[0, p_max]²`.
///
/// Candidates: 4 vertices, the stationary point of each edge restriction
/// (kept when strictly inside the edge), and the interior stationary point
/// (kept when the Hessian is nonsingular and the point lies strictly inside
/// the box). Value ties resolve to the lexicographically smallest point.
pub fn maximize_parametric(qf: &QuadraticFractional, lambda: f64, p_max: f64) -> ((f64, f64), f64) {
    debug_assert!(lambda >= 0.0 && p_max > 0.0);
    let h = [
        [
            qf.m[0][0] - lambda * qf.q[0][0],
            qf.m[0][1] - lambda * qf.q[0][1],
        ],
        [
            qf.m[1][0] - lambda * qf.q[1][0],
            qf.m[1][1] - lambda * qf.q[1][1],
        ],
    ];
    let lin = [
        qf.cvec[0] - lambda * qf.dvec[0],
        qf.cvec[1] - lambda * qf.dvec[1],
    ];
    let constant = qf.alpha - lambda * qf.beta;
    let objective = |p1: f64, p2: f64| quad(&h, &lin, constant, p1, p2);

    let mut candidates: Vec<(f64, f64)> =
        vec![(0.0, 0.0), (0.0, p_max), (p_max, 0.0), (p_max, p_max)];

    // Stationary point of each edge's 1-D restriction.
    // Along p1 with p2 = t: dF/dp1 = 2·H₁₁·p1 + 2·H₁₂·t + lin₁ = 0.
    for t in [0.0, p_max] {
        if h[0][0] != 0.0 {
            let p1 = -(2.0 * h[0][1] * t + lin[0]) / (2.0 * h[0][0]);
            if p1 > 0.0 && p1 < p_max {
                candidates.push((p1, t));
            }
        }
        if h[1][1] != 0.0 {
            let p2 = -(2.0 * h[0][1] * t + lin[1]) / (2.0 * h[1][1]);
            if p2 > 0.0 && p2 < p_max {
                candidates.push((t, p2));
            }
        }
    }

    // Interior stationary point: 2H·p = -lin.
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if det != 0.0 {
        let p1 = (h[0][1] * lin[1] - h[1][1] * lin[0]) / (2.0 * det);
        let p2 = (h[1][0] * lin[0] - h[0][0] * lin[1]) / (2.0 * det);
        if p1 > 0.0 && p1 < p_max && p2 > 0.0 && p2 < p_max {
            candidates.push((p1, p2));
        }
    }

    let mut best = (0.0, 0.0);
    let mut best_value = f64::NEG_INFINITY;
    for (p1, p2) in candidates {
        let value = objective(p1, p2);
        if value > best_value || (value == best_value && (p1, p2) < best) {
            best_value = value;
            best = (p1, p2);
        }
    }
    (best, best_value)
}

/// Per-iteration record of the ratio solver.
#[derive(Clone, Debug, Default)]
pub struct DinkelbachTrace {
    /// Parameter λₙ used by each inner solve (λ₀ = 0).
    pub lambdas: Vec<f64>,
    /// Inner argmax of each iteration.
    pub iterates: Vec<(f64, f64)>,
    /// Residuals `f(p*) - λₙ·g(p*)`; termination requires the last ≤ δ.
    pub residuals: Vec<f64>,
}

impl DinkelbachTrace {
    pub fn iterations(&self) -> usize {
        self.iterates.len()
    }
}

/// Result of one pair solve.
#[derive(Clone, Debug)]
pub struct DinkelbachOutcome {
    /// Ratio-optimal transmit powers.
    pub powers: (f64, f64),
    /// Achieved ratio `f/g` at `powers`; the optimal value of the program.
    pub lambda: f64,
    pub trace: DinkelbachTrace,
}

impl DinkelbachOutcome {
    /// Pair sum rate at the returned powers, `log2(1 + λ*)`.
    pub fn pair_rate(&self) -> f64 {
        (1.0 + self.lambda).log2()
    }
}

const DINKELBACH_ITERATION_CAP: usize = 100;

/// Maximize `f/g` over the box `[0, p_max]²`.
///
/// Starts at λ = 0, alternates the exact inner maximization with the ratio
/// update λ ← f(p*)/g(p*), and stops once the residual `f(p*) - λ·g(p*)`
/// drops to `tolerance` or below. The λ sequence is non-decreasing after the
/// first update and the fixed point certifies optimality.
pub fn dinkelbach(
    qf: &QuadraticFractional,
    p_max: f64,
    tolerance: f64,
) -> Result<DinkelbachOutcome> {
    debug_assert!(tolerance > 0.0);
    if p_max == 0.0 {
        // Degenerate budget: the box is a single point.
        return Ok(DinkelbachOutcome {
            powers: (0.0, 0.0),
            lambda: 0.0,
            trace: DinkelbachTrace::default(),
        });
    }

    let mut trace = DinkelbachTrace::default();
    let mut lambda = 0.0;
    for _ in 0..DINKELBACH_ITERATION_CAP {
        let ((p1, p2), _) = maximize_parametric(qf, lambda, p_max);
        let f = qf.f_value(p1, p2);
        let g = qf.g_value(p1, p2);
        let residual = f - lambda * g;
        trace.lambdas.push(lambda);
        trace.iterates.push((p1, p2));
        trace.residuals.push(residual);
        let ratio = f / g;
        if residual <= tolerance {
            return Ok(DinkelbachOutcome {
                powers: (p1, p2),
                lambda: ratio,
                trace,
            });
        }
        lambda = ratio;
    }
    Err(Error::NoConvergence {
        iterations: DINKELBACH_ITERATION_CAP,
    })
}

/// The uniform full-power policy.
pub fn full_power(p_max: f64) -> (f64, f64) {
    (p_max, p_max)
}

/// Dense-grid reference for the ratio maximum: evaluates `f/g` at
/// `resolution × resolution` uniformly spaced points of `[0, p_max]²` and
/// returns the best (ties to the lexicographically smallest point).
/// Exhaustive and slow; test/verification use only.
pub fn grid_oracle(pc: &PairChannel, p_max: f64, resolution: usize) -> ((f64, f64), f64) {
    debug_assert!(resolution >= 2);
    let qf = fractional_form(pc);
    let step = p_max / (resolution - 1) as f64;
    let mut best = (0.0, 0.0);
    let mut best_ratio = f64::NEG_INFINITY;
    for k1 in 0..resolution {
        let p1 = k1 as f64 * step;
        for k2 in 0..resolution {
            let p2 = k2 as f64 * step;
            let ratio = qf.ratio(p1, p2);
            // Ascending scan order makes strict improvement lexicographic.
            if ratio > best_ratio {
                best_ratio = ratio;
                best = (p1, p2);
            }
        }
    }
    (best, best_ratio)
}
