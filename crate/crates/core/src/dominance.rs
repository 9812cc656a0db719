// Copyright 2026 The ffsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! One-dimensional flexible first-order stochastic dominance.
//!
//! `F` dominates `G` with tolerance `eps` on `[a, b]` when
//! `F(x) <= G(x) + eps` everywhere. Both CDFs are piecewise linear with
//! jumps, so the supremum of `F - G` is found exactly among merged
//! breakpoints and their one-sided limits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::PiecewiseCdf;
use crate::error::{Error, Result};
use crate::integral::rsi;
use crate::piecewise::{difference_events, max_event_by, Side};
use crate::sampling;
use crate::utility::{check_tolerance, exact_reference, witness_utility};

/// Arithmetic slack allowed when comparing integral values.
pub const SLACK: f64 = 1e-9;

/// Number of evenly spaced interior points in the default reference grid.
pub const DEFAULT_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FfsdVerdict {
    pub holds: bool,
    pub epsilon: f64,
    pub max_violation: f64,
    pub witness_x: f64,
    /// False when the supremum is only approached as a one-sided limit at
    /// `witness_x`.
    #[serde(skip)]
    pub attained: bool,
}

fn sup_difference(f: &PiecewiseCdf, g: &PiecewiseCdf) -> Result<(f64, f64, bool)> {
    if f.interval() != g.interval() {
        return Err(Error::IntervalMismatch);
    }
    let events = difference_events(f.function(), g.function())?;
    let best = max_event_by(&events, |v| v);
    Ok((best.value, best.x, best.side == Side::At))
}

pub fn check_ffsd(f: &PiecewiseCdf, g: &PiecewiseCdf, eps: f64) -> Result<FfsdVerdict> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidTolerance(eps));
    }
    let (max_violation, witness_x, attained) = sup_difference(f, g)?;
    Ok(FfsdVerdict {
        holds: max_violation <= eps,
        epsilon: eps,
        max_violation,
        witness_x,
        attained,
    })
}

/// Smallest `eps` for which `check_ffsd(f, g, eps)` holds.
pub fn min_epsilon_ffsd(f: &PiecewiseCdf, g: &PiecewiseCdf) -> Result<f64> {
    Ok(sup_difference(f, g)?.0.max(0.0))
}

/// Dominance tolerance implied by a pair of utility tolerances.
pub fn implied_epsilon(eps1: f64, eps2: f64, width: f64) -> f64 {
    (eps1 - eps2) * width
}

pub(crate) fn check_tolerance_pair(eps1: f64, eps2: f64) -> Result<()> {
    if eps1.is_nan() || eps2.is_nan() || eps2 <= 0.0 || eps2 >= eps1 {
        return Err(Error::BadToleranceOrder { eps1, eps2 });
    }
    check_tolerance(eps1)
}

/// Interior breakpoints of both CDFs plus evenly spaced interior points.
pub fn default_x0_grid(f: &PiecewiseCdf, g: &PiecewiseCdf) -> Vec<f64> {
    let iv = f.interval();
    let n = DEFAULT_GRID_POINTS;
    let mut grid: Vec<f64> = f.interior_breakpoints();
    grid.extend(g.interior_breakpoints());
    grid.extend((1..=n).map(|k| iv.a + iv.width() * (k as f64 / (n + 1) as f64)));
    grid.retain(|&x| iv.contains_open(x));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMargin {
    pub x0: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremConfig {
    /// Randomized approximate-indicator utilities per grid point, on top of
    /// the witness utility.
    pub random_utilities: usize,
    pub seed: u64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            random_utilities: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub eps1: f64,
    pub eps2: f64,
    pub epsilon: f64,
    pub epsilon_exceeds_half: bool,
    /// `F` dominates `G` with tolerance `epsilon`.
    pub lhs: bool,
    /// Every tested utility satisfies `RSI(u, F, eps1) >= RSI(u, G, eps2)`.
    pub rhs: bool,
    pub max_violation: f64,
    /// `(1 - F(x0)) + eps1 (b - a) - (1 - G(x0)) - eps2 (b - a)` per grid point.
    pub margins: Vec<GridMargin>,
    pub utilities_tested: usize,
    /// Tested utilities with `RSI(u, F, eps1) < RSI(u, G, eps2) - SLACK`
    /// while `lhs` holds.
    pub forward_violations: usize,
    /// Smallest `RSI(u, F, eps1) - RSI(u, G, eps2)` over all tested utilities.
    pub worst_gap: f64,
    /// The integral inequality holds for every witness utility.
    pub witness_rhs: bool,
    /// `witness_rhs` implies `F(x0) <= G(x0) + epsilon` on the whole grid.
    pub backward_consistent: bool,
    /// Grid point whose witness utility most violates the integral inequality.
    pub backward_witness: Option<GridMargin>,
}

/// Numerically checks both directions of the equivalence between tolerance
/// dominance and integral comparisons over approximate indicators.
pub fn check_equivalence_theorem(
    f: &PiecewiseCdf,
    g: &PiecewiseCdf,
    eps1: f64,
    eps2: f64,
    x0_grid: &[f64],
    config: &TheoremConfig,
) -> Result<TheoremReport> {
    check_tolerance_pair(eps1, eps2)?;
    let iv = f.interval();
    if g.interval() != iv {
        return Err(Error::IntervalMismatch);
    }
    if x0_grid.is_empty() {
        return Err(Error::CandidateSetEmpty);
    }
    if let Some(&x) = x0_grid.iter().find(|&&x| !iv.contains_open(x)) {
        return Err(Error::OutOfDomain { x, a: iv.a, b: iv.b });
    }

    let epsilon = implied_epsilon(eps1, eps2, iv.width());
    let verdict = check_ffsd(f, g, epsilon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut margins = Vec::with_capacity(x0_grid.len());
    let mut utilities_tested = 0;
    let mut forward_violations = 0;
    let mut worst_gap = f64::INFINITY;
    let mut witness_rhs = true;
    let mut grid_dominates = true;
    let mut backward_witness: Option<GridMargin> = None;

    for &x0 in x0_grid {
        let (fx, gx) = (f.eval(x0)?, g.eval(x0)?);
        margins.push(GridMargin {
            x0,
            margin: (1.0 - fx) + eps1 * iv.width() - (1.0 - gx) - eps2 * iv.width(),
        });
        if fx > gx + epsilon + SLACK {
            grid_dominates = false;
        }

        let witness = witness_utility(x0, eps2, iv)?;
        let gap = rsi(&witness, f, eps1)?.value - rsi(&witness, g, eps2)?.value;
        utilities_tested += 1;
        worst_gap = worst_gap.min(gap);
        if gap < -SLACK {
            witness_rhs = false;
            if verdict.holds {
                forward_violations += 1;
            }
            if backward_witness.is_none_or(|w| gap < w.margin) {
                backward_witness = Some(GridMargin { x0, margin: gap });
            }
        }

        let mut drawn = 0;
        while drawn < config.random_utilities {
            let u = sampling::approx_utility(&mut rng, iv, x0, eps2, true)?;
            if exact_reference(&u)?.is_some() {
                continue;
            }
            drawn += 1;
            let gap = rsi(&u, f, eps1)?.value - rsi(&u, g, eps2)?.value;
            utilities_tested += 1;
            worst_gap = worst_gap.min(gap);
            if gap < -SLACK && verdict.holds {
                forward_violations += 1;
            }
        }
    }

    Ok(TheoremReport {
        eps1,
        eps2,
        epsilon,
        epsilon_exceeds_half: epsilon >= 0.5,
        lhs: verdict.holds,
        rhs: worst_gap >= -SLACK,
        max_violation: verdict.max_violation,
        margins,
        utilities_tested,
        forward_violations,
        worst_gap,
        witness_rhs,
        backward_consistent: !witness_rhs || grid_dominates,
        backward_witness,
    })
}
