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

//! Brute-force oracles and counterexample builders.
//!
//! Nothing here reuses the merged-breakpoint supremum code. Oracles scan a
//! uniform grid, optionally adding one-sided limits at breakpoints, so their
//! results lower-bound the true supremum and agree with it once every
//! breakpoint limit is included.

use serde::Serialize;

use crate::distributions::{Interval, PiecewiseCdf};
use crate::error::{Error, Result};
use crate::piecewise::Piecewise;
use crate::utility::{indicator, PiecewiseUtility};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    resolution: usize,
    include_limits: bool,
}

impl GridSpec {
    pub fn new(resolution: usize, include_limits: bool) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::DegenerateInput(format!(
                "grid resolution {resolution} is below 2"
            )));
        }
        Ok(GridSpec {
            resolution,
            include_limits,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn include_limits(&self) -> bool {
        self.include_limits
    }

    pub fn points(&self, iv: Interval) -> impl Iterator<Item = f64> + '_ {
        let last = self.resolution - 1;
        (0..self.resolution).map(move |k| {
            if k == last {
                iv.b
            } else {
                iv.a + iv.width() * (k as f64 / last as f64)
            }
        })
    }
}

/// Values, left limits and right limits of `f` at `t`.
fn triple(f: &Piecewise, t: f64) -> Result<[f64; 3]> {
    Ok([f.left_limit(t)?, f.eval(t)?, f.right_limit(t)?])
}

/// Lower bound on `sup |u(x) - 1{x > x0}|` from a grid scan.
pub fn grid_sup_distance(u: &PiecewiseUtility, x0: f64, grid: &GridSpec) -> Result<f64> {
    let iv = u.interval();
    if !iv.contains_open(x0) {
        return Err(Error::OutOfDomain {
            x: x0,
            a: iv.a,
            b: iv.b,
        });
    }
    let mut sup: f64 = 0.0;
    for x in grid.points(iv) {
        sup = sup.max((u.eval(x)? - indicator(x0, x)).abs());
    }
    if grid.include_limits {
        for &t in u.function().knots().iter().chain(std::iter::once(&x0)) {
            let target_left = if t > x0 { 1.0 } else { 0.0 };
            let target_at = indicator(x0, t);
            let target_right = if t >= x0 { 1.0 } else { 0.0 };
            let [l, m, r] = triple(u.function(), t)?;
            sup = sup
                .max((l - target_left).abs())
                .max((m - target_at).abs())
                .max((r - target_right).abs());
        }
    }
    Ok(sup)
}

/// Lower bound on `sup (F(x) - G(x))` from a grid scan.
pub fn grid_max_violation(f: &PiecewiseCdf, g: &PiecewiseCdf, grid: &GridSpec) -> Result<f64> {
    let iv = f.interval();
    if g.interval() != iv {
        return Err(Error::IntervalMismatch);
    }
    let mut sup = f64::NEG_INFINITY;
    for x in grid.points(iv) {
        sup = sup.max(f.eval(x)? - g.eval(x)?);
    }
    if grid.include_limits {
        let knots = f.function().knots().iter().chain(g.function().knots());
        for &t in knots {
            let fl = triple(f.function(), t)?;
            let gl = triple(g.function(), t)?;
            for k in 0..3 {
                sup = sup.max(fl[k] - gl[k]);
            }
        }
    }
    Ok(sup)
}

/// `#{samples <= x} / N`.
pub fn counting_cdf(samples: &[f64], x: f64) -> f64 {
    samples.iter().filter(|&&s| s <= x).count() as f64 / samples.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MidpointCertificate {
    pub z: f64,
    pub d1_lower: f64,
    pub d2_lower: f64,
}

/// At `z = (x1 + x2) / 2` the two indicators differ by 1, so the distances
/// from `u` to them sum to at least 1.
pub fn midpoint_contradiction_certificate(
    u: &PiecewiseUtility,
    x1: f64,
    x2: f64,
) -> Result<MidpointCertificate> {
    if x1 == x2 {
        return Err(Error::DegenerateInput(format!(
            "reference points coincide at {x1}"
        )));
    }
    let iv = u.interval();
    for x in [x1, x2] {
        if !iv.contains_open(x) {
            return Err(Error::OutOfDomain { x, a: iv.a, b: iv.b });
        }
    }
    let z = (x1 + x2) / 2.0;
    let uz = u.eval(z)?;
    Ok(MidpointCertificate {
        z,
        d1_lower: (uz - indicator(x1, z)).abs(),
        d2_lower: (uz - indicator(x2, z)).abs(),
    })
}

/// `u = 1/2`, exactly 1/2 away from every indicator.
pub fn ambiguous_utility(interval: Interval) -> PiecewiseUtility {
    PiecewiseUtility::constant(interval, 0.5).expect("constant utility is valid")
}
