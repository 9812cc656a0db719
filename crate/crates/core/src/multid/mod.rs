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

//! n-dimensional vectors, rectangles, joint CDFs and the upper-orthant
//! dominance machinery built on them.

mod nffsd;
mod orthant;
mod survival;

use std::ops::Index;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distributions::PiecewiseCdf;
use crate::error::{Error, Result};

pub use nffsd::{
    check_equivalence_theorem_nd, check_nffsd, check_nffsd_discrete, default_candidates,
    min_epsilon_nffsd, CandidateMargin, NdTheoremReport, NffsdVerdict,
};
pub use orthant::{
    classify_callable, classify_orthant_indicator, orthant_indicator, orthant_sup_distance,
    rsi_nd, GridClassification, NdRsiResult, OrthantClass, OrthantUtility,
};
pub use survival::{survival_direct, survival_prob, survival_prob_unclamped};

pub const DEFAULT_DIM_CAP: usize = 16;
pub const DEFAULT_CANDIDATE_CAP: usize = 100_000;
pub const DIM_CAP_ENV: &str = "FFSD_DIM_CAP";

/// Caps on subset enumeration and candidate-grid size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NdLimits {
    pub dim_cap: usize,
    pub candidate_cap: usize,
}

impl Default for NdLimits {
    fn default() -> Self {
        NdLimits {
            dim_cap: DEFAULT_DIM_CAP,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

impl NdLimits {
    /// Defaults, with the dimension cap taken from `FFSD_DIM_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = NdLimits::default();
        if let Ok(raw) = std::env::var(DIM_CAP_ENV) {
            limits.dim_cap = raw
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("{DIM_CAP_ENV}={raw:?} is not a count")))?;
        }
        Ok(limits)
    }
}

/// A point in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RVec(Vec<f64>);

impl RVec {
    pub fn new(components: Vec<f64>) -> Self {
        RVec(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for RVec {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for RVec {
    fn from(v: Vec<f64>) -> Self {
        RVec(v)
    }
}

fn same_dim(x: &RVec, y: &RVec) -> Result<()> {
    if x.dim() == y.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        })
    }
}

fn componentwise(x: &RVec, y: &RVec, rel: impl Fn(f64, f64) -> bool) -> Result<bool> {
    same_dim(x, y)?;
    Ok(x.0.iter().zip(&y.0).all(|(&a, &b)| rel(a, b)))
}

/// `x >> y`: every component strictly greater.
pub fn all_gt(x: &RVec, y: &RVec) -> Result<bool> {
    componentwise(x, y, |a, b| a > b)
}

/// `x < y` componentwise.
pub fn all_lt(x: &RVec, y: &RVec) -> Result<bool> {
    componentwise(x, y, |a, b| a < b)
}

/// `x <= y` componentwise.
pub fn all_le(x: &RVec, y: &RVec) -> Result<bool> {
    componentwise(x, y, |a, b| a <= b)
}

/// Takes `x0[i]` for `i` in `subset` and `b[i]` elsewhere.
pub fn mixed_vector(x0: &RVec, b: &RVec, subset: &[usize]) -> Result<RVec> {
    same_dim(x0, b)?;
    let mut out = b.clone();
    for &i in subset {
        if i >= out.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: out.dim(),
            });
        }
        out.0[i] = x0.0[i];
    }
    Ok(out)
}

/// Same as [`mixed_vector`] with the subset encoded as a bit mask.
pub(crate) fn mixed_vector_mask(x0: &RVec, b: &RVec, mask: u64) -> RVec {
    RVec(
        (0..x0.dim())
            .map(|i| if mask >> i & 1 == 1 { x0.0[i] } else { b.0[i] })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RectangleSpec {
    lower: RVec,
    upper: RVec,
}

/// Axis-aligned box `[lower, upper]` with `lower < upper` componentwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectangleSpec", into = "RectangleSpec")]
pub struct Rectangle {
    lower: RVec,
    upper: RVec,
}

impl Rectangle {
    pub fn new(lower: RVec, upper: RVec) -> Result<Self> {
        same_dim(&lower, &upper)?;
        if lower.dim() == 0 {
            return Err(Error::InvalidRectangle("dimension must be at least 1".into()));
        }
        let ok = lower
            .0
            .iter()
            .zip(&upper.0)
            .all(|(&a, &b)| a.is_finite() && b.is_finite() && a < b);
        if !ok {
            return Err(Error::InvalidRectangle(format!(
                "need finite lower < upper in every coordinate, got {:?} and {:?}",
                lower.0, upper.0
            )));
        }
        Ok(Rectangle { lower, upper })
    }

    pub fn unit(dim: usize) -> Self {
        Rectangle::new(RVec(vec![0.0; dim]), RVec(vec![1.0; dim])).expect("unit cube")
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &RVec {
        &self.lower
    }

    pub fn upper(&self) -> &RVec {
        &self.upper
    }

    pub fn contains_open(&self, x: &RVec) -> Result<bool> {
        Ok(all_lt(&self.lower, x)? && all_lt(x, &self.upper)?)
    }

    pub fn contains_closed(&self, x: &RVec) -> Result<bool> {
        Ok(all_le(&self.lower, x)? && all_le(x, &self.upper)?)
    }

    pub(crate) fn require_open(&self, x: &RVec) -> Result<()> {
        if self.contains_open(x)? {
            Ok(())
        } else {
            Err(Error::InvalidRectangle(format!(
                "reference point {:?} is not inside the open rectangle",
                x.0
            )))
        }
    }
}

impl TryFrom<RectangleSpec> for Rectangle {
    type Error = Error;

    fn try_from(spec: RectangleSpec) -> Result<Self> {
        Rectangle::new(spec.lower, spec.upper)
    }
}

impl From<Rectangle> for RectangleSpec {
    fn from(r: Rectangle) -> Self {
        RectangleSpec {
            lower: r.lower,
            upper: r.upper,
        }
    }
}

/// `prod_i (upper_i - lower_i)`.
pub fn volume_n(rect: &Rectangle) -> f64 {
    rect.lower
        .0
        .iter()
        .zip(&rect.upper.0)
        .map(|(a, b)| b - a)
        .product()
}

/// Anything that evaluates a joint CDF `F(x) = P(X <= x)`.
pub trait JointCdf {
    fn dim(&self) -> usize;
    fn cdf(&self, x: &RVec) -> Result<f64>;
}

/// One-dimensional CDFs extend by 0 below `a` and 1 above `b`.
impl JointCdf for PiecewiseCdf {
    fn dim(&self) -> usize {
        1
    }

    fn cdf(&self, x: &RVec) -> Result<f64> {
        if x.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: x.dim(),
            });
        }
        let iv = self.interval();
        let t = x[0];
        if t < iv.a {
            Ok(0.0)
        } else if t > iv.b {
            Ok(1.0)
        } else {
            self.eval(t)
        }
    }
}

/// Joint CDF of independent coordinates with the given marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCdf {
    marginals: Vec<PiecewiseCdf>,
}

impl ProductCdf {
    pub fn new(marginals: Vec<PiecewiseCdf>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::InvalidDistribution("no marginals".into()));
        }
        Ok(ProductCdf { marginals })
    }

    pub fn marginals(&self) -> &[PiecewiseCdf] {
        &self.marginals
    }
}

impl JointCdf for ProductCdf {
    fn dim(&self) -> usize {
        self.marginals.len()
    }

    fn cdf(&self, x: &RVec) -> Result<f64> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        self.marginals
            .iter()
            .enumerate()
            .map(|(i, m)| m.cdf(&RVec(vec![x[i]])))
            .product()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct JointSpec {
    rect: Rectangle,
    points: Vec<RVec>,
    weights: Vec<f64>,
}

/// Finitely many weighted atoms inside a rectangle, lower side open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointSpec", into = "JointSpec")]
pub struct DiscreteJointDist {
    rect: Rectangle,
    points: Vec<RVec>,
    weights: Vec<f64>,
}

pub const WEIGHT_TOLERANCE: f64 = 1e-12;

impl DiscreteJointDist {
    pub fn new(rect: Rectangle, points: Vec<RVec>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} atoms but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidDistribution("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        for p in &points {
            let inside = all_lt(&rect.lower, p)? && all_le(p, &rect.upper)?;
            if !inside {
                return Err(Error::InvalidDistribution(format!(
                    "atom {:?} is outside (lower, upper]",
                    p.0
                )));
            }
        }
        Ok(DiscreteJointDist {
            rect,
            points,
            weights,
        })
    }

    /// Equal weights on every point.
    pub fn uniform(rect: Rectangle, points: Vec<RVec>) -> Result<Self> {
        let n = points.len();
        Self::new(rect, points, vec![1.0 / n as f64; n])
    }

    pub fn rect(&self) -> &Rectangle {
        &self.rect
    }

    pub fn points(&self) -> &[RVec] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }
}

impl TryFrom<JointSpec> for DiscreteJointDist {
    type Error = Error;

    fn try_from(spec: JointSpec) -> Result<Self> {
        DiscreteJointDist::new(spec.rect, spec.points, spec.weights)
    }
}

impl From<DiscreteJointDist> for JointSpec {
    fn from(d: DiscreteJointDist) -> Self {
        JointSpec {
            rect: d.rect,
            points: d.points,
            weights: d.weights,
        }
    }
}

/// Total weight of atoms `p` with `p <= x` componentwise.
pub fn joint_cdf_eval(dist: &DiscreteJointDist, x: &RVec) -> Result<f64> {
    same_dim(dist.rect.lower(), x)?;
    let mut total = 0.0;
    for (p, w) in dist.points.iter().zip(&dist.weights) {
        if all_le(p, x)? {
            total += w;
        }
    }
    Ok(total)
}

impl JointCdf for DiscreteJointDist {
    fn dim(&self) -> usize {
        self.rect.dim()
    }

    fn cdf(&self, x: &RVec) -> Result<f64> {
        joint_cdf_eval(self, x)
    }
}
