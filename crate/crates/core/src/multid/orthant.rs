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

//! Upper-orthant utilities and the n-dimensional robust integral.

use serde::Serialize;

use super::{all_gt, survival_prob, volume_n, JointCdf, NdLimits, RVec, Rectangle};
use crate::error::{Error, Result};
use crate::integral::RsiCase;
use crate::utility::check_tolerance;

/// `1` if `x >> x0`, else `0`.
pub fn orthant_indicator(x0: &RVec, x: &RVec) -> Result<f64> {
    Ok(if all_gt(x, x0)? { 1.0 } else { 0.0 })
}

/// `u(x) = hi` on `{x >> reference}` and `lo` elsewhere in the rectangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthantUtility {
    reference: RVec,
    hi: f64,
    lo: f64,
    rect: Rectangle,
}

impl OrthantUtility {
    pub fn new(reference: RVec, hi: f64, lo: f64, rect: Rectangle) -> Result<Self> {
        rect.require_open(&reference)?;
        if !(hi.is_finite() && lo.is_finite()) {
            return Err(Error::MalformedPiecewise("orthant levels must be finite".into()));
        }
        Ok(OrthantUtility {
            reference,
            hi,
            lo,
            rect,
        })
    }

    /// The exact orthant indicator at `reference`.
    pub fn indicator(reference: RVec, rect: Rectangle) -> Result<Self> {
        Self::new(reference, 1.0, 0.0, rect)
    }

    /// Levels `1 - eps2/2` and `eps2/2`.
    pub fn witness(reference: RVec, eps2: f64, rect: Rectangle) -> Result<Self> {
        check_tolerance(eps2)?;
        if eps2 == 0.0 {
            return Err(Error::InvalidTolerance(eps2));
        }
        Self::new(reference, 1.0 - eps2 / 2.0, eps2 / 2.0, rect)
    }

    pub fn reference(&self) -> &RVec {
        &self.reference
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn rect(&self) -> &Rectangle {
        &self.rect
    }

    pub fn is_exact(&self) -> bool {
        self.hi == 1.0 && self.lo == 0.0
    }

    pub fn eval(&self, x: &RVec) -> Result<f64> {
        Ok(if all_gt(x, &self.reference)? {
            self.hi
        } else {
            self.lo
        })
    }
}

/// Exact `sup_{x in rect} |u(x) - 1{x >> x0}|`.
///
/// The rectangle splits into four regions by membership in the two orthants.
/// Both orthants meet near the upper corner and both miss the lower corner;
/// `u`'s orthant sticks out of `x0`'s iff some `reference_i < x0_i`, and the
/// other way round iff some `x0_i < reference_i`.
pub fn orthant_sup_distance(u: &OrthantUtility, x0: &RVec) -> Result<f64> {
    u.rect.require_open(x0)?;
    let r = u.reference.as_slice();
    let x = x0.as_slice();
    let mut sup = (u.hi - 1.0).abs().max(u.lo.abs());
    if r.iter().zip(x).any(|(ri, xi)| ri < xi) {
        sup = sup.max(u.hi.abs());
    }
    if r.iter().zip(x).any(|(ri, xi)| xi < ri) {
        sup = sup.max((u.lo - 1.0).abs());
    }
    Ok(sup)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum OrthantClass {
    Exact { reference: RVec },
    Approx { reference: RVec, achieved_sup: f64 },
    Neither,
}

pub fn classify_orthant_indicator(u: &OrthantUtility, eps: f64) -> Result<OrthantClass> {
    check_tolerance(eps)?;
    if u.is_exact() {
        return Ok(OrthantClass::Exact {
            reference: u.reference.clone(),
        });
    }
    let d = (u.hi - 1.0).abs().max(u.lo.abs());
    if d <= eps {
        Ok(OrthantClass::Approx {
            reference: u.reference.clone(),
            achieved_sup: d,
        })
    } else {
        Ok(OrthantClass::Neither)
    }
}

/// Classification of an arbitrary utility, valid only on the supplied grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridClassification {
    pub class: OrthantClass,
    pub grid_certified: bool,
    /// Candidates whose grid distance is within `eps`; several may share a
    /// grid cell.
    pub feasible_candidates: usize,
}

/// Tests each candidate reference against `utility` over `grid` only.
pub fn classify_callable(
    utility: &dyn Fn(&RVec) -> f64,
    rect: &Rectangle,
    eps: f64,
    grid: &[RVec],
    candidates: &[RVec],
) -> Result<GridClassification> {
    check_tolerance(eps)?;
    if grid.is_empty() || candidates.is_empty() {
        return Err(Error::CandidateSetEmpty);
    }
    let mut exact = None;
    let mut approx: Option<(RVec, f64)> = None;
    let mut feasible_candidates = 0;
    for x0 in candidates {
        rect.require_open(x0)?;
        let mut d: f64 = 0.0;
        for x in grid {
            d = d.max((utility(x) - orthant_indicator(x0, x)?).abs());
        }
        if d <= eps {
            feasible_candidates += 1;
            if d == 0.0 && exact.is_none() {
                exact = Some(x0.clone());
            }
            if approx.is_none() {
                approx = Some((x0.clone(), d));
            }
        }
    }
    let class = match (exact, approx) {
        (Some(reference), _) => OrthantClass::Exact { reference },
        (None, Some((reference, achieved_sup))) => OrthantClass::Approx {
            reference,
            achieved_sup,
        },
        (None, None) => OrthantClass::Neither,
    };
    Ok(GridClassification {
        class,
        grid_certified: true,
        feasible_candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NdRsiResult {
    pub value: f64,
    pub case: RsiCase,
    pub reference: Option<RVec>,
    pub tolerance_adjustment: f64,
}

/// Survival probability at the reference, plus `eps * volume` in the
/// approximate case, or 0.
pub fn rsi_nd(
    u: &OrthantUtility,
    cdf: &dyn JointCdf,
    rect: &Rectangle,
    eps: f64,
    limits: &NdLimits,
) -> Result<NdRsiResult> {
    if u.rect != *rect {
        return Err(Error::InvalidRectangle(
            "utility and integration rectangle differ".into(),
        ));
    }
    if cdf.dim() != rect.dim() {
        return Err(Error::DimensionMismatch {
            expected: rect.dim(),
            got: cdf.dim(),
        });
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidTolerance(eps));
    }
    let fallback = NdRsiResult {
        value: 0.0,
        case: RsiCase::Fallback,
        reference: None,
        tolerance_adjustment: 0.0,
    };
    if u.is_exact() {
        return Ok(NdRsiResult {
            value: survival_prob(cdf, &u.reference, rect.upper(), limits.dim_cap)?,
            case: RsiCase::Exact,
            reference: Some(u.reference.clone()),
            tolerance_adjustment: 0.0,
        });
    }
    if eps == 0.0 {
        return Ok(fallback);
    }
    match classify_orthant_indicator(u, eps)? {
        OrthantClass::Approx { reference, .. } => {
            let adjustment = eps * volume_n(rect);
            let survival = survival_prob(cdf, &reference, rect.upper(), limits.dim_cap)?;
            Ok(NdRsiResult {
                value: survival + adjustment,
                case: RsiCase::Approx,
                reference: Some(reference),
                tolerance_adjustment: adjustment,
            })
        }
        OrthantClass::Exact { .. } | OrthantClass::Neither => Ok(fallback),
    }
}
