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

//! Tolerance dominance in the upper-orthant order.
//!
//! `F` dominates `G` with tolerance `eps_surv` when
//! `S_F(x0) >= S_G(x0) - eps_surv` for every reference `x0` in the open
//! rectangle, `S` being the survival probability. For discrete inputs the
//! survival functions are constant between consecutive atom coordinates, so
//! the shifted-coordinate grid from [`default_candidates`] decides the
//! quantifier exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    rsi_nd, survival_prob, volume_n, DiscreteJointDist, JointCdf, NdLimits, OrthantUtility,
    RVec, Rectangle,
};
use crate::dominance::{check_tolerance_pair, TheoremConfig, SLACK};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateMargin {
    pub x0: RVec,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NffsdVerdict {
    pub holds: bool,
    pub eps_surv: f64,
    /// Smallest `S_F(x0) - S_G(x0)` over the candidates.
    pub worst_margin: f64,
    pub worst_candidate: RVec,
    pub min_epsilon: f64,
    pub candidates_checked: usize,
    /// The verdict covers only the supplied candidates, not every point.
    pub grid_certified: bool,
    pub margins: Vec<CandidateMargin>,
}

/// Sorted distinct coordinates of all atoms, shifted by half the smallest
/// gap on either side, restricted to the open rectangle, then crossed over
/// all dimensions.
pub fn default_candidates(
    dists: &[&DiscreteJointDist],
    rect: &Rectangle,
    limits: &NdLimits,
) -> Result<Vec<RVec>> {
    let n = rect.dim();
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (rect.lower()[i], rect.upper()[i]);
        let mut atoms = Vec::new();
        for d in dists {
            if d.rect().dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: d.rect().dim(),
                });
            }
            atoms.extend(d.points().iter().map(|p| p[i]));
        }
        atoms.sort_by(f64::total_cmp);
        atoms.dedup();
        let mut coords = atoms.clone();
        coords.extend([a, b]);
        coords.sort_by(f64::total_cmp);
        coords.dedup();
        let delta = coords
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
            / 2.0;
        let mut axis: Vec<f64> = atoms
            .iter()
            .flat_map(|&c| [c - delta, c + delta])
            .filter(|&x| x > a && x < b)
            .collect();
        axis.sort_by(f64::total_cmp);
        axis.dedup();
        axes.push(axis);
    }

    let size = axes
        .iter()
        .try_fold(1usize, |acc, axis| acc.checked_mul(axis.len()))
        .unwrap_or(usize::MAX);
    if size == 0 {
        return Err(Error::CandidateSetEmpty);
    }
    if size > limits.candidate_cap {
        return Err(Error::CandidateCapExceeded {
            size,
            cap: limits.candidate_cap,
        });
    }

    let mut out = Vec::with_capacity(size);
    let mut idx = vec![0usize; n];
    loop {
        out.push(RVec::new((0..n).map(|i| axes[i][idx[i]]).collect()));
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn check_candidates(rect: &Rectangle, candidates: &[RVec], limits: &NdLimits) -> Result<()> {
    if candidates.is_empty() {
        return Err(Error::CandidateSetEmpty);
    }
    if candidates.len() > limits.candidate_cap {
        return Err(Error::CandidateCapExceeded {
            size: candidates.len(),
            cap: limits.candidate_cap,
        });
    }
    candidates.iter().try_for_each(|c| rect.require_open(c))
}

fn check_dims(f: &dyn JointCdf, g: &dyn JointCdf, rect: &Rectangle) -> Result<()> {
    for d in [f.dim(), g.dim()] {
        if d != rect.dim() {
            return Err(Error::DimensionMismatch {
                expected: rect.dim(),
                got: d,
            });
        }
    }
    Ok(())
}

pub fn check_nffsd(
    f: &dyn JointCdf,
    g: &dyn JointCdf,
    rect: &Rectangle,
    eps_surv: f64,
    candidates: &[RVec],
    limits: &NdLimits,
) -> Result<NffsdVerdict> {
    if eps_surv.is_nan() || eps_surv < 0.0 {
        return Err(Error::InvalidTolerance(eps_surv));
    }
    check_dims(f, g, rect)?;
    check_candidates(rect, candidates, limits)?;
    let mut margins = Vec::with_capacity(candidates.len());
    let mut worst = 0;
    for (k, x0) in candidates.iter().enumerate() {
        let margin = survival_prob(f, x0, rect.upper(), limits.dim_cap)?
            - survival_prob(g, x0, rect.upper(), limits.dim_cap)?;
        if margin < margins.get(worst).map_or(f64::INFINITY, |m: &CandidateMargin| m.margin) {
            worst = k;
        }
        margins.push(CandidateMargin {
            x0: x0.clone(),
            margin,
        });
    }
    let worst_margin = margins[worst].margin;
    Ok(NffsdVerdict {
        holds: worst_margin >= -eps_surv,
        eps_surv,
        worst_margin,
        worst_candidate: margins[worst].x0.clone(),
        min_epsilon: (-worst_margin).max(0.0),
        candidates_checked: candidates.len(),
        grid_certified: true,
        margins,
    })
}

/// Exact verdict for two discrete distributions on the default candidates.
pub fn check_nffsd_discrete(
    f: &DiscreteJointDist,
    g: &DiscreteJointDist,
    eps_surv: f64,
    limits: &NdLimits,
) -> Result<NffsdVerdict> {
    if f.rect() != g.rect() {
        return Err(Error::InvalidRectangle(
            "distributions live on different rectangles".into(),
        ));
    }
    let candidates = default_candidates(&[f, g], f.rect(), limits)?;
    let mut verdict = check_nffsd(f, g, f.rect(), eps_surv, &candidates, limits)?;
    verdict.grid_certified = false;
    Ok(verdict)
}

/// `max(0, max_x0 S_G(x0) - S_F(x0))` over the candidates.
pub fn min_epsilon_nffsd(
    f: &dyn JointCdf,
    g: &dyn JointCdf,
    rect: &Rectangle,
    candidates: &[RVec],
    limits: &NdLimits,
) -> Result<f64> {
    Ok(check_nffsd(f, g, rect, 0.0, candidates, limits)?.min_epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NdTheoremReport {
    pub eps1: f64,
    pub eps2: f64,
    pub eps_surv: f64,
    pub lhs: bool,
    pub rhs: bool,
    pub max_violation: f64,
    pub margins: Vec<CandidateMargin>,
    pub utilities_tested: usize,
    pub forward_violations: usize,
    pub worst_gap: f64,
    pub witness_rhs: bool,
    pub backward_consistent: bool,
    pub backward_witness: Option<CandidateMargin>,
}

fn band<R: Rng>(rng: &mut R, center: f64, eps: f64) -> f64 {
    let half_width = eps * (1.0 - 1e-12);
    rng.random_range(center - half_width..=center + half_width)
}

/// The n-dimensional counterpart of
/// [`check_equivalence_theorem`](crate::dominance::check_equivalence_theorem)
/// with `eps_surv = (eps1 - eps2) * volume`.
#[allow(clippy::too_many_arguments)]
pub fn check_equivalence_theorem_nd(
    f: &dyn JointCdf,
    g: &dyn JointCdf,
    rect: &Rectangle,
    eps1: f64,
    eps2: f64,
    candidates: &[RVec],
    config: &TheoremConfig,
    limits: &NdLimits,
) -> Result<NdTheoremReport> {
    check_tolerance_pair(eps1, eps2)?;
    let volume = volume_n(rect);
    let eps_surv = (eps1 - eps2) * volume;
    let verdict = check_nffsd(f, g, rect, eps_surv, candidates, limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut margins = Vec::with_capacity(candidates.len());
    let mut utilities_tested = 0;
    let mut forward_violations = 0;
    let mut worst_gap = f64::INFINITY;
    let mut witness_rhs = true;
    let mut grid_dominates = true;
    let mut backward_witness: Option<CandidateMargin> = None;

    for (x0, m) in candidates.iter().zip(&verdict.margins) {
        margins.push(CandidateMargin {
            x0: x0.clone(),
            margin: m.margin + eps1 * volume - eps2 * volume,
        });
        if m.margin < -eps_surv - SLACK {
            grid_dominates = false;
        }

        let witness = OrthantUtility::witness(x0.clone(), eps2, rect.clone())?;
        let gap = rsi_nd(&witness, f, rect, eps1, limits)?.value
            - rsi_nd(&witness, g, rect, eps2, limits)?.value;
        utilities_tested += 1;
        worst_gap = worst_gap.min(gap);
        if gap < -SLACK {
            witness_rhs = false;
            if verdict.holds {
                forward_violations += 1;
            }
            if backward_witness.as_ref().is_none_or(|w| gap < w.margin) {
                backward_witness = Some(CandidateMargin {
                    x0: x0.clone(),
                    margin: gap,
                });
            }
        }

        let mut drawn = 0;
        while drawn < config.random_utilities {
            let hi = band(&mut rng, 1.0, eps2);
            let lo = band(&mut rng, 0.0, eps2);
            let u = OrthantUtility::new(x0.clone(), hi, lo, rect.clone())?;
            if u.is_exact() {
                continue;
            }
            drawn += 1;
            let gap = rsi_nd(&u, f, rect, eps1, limits)?.value
                - rsi_nd(&u, g, rect, eps2, limits)?.value;
            utilities_tested += 1;
            worst_gap = worst_gap.min(gap);
            if gap < -SLACK && verdict.holds {
                forward_violations += 1;
            }
        }
    }

    Ok(NdTheoremReport {
        eps1,
        eps2,
        eps_surv,
        lhs: verdict.holds,
        rhs: worst_gap >= -SLACK,
        max_violation: verdict.min_epsilon,
        margins,
        utilities_tested,
        forward_violations,
        worst_gap,
        witness_rhs,
        backward_consistent: !witness_rhs || grid_dominates,
        backward_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> RVec {
        RVec::new(x.to_vec())
    }

    fn square() -> Rectangle {
        Rectangle::new(v(&[0.0, 0.0]), v(&[4.0, 4.0])).unwrap()
    }

    fn atom(p: [f64; 2]) -> DiscreteJointDist {
        DiscreteJointDist::uniform(square(), vec![v(&p)]).unwrap()
    }

    #[test]
    fn candidates_cover_plateaus() {
        let f = atom([1.0, 3.0]);
        let g = atom([3.0, 3.0]);
        let c = default_candidates(&[&f, &g], f.rect(), &NdLimits::default()).unwrap();
        // axis 0: coords {1, 3}, delta 0.5 -> {0.5, 1.5, 2.5, 3.5}
        // axis 1: coords {3}, gaps {3, 1}, delta 0.5 -> {2.5, 3.5}
        assert_eq!(c.len(), 8);
        assert_eq!(c[0], v(&[0.5, 2.5]));
        assert_eq!(c[7], v(&[3.5, 3.5]));
    }

    #[test]
    fn candidate_cap() {
        let f = atom([1.0, 3.0]);
        let limits = NdLimits {
            dim_cap: 16,
            candidate_cap: 3,
        };
        assert!(matches!(
            default_candidates(&[&f], f.rect(), &limits),
            Err(Error::CandidateCapExceeded { size: 4, cap: 3 })
        ));
        assert_eq!(
            check_nffsd(&f, &f, f.rect(), 0.0, &[], &NdLimits::default()),
            Err(Error::CandidateSetEmpty)
        );
    }

    #[test]
    fn reflexive() {
        let f = atom([1.0, 3.0]);
        let v = check_nffsd_discrete(&f, &f, 0.0, &NdLimits::default()).unwrap();
        assert!(v.holds);
        assert!(!v.grid_certified);
        assert_eq!(v.min_epsilon, 0.0);
    }

    #[test]
    fn atom_swap() {
        let high = atom([3.0, 3.0]);
        let low = atom([1.0, 1.0]);
        let limits = NdLimits::default();
        assert!(check_nffsd_discrete(&high, &low, 0.0, &limits).unwrap().holds);
        let v = check_nffsd_discrete(&low, &high, 0.5, &limits).unwrap();
        assert!(!v.holds);
        assert_eq!(v.worst_margin, -1.0);
        let w = &v.worst_candidate;
        // strictly below the high atom, not strictly below the low one
        assert!(w[0] < 3.0 && w[1] < 3.0 && (w[0] > 1.0 || w[1] > 1.0));
        assert!(check_nffsd_discrete(&low, &high, 1.0, &limits).unwrap().holds);
        let c = default_candidates(&[&low, &high], low.rect(), &limits).unwrap();
        assert_eq!(min_epsilon_nffsd(&low, &high, low.rect(), &c, &limits).unwrap(), 1.0);
        assert_eq!(min_epsilon_nffsd(&high, &low, low.rect(), &c, &limits).unwrap(), 0.0);
    }

    #[test]
    fn theorem_nd_examples() {
        let limits = NdLimits::default();
        let cfg = TheoremConfig::default();
        let unit = Rectangle::unit(2);
        let d = DiscreteJointDist::uniform(unit.clone(), vec![v(&[0.5, 0.5]), v(&[0.25, 0.75])])
            .unwrap();
        let c = default_candidates(&[&d], &unit, &limits).unwrap();
        let r = check_equivalence_theorem_nd(&d, &d, &unit, 0.3, 0.1, &c, &cfg, &limits).unwrap();
        assert!((r.eps_surv - 0.2).abs() < 1e-15);
        assert!(r.lhs && r.rhs);
        for m in &r.margins {
            assert!((m.margin - 0.2).abs() < 1e-12);
        }

        let high = atom([3.0, 3.0]);
        let low = atom([1.0, 1.0]);
        let c = default_candidates(&[&low, &high], &square(), &limits).unwrap();
        // eps_surv = 0.05 * 16 = 0.8 < 1
        let r = check_equivalence_theorem_nd(&low, &high, &square(), 0.3, 0.25, &c, &cfg, &limits)
            .unwrap();
        assert!(!r.lhs);
        let w = r.backward_witness.expect("witness");
        assert!((w.margin + 0.2).abs() < 1e-9);
        assert!(r.backward_consistent);
    }
}
