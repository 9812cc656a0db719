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

//! Seeded randomized suites for the uniqueness lemma and both equivalence
//! theorems. Identical configurations produce identical reports.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::Interval;
use crate::dominance::{
    check_equivalence_theorem, default_x0_grid, TheoremConfig, SLACK,
};
use crate::error::Result;
use crate::multid::{check_equivalence_theorem_nd, default_candidates, NdLimits};
use crate::oracle::{ambiguous_utility, midpoint_contradiction_certificate};
use crate::sampling;
use crate::utility::{classify_indicator, sup_distance_to_indicator, PiecewiseUtility};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// Random approximate-indicator utilities per reference point.
    pub random_utilities: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        SuiteConfig {
            seed,
            trials,
            random_utilities: 3,
        }
    }
}

/// Pass/fail counts for one equivalence-theorem sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremSuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub dominance_holds: usize,
    pub dominance_fails: usize,
    /// Instances whose implied tolerance is at least 1/2.
    pub epsilon_at_least_half: usize,
    pub utilities_tested: usize,
    pub forward_violations: usize,
    /// Smallest integral gap seen on instances where dominance holds.
    pub worst_forward_gap: f64,
    pub backward_witnessed: usize,
    pub backward_missed: usize,
    /// Largest `(max_violation - eps) - found violation` over failing
    /// instances; at most `SLACK` when every witness is sharp.
    pub worst_backward_shortfall: f64,
    pub backward_inconsistent: usize,
    pub passed: bool,
}

impl TheoremSuiteReport {
    fn new(config: &SuiteConfig, dims: Vec<usize>) -> Self {
        TheoremSuiteReport {
            seed: config.seed,
            trials: config.trials,
            dims,
            dominance_holds: 0,
            dominance_fails: 0,
            epsilon_at_least_half: 0,
            utilities_tested: 0,
            forward_violations: 0,
            worst_forward_gap: f64::INFINITY,
            backward_witnessed: 0,
            backward_missed: 0,
            worst_backward_shortfall: f64::NEG_INFINITY,
            backward_inconsistent: 0,
            passed: false,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        lhs: bool,
        eps: f64,
        max_violation: f64,
        utilities: usize,
        forward_violations: usize,
        worst_gap: f64,
        backward_consistent: bool,
        witness_gap: Option<f64>,
    ) {
        self.utilities_tested += utilities;
        if eps >= 0.5 {
            self.epsilon_at_least_half += 1;
        }
        if !backward_consistent {
            self.backward_inconsistent += 1;
        }
        if lhs {
            self.dominance_holds += 1;
            self.forward_violations += forward_violations;
            self.worst_forward_gap = self.worst_forward_gap.min(worst_gap);
            return;
        }
        self.dominance_fails += 1;
        let required = max_violation - eps;
        let found = witness_gap.map_or(0.0, |g| -g);
        let shortfall = required - found;
        self.worst_backward_shortfall = self.worst_backward_shortfall.max(shortfall);
        if witness_gap.is_some() && shortfall <= SLACK {
            self.backward_witnessed += 1;
        } else {
            self.backward_missed += 1;
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.forward_violations == 0
            && self.backward_missed == 0
            && self.backward_inconsistent == 0;
        self
    }
}

fn tolerance_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let eps2 = rng.random_range(0.01..0.45);
    let eps1 = rng.random_range(eps2 + 0.001..0.499);
    (eps1, eps2)
}

/// 1-D equivalence sweep over random same-kind CDF pairs on narrow
/// intervals, so that both dominating and failing instances occur.
pub fn verify_1d(config: &SuiteConfig) -> Result<TheoremSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = TheoremSuiteReport::new(config, vec![1]);
    for _ in 0..config.trials {
        let iv = sampling::interval(&mut rng, 0.2, 3.0);
        let (f, g) = sampling::cdf_pair(&mut rng, iv);
        let (eps1, eps2) = tolerance_pair(&mut rng);
        let grid = default_x0_grid(&f, &g);
        let theorem_config = TheoremConfig {
            random_utilities: config.random_utilities,
            seed: rng.next_u64(),
        };
        let r = check_equivalence_theorem(&f, &g, eps1, eps2, &grid, &theorem_config)?;
        report.record(
            r.lhs,
            r.epsilon,
            r.max_violation,
            r.utilities_tested,
            r.forward_violations,
            r.worst_gap,
            r.backward_consistent,
            r.backward_witness.map(|w| w.margin),
        );
    }
    Ok(report.finish())
}

/// n-D equivalence sweep over small discrete distributions, cycling
/// through `dims`.
pub fn verify_nd(config: &SuiteConfig, dims: &[usize]) -> Result<TheoremSuiteReport> {
    let limits = NdLimits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = TheoremSuiteReport::new(config, dims.to_vec());
    for trial in 0..config.trials {
        let n = dims[trial % dims.len()];
        let rect = sampling::rectangle(&mut rng, n, 0.3, 1.5);
        let lattice = rng.random_bool(0.5);
        let f_atoms = rng.random_range(1..=4);
        let f = sampling::joint_dist(&mut rng, &rect, f_atoms, lattice);
        let g = if rng.random_bool(0.1) {
            f.clone()
        } else {
            let g_atoms = rng.random_range(1..=4);
            sampling::joint_dist(&mut rng, &rect, g_atoms, lattice)
        };
        let (eps1, eps2) = tolerance_pair(&mut rng);
        let candidates = default_candidates(&[&f, &g], &rect, &limits)?;
        let theorem_config = TheoremConfig {
            random_utilities: config.random_utilities,
            seed: rng.next_u64(),
        };
        let r = check_equivalence_theorem_nd(
            &f,
            &g,
            &rect,
            eps1,
            eps2,
            &candidates,
            &theorem_config,
            &limits,
        )?;
        report.record(
            r.lhs,
            r.eps_surv,
            r.max_violation,
            r.utilities_tested,
            r.forward_violations,
            r.worst_gap,
            r.backward_consistent,
            r.backward_witness.map(|w| w.margin),
        );
    }
    Ok(report.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub seed: u64,
    pub trials: usize,
    pub utilities_with_feasible_reference: usize,
    pub max_feasible_set_size: usize,
    pub uniqueness_violations: usize,
    pub classification_mismatches: usize,
    pub midpoint_pairs: usize,
    pub midpoint_violations: usize,
    pub triangle_violations: usize,
    pub ambiguous_references_checked: usize,
    pub ambiguous_infeasible: usize,
    pub passed: bool,
}

fn random_utility<R: Rng>(rng: &mut R, iv: Interval, eps: f64) -> Result<PiecewiseUtility> {
    match rng.random_range(0..4) {
        0 => {
            let x0 = iv.a + iv.width() * rng.random_range(0.01..0.99);
            // sometimes tighter, sometimes looser than the query tolerance
            let band = (eps * rng.random_range(0.2..1.6)).min(0.499);
            let ramps = rng.random_bool(0.5);
            sampling::approx_utility(rng, iv, x0, band, ramps)
        }
        1 => sampling::multi_jump_utility(rng, iv, eps),
        2 => sampling::any_utility(rng, iv),
        _ => PiecewiseUtility::constant(iv, rng.random_range(-0.5..1.5)),
    }
}

/// Checks that at most one reference point is feasible for `eps < 1/2`, the
/// midpoint certificate, and that `u = 1/2` is feasible everywhere at 1/2.
pub fn verify_uniqueness(seed: u64, trials: usize) -> Result<UniquenessReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = UniquenessReport {
        seed,
        trials,
        utilities_with_feasible_reference: 0,
        max_feasible_set_size: 0,
        uniqueness_violations: 0,
        classification_mismatches: 0,
        midpoint_pairs: 0,
        midpoint_violations: 0,
        triangle_violations: 0,
        ambiguous_references_checked: 0,
        ambiguous_infeasible: 0,
        passed: false,
    };
    for _ in 0..trials {
        let iv = sampling::interval(&mut rng, 0.5, 10.0);
        let eps = rng.random_range(1e-6..0.5);
        let u = random_utility(&mut rng, iv, eps)?;

        let mut probes: Vec<f64> = u.interior_breakpoints().collect();
        probes.extend((0..16).map(|_| iv.a + iv.width() * rng.random_range(0.001..0.999)));
        probes.retain(|&x| iv.contains_open(x));
        probes.sort_by(f64::total_cmp);
        probes.dedup();

        let distances: Vec<f64> = probes
            .iter()
            .map(|&x0| sup_distance_to_indicator(&u, x0))
            .collect::<Result<_>>()?;
        let feasible: Vec<f64> = probes
            .iter()
            .zip(&distances)
            .filter(|(_, &d)| d <= eps)
            .map(|(&x, _)| x)
            .collect();
        report.max_feasible_set_size = report.max_feasible_set_size.max(feasible.len());
        if feasible.len() > 1 {
            report.uniqueness_violations += 1;
        }
        if !feasible.is_empty() {
            report.utilities_with_feasible_reference += 1;
        }
        match classify_indicator(&u, eps) {
            Ok(class) if class.reference() == feasible.first().copied() => {}
            _ => report.classification_mismatches += 1,
        }

        for _ in 0..4 {
            let i = rng.random_range(0..probes.len());
            let j = rng.random_range(0..probes.len());
            if i == j {
                continue;
            }
            report.midpoint_pairs += 1;
            let c = midpoint_contradiction_certificate(&u, probes[i], probes[j])?;
            if c.d1_lower + c.d2_lower < 1.0 - 1e-12 {
                report.midpoint_violations += 1;
            }
            if distances[i] + distances[j] < 1.0 - 1e-12 {
                report.triangle_violations += 1;
            }
        }

        let half = ambiguous_utility(iv);
        for &x0 in &probes {
            report.ambiguous_references_checked += 1;
            if sup_distance_to_indicator(&half, x0)? > 0.5 {
                report.ambiguous_infeasible += 1;
            }
        }
    }
    report.passed = report.uniqueness_violations == 0
        && report.classification_mismatches == 0
        && report.midpoint_violations == 0
        && report.triangle_violations == 0
        && report.ambiguous_infeasible == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        let cfg = SuiteConfig::new(3, 60);
        let r = verify_1d(&cfg).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.dominance_holds > 0 && r.dominance_fails > 0, "{r:?}");
        let r = verify_nd(&cfg, &[2, 3]).unwrap();
        assert!(r.passed, "{r:?}");
        let r = verify_uniqueness(3, 300).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.utilities_with_feasible_reference > 0);
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = SuiteConfig::new(11, 20);
        assert_eq!(verify_1d(&cfg).unwrap(), verify_1d(&cfg).unwrap());
    }
}
