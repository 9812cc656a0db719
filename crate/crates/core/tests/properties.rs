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

//! Randomized invariants checked against the grid oracles.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffsd::distributions::{Interval, PiecewiseCdf};
use ffsd::dominance::{check_ffsd, min_epsilon_ffsd};
use ffsd::integral::{rsi, RsiCase};
use ffsd::multid::{
    check_nffsd_discrete, survival_direct, survival_prob, survival_prob_unclamped, JointCdf,
    NdLimits, ProductCdf, RVec, Rectangle,
};
use ffsd::oracle::{counting_cdf, grid_max_violation, grid_sup_distance, GridSpec};
use ffsd::sampling;
use ffsd::utility::{sup_distance_to_indicator, PiecewiseUtility};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn inside<R: Rng>(rng: &mut R, rect: &Rectangle) -> RVec {
    RVec::new(
        (0..rect.dim())
            .map(|i| {
                let (lo, hi) = (rect.lower()[i], rect.upper()[i]);
                lo + (hi - lo) * rng.random_range(0.001..0.999)
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cdfs_are_monotone_and_normalized(seed in any::<u64>()) {
        let mut r = rng(seed);
        let iv = sampling::interval(&mut r, 0.1, 50.0);
        let f = sampling::cdf(&mut r, iv);
        let mut prev = 0.0;
        for k in 0..=400 {
            let x = if k == 400 { iv.b } else { iv.a + iv.width() * k as f64 / 400.0 };
            let v = f.eval(x).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(v >= prev);
            prev = v;
        }
        prop_assert_eq!(f.eval(iv.b).unwrap(), 1.0);
        prop_assert!(f.eval(iv.a + 2.0 * iv.width()).is_err());
    }

    #[test]
    fn empirical_cdf_matches_counting(seed in any::<u64>(), n in 1usize..60) {
        let mut r = rng(seed);
        let iv = sampling::interval(&mut r, 0.1, 50.0);
        let samples: Vec<f64> = (0..n)
            .map(|_| {
                if r.random_bool(0.3) {
                    iv.b
                } else {
                    (iv.a + iv.width() * r.random_range(0.0001..1.0)).min(iv.b)
                }
            })
            .collect();
        let f = PiecewiseCdf::from_samples(&samples, iv).unwrap();
        for k in 0..1000 {
            let x = if k == 999 { iv.b } else { iv.a + iv.width() * k as f64 / 999.0 };
            prop_assert_eq!(f.eval(x).unwrap(), counting_cdf(&samples, x));
        }
        for &s in &samples {
            prop_assert_eq!(f.eval(s).unwrap(), counting_cdf(&samples, s));
        }
    }

    #[test]
    fn dominance_matches_grid_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let iv = sampling::interval(&mut r, 0.1, 20.0);
        let f = sampling::cdf(&mut r, iv);
        let g = sampling::cdf(&mut r, iv);
        let grid = GridSpec::new(20_000, true).unwrap();
        let oracle = grid_max_violation(&f, &g, &grid).unwrap();
        let eps = r.random_range(0.0..1.0);
        let v = check_ffsd(&f, &g, eps).unwrap();
        prop_assert!((v.max_violation - oracle).abs() <= 1e-9);
        prop_assert_eq!(v.holds, v.max_violation <= eps);
        let min_eps = min_epsilon_ffsd(&f, &g).unwrap();
        prop_assert_eq!(min_eps, v.max_violation.max(0.0));
        prop_assert!(check_ffsd(&f, &g, min_eps).unwrap().holds);
        prop_assert!(check_ffsd(&f, &f, 0.0).unwrap().holds);
    }

    #[test]
    fn dominance_is_monotone_in_tolerance(seed in any::<u64>(), e1 in 0.0f64..1.0, de in 0.0f64..1.0) {
        let mut r = rng(seed);
        let iv = sampling::interval(&mut r, 0.1, 20.0);
        let (f, g) = sampling::cdf_pair(&mut r, iv);
        if check_ffsd(&f, &g, e1).unwrap().holds {
            prop_assert!(check_ffsd(&f, &g, e1 + de).unwrap().holds);
        }
    }

    #[test]
    fn rsi_cases(seed in any::<u64>()) {
        let mut r = rng(seed);
        let iv = sampling::interval(&mut r, 0.1, 20.0);
        let f = sampling::cdf(&mut r, iv);
        let x0 = iv.a + iv.width() * r.random_range(0.01..0.99);
        let ind = PiecewiseUtility::indicator(iv, x0).unwrap();
        let eps = r.random_range(0.0..0.499);
        let exact = rsi(&ind, &f, eps).unwrap();
        prop_assert_eq!(exact.case, RsiCase::Exact);
        prop_assert_eq!(exact.value, 1.0 - f.eval(x0).unwrap());
        let u = sampling::approx_utility(&mut r, iv, x0, 0.3, true).unwrap();
        if sup_distance_to_indicator(&u, x0).unwrap() > 0.0 {
            prop_assert_eq!(rsi(&u, &f, 0.0).unwrap().case, RsiCase::Fallback);
            prop_assert_eq!(rsi(&u, &f, 0.0).unwrap().value, 0.0);
        }
    }

    #[test]
    fn survival_stays_in_unit_range(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=5);
        let rect = sampling::rectangle(&mut r, dim, 0.2, 3.0);
        let atoms = r.random_range(1..=30);
        let lattice = r.random_bool(0.5);
        let d = sampling::joint_dist(&mut r, &rect, atoms, lattice);
        let x = inside(&mut r, &rect);
        let raw = survival_prob_unclamped(&d, &x, rect.upper(), 16).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&raw));
        let s = survival_prob(&d, &x, rect.upper(), 16).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s - survival_direct(&d, &x).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn survival_is_antitone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=4);
        let rect = sampling::rectangle(&mut r, dim, 0.2, 3.0);
        let d = sampling::joint_dist(&mut r, &rect, 12, true);
        let x = inside(&mut r, &rect);
        let y = RVec::new(
            (0..dim)
                .map(|i| x[i] + (rect.upper()[i] - x[i]) * r.random_range(0.0..0.99))
                .collect(),
        );
        let sx = survival_prob(&d, &x, rect.upper(), 16).unwrap();
        let sy = survival_prob(&d, &y, rect.upper(), 16).unwrap();
        prop_assert!(sy <= sx + 1e-12);
    }

    #[test]
    fn product_survival_factorizes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.random_range(1..=4);
        let rect = sampling::rectangle(&mut r, dim, 0.2, 3.0);
        let marginals: Vec<PiecewiseCdf> = (0..dim)
            .map(|i| {
                let iv = Interval::new(rect.lower()[i], rect.upper()[i]).unwrap();
                sampling::cdf(&mut r, iv)
            })
            .collect();
        let x = inside(&mut r, &rect);
        let want: f64 = marginals
            .iter()
            .enumerate()
            .map(|(i, m)| 1.0 - m.eval(x[i]).unwrap())
            .product();
        let p = ProductCdf::new(marginals).unwrap();
        prop_assert_eq!(p.dim(), dim);
        let got = survival_prob(&p, &x, rect.upper(), 16).unwrap();
        prop_assert!((got - want).abs() <= 1e-12);
    }

    #[test]
    fn one_dimensional_survival_is_complement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let iv = sampling::interval(&mut r, 0.1, 20.0);
        let f = sampling::cdf(&mut r, iv);
        let x0 = iv.a + iv.width() * r.random_range(0.001..0.999);
        let s = survival_prob(&f, &RVec::new(vec![x0]), &RVec::new(vec![iv.b]), 16).unwrap();
        prop_assert!((s - (1.0 - f.eval(x0).unwrap())).abs() <= 1e-12);
    }

    #[test]
    fn nd_dominance_is_monotone(seed in any::<u64>(), e in 0.0f64..1.0, de in 0.0f64..1.0) {
        let mut r = rng(seed);
        let dim = r.random_range(2..=3);
        let rect = sampling::rectangle(&mut r, dim, 0.3, 2.0);
        let f = sampling::joint_dist(&mut r, &rect, 3, true);
        let g = sampling::joint_dist(&mut r, &rect, 3, true);
        let limits = NdLimits::default();
        let v = check_nffsd_discrete(&f, &g, e, &limits).unwrap();
        prop_assert_eq!(v.holds, v.min_epsilon <= e);
        if v.holds {
            prop_assert!(check_nffsd_discrete(&f, &g, e + de, &limits).unwrap().holds);
        }
        prop_assert_eq!(check_nffsd_discrete(&f, &f, 0.0, &limits).unwrap().min_epsilon, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sup_distance_matches_fine_grid(seed in any::<u64>()) {
        let mut r = rng(seed);
        let iv = sampling::interval(&mut r, 0.1, 20.0);
        let u = if r.random_bool(0.5) {
            sampling::any_utility(&mut r, iv).unwrap()
        } else {
            let x0 = iv.a + iv.width() * r.random_range(0.01..0.99);
            let band = r.random_range(0.0..0.49);
            sampling::approx_utility(&mut r, iv, x0, band, true).unwrap()
        };
        let grid = GridSpec::new(100_000, true).unwrap();
        for _ in 0..3 {
            let x0 = iv.a + iv.width() * r.random_range(0.001..0.999);
            let exact = sup_distance_to_indicator(&u, x0).unwrap();
            let oracle = grid_sup_distance(&u, x0, &grid).unwrap();
            prop_assert!((exact - oracle).abs() <= 1e-12, "{} vs {}", exact, oracle);
        }
    }
}

#[test]
fn uniform_against_quadratic_on_fine_grid() {
    let iv = Interval::new(0.0, 10.0).unwrap();
    let f = PiecewiseCdf::uniform(iv);
    let g = PiecewiseCdf::interpolate(iv, 40, |x| (x / 10.0).powi(2)).unwrap();
    let grid = GridSpec::new(100_001, false).unwrap();
    let oracle = grid_max_violation(&f, &g, &grid).unwrap();
    assert!((oracle - 0.25).abs() <= 1e-12);
    assert_eq!(check_ffsd(&f, &g, 0.25).unwrap().max_violation, 0.25);
}
