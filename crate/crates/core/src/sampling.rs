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

//! Seeded random instances: CDFs, utilities and joint distributions.
//!
//! Generators take any [`Rng`]; callers that need reproducible reports seed
//! a `ChaCha8Rng`.

use rand::Rng;

use crate::distributions::{Interval, PiecewiseCdf};
use crate::error::Result;
use crate::multid::{DiscreteJointDist, RVec, Rectangle};
use crate::piecewise::Piece;
use crate::utility::PiecewiseUtility;

/// Up to `max` distinct sorted points strictly inside `(lo, hi)`.
fn interior_points<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64, max: usize) -> Vec<f64> {
    let n = rng.random_range(0..=max);
    let mut pts: Vec<f64> = (0..n)
        .map(|_| lo + (hi - lo) * rng.random::<f64>())
        .filter(|&x| x > lo && x < hi)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

// Shrunk by a relative 1e-12 so |v - center| <= eps survives rounding.
fn band_value<R: Rng + ?Sized>(rng: &mut R, center: f64, eps: f64) -> f64 {
    let half_width = eps * (1.0 - 1e-12);
    if half_width <= 0.0 {
        center
    } else {
        rng.random_range(center - half_width..=center + half_width)
    }
}

pub fn interval<R: Rng + ?Sized>(rng: &mut R, min_width: f64, max_width: f64) -> Interval {
    let a = rng.random_range(-5.0..5.0);
    let w = rng.random_range(min_width..max_width);
    Interval::new(a, a + w).expect("positive width")
}

/// A utility within `eps` of `1{x > x0}`: every value left of and at `x0`
/// lies in `[-eps, eps]`, every value right of it in `[1 - eps, 1 + eps]`.
/// With `ramps` false the utility is a step function.
pub fn approx_utility<R: Rng + ?Sized>(
    rng: &mut R,
    iv: Interval,
    x0: f64,
    eps: f64,
    ramps: bool,
) -> Result<PiecewiseUtility> {
    let mut knots = vec![iv.a];
    knots.extend(interior_points(rng, iv.a, x0, 3));
    knots.push(x0);
    let split = knots.len() - 1;
    knots.extend(interior_points(rng, x0, iv.b, 3));
    knots.push(iv.b);

    let pieces = (0..knots.len() - 1)
        .map(|i| {
            let center = if i < split { 0.0 } else { 1.0 };
            let start = band_value(rng, center, eps);
            let end = if ramps && rng.random_bool(0.5) {
                band_value(rng, center, eps)
            } else {
                start
            };
            Piece { start, end }
        })
        .collect();
    PiecewiseUtility::from_pieces(iv, knots, pieces)
}

/// An arbitrary utility mixing steps and ramps with values in `[-0.5, 1.5]`.
pub fn any_utility<R: Rng + ?Sized>(rng: &mut R, iv: Interval) -> Result<PiecewiseUtility> {
    let mut knots = vec![iv.a];
    knots.extend(interior_points(rng, iv.a, iv.b, 6));
    knots.push(iv.b);
    let pieces = (0..knots.len() - 1)
        .map(|_| {
            let start = rng.random_range(-0.5..=1.5);
            let end = if rng.random_bool(0.5) {
                rng.random_range(-0.5..=1.5)
            } else {
                start
            };
            Piece { start, end }
        })
        .collect();
    PiecewiseUtility::from_pieces(iv, knots, pieces)
}

/// Utilities that flip between the two bands more than once, so several
/// breakpoints look locally like reference points.
pub fn multi_jump_utility<R: Rng + ?Sized>(
    rng: &mut R,
    iv: Interval,
    eps: f64,
) -> Result<PiecewiseUtility> {
    let jumps = loop {
        let pts = interior_points(rng, iv.a, iv.b, 5);
        if pts.len() >= 2 {
            break pts;
        }
    };
    let mut high = rng.random_bool(0.5);
    let plateaus: Vec<f64> = (0..=jumps.len())
        .map(|_| {
            let v = band_value(rng, if high { 1.0 } else { 0.0 }, eps);
            high = !high;
            v
        })
        .collect();
    PiecewiseUtility::step(iv, &jumps, &plateaus)
}

/// Empirical step CDF. Samples come from a coarse lattice half the time so
/// ties and shared jump locations are common.
pub fn step_cdf<R: Rng + ?Sized>(rng: &mut R, iv: Interval) -> PiecewiseCdf {
    let n = rng.random_range(1..=25);
    let lattice = rng.random_bool(0.5);
    let samples: Vec<f64> = (0..n)
        .map(|_| {
            if lattice {
                let k = rng.random_range(1..=10);
                if k == 10 {
                    iv.b
                } else {
                    iv.a + iv.width() * (k as f64 / 10.0)
                }
            } else {
                let s = iv.a + iv.width() * rng.random::<f64>();
                if s > iv.a {
                    s
                } else {
                    iv.b
                }
            }
        })
        .collect();
    PiecewiseCdf::from_samples(&samples, iv).expect("samples lie in (a, b]")
}

/// Continuous piecewise linear CDF with random interior knots.
pub fn linear_cdf<R: Rng + ?Sized>(rng: &mut R, iv: Interval) -> PiecewiseCdf {
    let mut knots = vec![iv.a];
    knots.extend(interior_points(rng, iv.a, iv.b, 8));
    knots.push(iv.b);
    let mut total = 0.0;
    let mut cumulative = vec![0.0];
    for _ in 1..knots.len() {
        total += rng.random_range(0.0..1.0);
        cumulative.push(total);
    }
    if total == 0.0 {
        return PiecewiseCdf::uniform(iv);
    }
    let values = cumulative.iter().map(|c| c / total).collect();
    PiecewiseCdf::linear(iv, knots, values).expect("normalized increments")
}

pub fn cdf<R: Rng + ?Sized>(rng: &mut R, iv: Interval) -> PiecewiseCdf {
    if rng.random_bool(0.5) {
        step_cdf(rng, iv)
    } else {
        linear_cdf(rng, iv)
    }
}

/// Two CDFs of the same kind, so the supremum of their difference is
/// attained at a breakpoint.
pub fn cdf_pair<R: Rng + ?Sized>(rng: &mut R, iv: Interval) -> (PiecewiseCdf, PiecewiseCdf) {
    let step = rng.random_bool(0.5);
    let draw = |rng: &mut R| if step { step_cdf(rng, iv) } else { linear_cdf(rng, iv) };
    let f = draw(rng);
    let g = if rng.random_bool(0.1) { f.clone() } else { draw(rng) };
    (f, g)
}

pub fn rectangle<R: Rng + ?Sized>(rng: &mut R, dim: usize, min_side: f64, max_side: f64) -> Rectangle {
    let lower: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
    let upper = lower
        .iter()
        .map(|&a| a + rng.random_range(min_side..max_side))
        .collect();
    Rectangle::new(RVec::new(lower), RVec::new(upper)).expect("positive sides")
}

/// Discrete distribution with `atoms` points in `rect`, lower side open.
/// With `lattice`, coordinates sit on a 4-per-side grid so ties are common.
pub fn joint_dist<R: Rng + ?Sized>(
    rng: &mut R,
    rect: &Rectangle,
    atoms: usize,
    lattice: bool,
) -> DiscreteJointDist {
    let dim = rect.dim();
    let points: Vec<RVec> = (0..atoms)
        .map(|_| {
            RVec::new(
                (0..dim)
                    .map(|i| {
                        let (a, b) = (rect.lower()[i], rect.upper()[i]);
                        let t = if lattice {
                            rng.random_range(1..=4) as f64 / 4.0
                        } else {
                            1.0 - rng.random::<f64>()
                        };
                        let x = a + (b - a) * t;
                        if t == 1.0 {
                            b
                        } else if x > a {
                            x
                        } else {
                            b
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    let raw: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    DiscreteJointDist::new(rect.clone(), points, weights).expect("atoms generated inside the rectangle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utility::{classify_indicator, IndicatorClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn approx_utilities_classify_at_their_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let iv = interval(&mut rng, 0.5, 5.0);
            let x0 = iv.a + iv.width() * rng.random_range(0.05..0.95);
            let eps = rng.random_range(0.01..0.49);
            let u = approx_utility(&mut rng, iv, x0, eps, true).unwrap();
            match classify_indicator(&u, eps).unwrap() {
                IndicatorClass::Approx { reference, achieved_sup } => {
                    assert_eq!(reference, x0);
                    assert!(achieved_sup <= eps);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn generated_cdfs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let iv = interval(&mut rng, 0.1, 10.0);
            let f = cdf(&mut rng, iv);
            assert_eq!(f.eval(iv.a).unwrap(), 0.0);
            assert_eq!(f.eval(iv.b).unwrap(), 1.0);
            assert!(f.function().is_nondecreasing());
        }
    }

    #[test]
    fn joint_weights_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for dim in 1..=4 {
            let rect = rectangle(&mut rng, dim, 0.5, 2.0);
            let d = joint_dist(&mut rng, &rect, 30, dim % 2 == 0);
            let total: f64 = d.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
