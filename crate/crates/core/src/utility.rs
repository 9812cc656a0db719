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

//! Utility functions and their classification against indicator functions.
//!
//! A [`PiecewiseUtility`] is left-continuous: the value at a breakpoint
//! belongs to the segment on its left. This matches the indicator
//! `1{x > x0}`, which is 0 at `x0` itself, so an exact indicator is
//! representable with sup-distance 0.
//!
//! For `eps < 1/2` a feasible reference point must sit at a jump of `u`:
//! left of it `u` stays in `[-eps, eps]`, right of it in `[1 - eps, 1 + eps]`,
//! and the two bands do not touch. Scanning breakpoints is therefore a
//! complete search.

use serde::{Deserialize, Serialize};

use crate::distributions::{Interval, PiecewiseSpec, SegmentKind};
use crate::error::{Error, Result};
use crate::piecewise::{difference_events, max_event_by, Piece, Piecewise};

/// Tolerances at or above this value admit more than one reference point.
pub const CRITICAL_TOLERANCE: f64 = 0.5;

/// `1` if `x > x0`, else `0`.
pub fn indicator(x0: f64, x: f64) -> f64 {
    if x > x0 {
        1.0
    } else {
        0.0
    }
}

pub(crate) fn check_tolerance(eps: f64) -> Result<()> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidTolerance(eps));
    }
    if eps >= CRITICAL_TOLERANCE {
        return Err(Error::ToleranceTooLarge(eps));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "PiecewiseSpec")]
pub struct PiecewiseUtility {
    interval: Interval,
    function: Piecewise,
}

impl PiecewiseUtility {
    /// Step utility: `plateaus[0]` on `[a, jumps[0]]`, `plateaus[i]` on
    /// `(jumps[i-1], jumps[i]]`, and the last plateau up to `b`.
    pub fn step(interval: Interval, jumps: &[f64], plateaus: &[f64]) -> Result<Self> {
        if plateaus.len() != jumps.len() + 1 {
            return Err(Error::MalformedPiecewise(format!(
                "{} jumps need {} plateaus, got {}",
                jumps.len(),
                jumps.len() + 1,
                plateaus.len()
            )));
        }
        if jumps.iter().any(|&t| !interval.contains_open(t)) {
            return Err(Error::MalformedPiecewise(format!(
                "utility jumps must lie in ({}, {})",
                interval.a, interval.b
            )));
        }
        let mut knots = Vec::with_capacity(jumps.len() + 2);
        knots.push(interval.a);
        knots.extend_from_slice(jumps);
        knots.push(interval.b);
        let pieces = plateaus.iter().map(|&v| Piece::constant(v)).collect();
        Self::from_pieces(interval, knots, pieces)
    }

    pub fn constant(interval: Interval, value: f64) -> Result<Self> {
        Self::step(interval, &[], &[value])
    }

    /// The exact indicator `1{x > x0}` on `interval`.
    pub fn indicator(interval: Interval, x0: f64) -> Result<Self> {
        Self::step(interval, &[x0], &[0.0, 1.0])
    }

    /// Continuous utility through `(knots[i], values[i])`; knots span `[a, b]`.
    pub fn linear(interval: Interval, knots: Vec<f64>, values: &[f64]) -> Result<Self> {
        if knots.len() != values.len() || knots.len() < 2 {
            return Err(Error::MalformedPiecewise(
                "linear utility needs matching knots and values, at least two".into(),
            ));
        }
        let pieces = values
            .windows(2)
            .map(|w| Piece {
                start: w[0],
                end: w[1],
            })
            .collect();
        Self::from_pieces(interval, knots, pieces)
    }

    /// General form: `pieces[i]` is linear on `(knots[i], knots[i+1]]`,
    /// running from its right limit at `knots[i]` to its value at
    /// `knots[i+1]`. The value at `a` is `pieces[0].start`.
    pub fn from_pieces(interval: Interval, knots: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if knots.first() != Some(&interval.a) || knots.last() != Some(&interval.b) {
            return Err(Error::MalformedPiecewise(format!(
                "utility knots must start at {} and end at {}",
                interval.a, interval.b
            )));
        }
        if pieces.is_empty() {
            return Err(Error::MalformedPiecewise("utility needs a segment".into()));
        }
        let mut values = Vec::with_capacity(knots.len());
        values.push(pieces[0].start);
        values.extend(pieces.iter().map(|p| p.end));
        let function = Piecewise::new(knots, values, pieces)?;
        Ok(PiecewiseUtility { interval, function })
    }

    pub fn from_spec(spec: PiecewiseSpec) -> Result<Self> {
        match spec.kind {
            SegmentKind::Step => Self::step(spec.interval, &spec.breakpoints, &spec.values),
            SegmentKind::Linear => Self::linear(spec.interval, spec.breakpoints, &spec.values),
        }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn function(&self) -> &Piecewise {
        &self.function
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.function.eval(x)
    }

    pub fn interior_breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.function
            .knots()
            .iter()
            .copied()
            .filter(|&k| self.interval.contains_open(k))
    }
}

impl TryFrom<PiecewiseSpec> for PiecewiseUtility {
    type Error = Error;

    fn try_from(spec: PiecewiseSpec) -> Result<Self> {
        PiecewiseUtility::from_spec(spec)
    }
}

/// Outcome of matching a utility against indicator functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum IndicatorClass {
    Exact { reference: f64 },
    Approx { reference: f64, achieved_sup: f64 },
    Neither,
}

impl IndicatorClass {
    pub fn reference(&self) -> Option<f64> {
        match *self {
            IndicatorClass::Exact { reference } | IndicatorClass::Approx { reference, .. } => {
                Some(reference)
            }
            IndicatorClass::Neither => None,
        }
    }
}

fn indicator_function(interval: Interval, x0: f64) -> Result<Piecewise> {
    Piecewise::new(
        vec![interval.a, x0, interval.b],
        vec![0.0, 0.0, 1.0],
        vec![Piece::constant(0.0), Piece::constant(1.0)],
    )
}

/// Exact `sup_{x in [a,b]} |u(x) - 1{x > x0}|`, one-sided limits included.
pub fn sup_distance_to_indicator(u: &PiecewiseUtility, x0: f64) -> Result<f64> {
    let iv = u.interval();
    if !iv.contains_open(x0) {
        return Err(Error::OutOfDomain {
            x: x0,
            a: iv.a,
            b: iv.b,
        });
    }
    let target = indicator_function(iv, x0)?;
    let events = difference_events(u.function(), &target)?;
    Ok(max_event_by(&events, f64::abs).value.abs())
}

/// Breakpoints with their sup-distances, in ascending order.
fn scan(u: &PiecewiseUtility) -> Result<Vec<(f64, f64)>> {
    u.interior_breakpoints()
        .map(|x0| Ok((x0, sup_distance_to_indicator(u, x0)?)))
        .collect()
}

/// Reference point of `u` if it is exactly an indicator.
pub fn exact_reference(u: &PiecewiseUtility) -> Result<Option<f64>> {
    Ok(scan(u)?.into_iter().find(|&(_, d)| d == 0.0).map(|(x0, _)| x0))
}

pub fn classify_indicator(u: &PiecewiseUtility, eps: f64) -> Result<IndicatorClass> {
    check_tolerance(eps)?;
    let feasible: Vec<(f64, f64)> = scan(u)?.into_iter().filter(|&(_, d)| d <= eps).collect();
    match feasible.as_slice() {
        [] => Ok(IndicatorClass::Neither),
        [(reference, d)] if *d == 0.0 => Ok(IndicatorClass::Exact {
            reference: *reference,
        }),
        [(reference, d)] => Ok(IndicatorClass::Approx {
            reference: *reference,
            achieved_sup: *d,
        }),
        [(first, _), (second, _), ..] => Err(Error::InternalUniquenessViolation {
            first: *first,
            second: *second,
        }),
    }
}

/// Step utility `eps2/2` up to `x0` and `1 - eps2/2` after it.
pub fn witness_utility(x0: f64, eps2: f64, interval: Interval) -> Result<PiecewiseUtility> {
    if !interval.contains_open(x0) {
        return Err(Error::OutOfDomain {
            x: x0,
            a: interval.a,
            b: interval.b,
        });
    }
    check_tolerance(eps2)?;
    if eps2 == 0.0 {
        return Err(Error::InvalidTolerance(eps2));
    }
    let half = eps2 / 2.0;
    PiecewiseUtility::step(interval, &[x0], &[half, 1.0 - half])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ten() -> Interval {
        Interval::new(0.0, 10.0).unwrap()
    }

    fn soft_step() -> PiecewiseUtility {
        PiecewiseUtility::step(ten(), &[3.0], &[0.2, 0.8]).unwrap()
    }

    #[test]
    fn indicator_is_strict() {
        assert_eq!(indicator(3.0, 4.0), 1.0);
        assert_eq!(indicator(3.0, 3.0), 0.0);
        assert_eq!(indicator(3.0, 2.0), 0.0);
    }

    #[test]
    fn sup_distance_examples() {
        assert!((sup_distance_to_indicator(&soft_step(), 3.0).unwrap() - 0.2).abs() < 1e-15);
        let exact = PiecewiseUtility::indicator(ten(), 3.0).unwrap();
        assert_eq!(sup_distance_to_indicator(&exact, 3.0).unwrap(), 0.0);
        let half = PiecewiseUtility::constant(ten(), 0.5).unwrap();
        for x0 in [0.1, 3.0, 7.7, 9.99] {
            assert_eq!(sup_distance_to_indicator(&half, x0).unwrap(), 0.5);
        }
        assert!(matches!(
            sup_distance_to_indicator(&half, 0.0),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(sup_distance_to_indicator(&half, 10.0).is_err());
    }

    #[test]
    fn misplaced_reference_is_far() {
        let exact = PiecewiseUtility::indicator(ten(), 3.0).unwrap();
        assert_eq!(sup_distance_to_indicator(&exact, 3.5).unwrap(), 1.0);
        // the right limit at x0 counts even though it is not attained
        let ramp = PiecewiseUtility::linear(ten(), vec![0.0, 10.0], &[0.0, 1.0]).unwrap();
        assert_eq!(sup_distance_to_indicator(&ramp, 5.0).unwrap(), 0.5);
    }

    #[test]
    fn classify_examples() {
        let exact = PiecewiseUtility::indicator(ten(), 3.0).unwrap();
        assert_eq!(
            classify_indicator(&exact, 0.1).unwrap(),
            IndicatorClass::Exact { reference: 3.0 }
        );
        match classify_indicator(&soft_step(), 0.2).unwrap() {
            IndicatorClass::Approx {
                reference,
                achieved_sup,
            } => {
                assert_eq!(reference, 3.0);
                assert!((achieved_sup - 0.2).abs() < 1e-15);
            }
            other => panic!("expected Approx, got {other:?}"),
        }
        let half = PiecewiseUtility::constant(ten(), 0.5).unwrap();
        assert_eq!(classify_indicator(&half, 0.4).unwrap(), IndicatorClass::Neither);
        assert_eq!(classify_indicator(&soft_step(), 0.1).unwrap(), IndicatorClass::Neither);
    }

    #[test]
    fn classify_rejects_large_tolerance() {
        assert_eq!(
            classify_indicator(&soft_step(), 0.5),
            Err(Error::ToleranceTooLarge(0.5))
        );
        assert_eq!(
            classify_indicator(&soft_step(), -0.1),
            Err(Error::InvalidTolerance(-0.1))
        );
    }

    #[test]
    fn witness_examples() {
        let unit = Interval::new(0.0, 1.0).unwrap();
        let w = witness_utility(0.5, 0.2, unit).unwrap();
        assert_eq!(w.eval(0.5).unwrap(), 0.1);
        assert_eq!(w.eval(0.51).unwrap(), 0.9);
        assert_eq!(w.eval(0.0).unwrap(), 0.1);
        assert!((sup_distance_to_indicator(&w, 0.5).unwrap() - 0.1).abs() < 1e-15);
        match classify_indicator(&w, 0.2).unwrap() {
            IndicatorClass::Approx { reference, .. } => assert_eq!(reference, 0.5),
            other => panic!("expected Approx, got {other:?}"),
        }
        assert!(matches!(witness_utility(1.0, 0.2, unit), Err(Error::OutOfDomain { .. })));
        assert_eq!(witness_utility(0.5, 0.5, unit), Err(Error::ToleranceTooLarge(0.5)));
        assert_eq!(witness_utility(0.5, 0.0, unit), Err(Error::InvalidTolerance(0.0)));
    }

    #[test]
    fn linear_utility_is_never_close() {
        // a ramp through 1/2 cannot be eps-close for any eps < 1/2
        let ramp = PiecewiseUtility::linear(ten(), vec![0.0, 6.0, 7.0, 10.0], &[0.05, 0.05, 0.95, 0.95])
            .unwrap();
        assert_eq!(classify_indicator(&ramp, 0.45).unwrap(), IndicatorClass::Neither);
    }

    #[test]
    fn utility_json() {
        let u: PiecewiseUtility = serde_json::from_str(
            r#"{"interval":[0,10],"kind":"step","breakpoints":[3],"values":[-0.1,1.2]}"#,
        )
        .unwrap();
        assert_eq!(u.eval(3.0).unwrap(), -0.1);
        assert_eq!(u.eval(3.5).unwrap(), 1.2);
        assert!(serde_json::from_str::<PiecewiseUtility>(
            r#"{"interval":[0,10],"kind":"step","breakpoints":[3],"values":[0]}"#
        )
        .is_err());
    }
}
