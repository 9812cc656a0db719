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

//! Piecewise linear functions with jumps on a closed interval.
//!
//! A [`Piecewise`] is described by knots `a = k_0 < k_1 < ... < k_m = b`,
//! the value taken *at* every knot, and one linear piece per open gap
//! `(k_i, k_{i+1})` given by its right limit at `k_i` and its left limit at
//! `k_{i+1}`. Both right-continuous CDFs and left-continuous utilities fit
//! this shape; they only differ in which one-sided limit the knot value
//! repeats.
//!
//! Because the difference of two such functions is linear on every gap of the
//! merged knot set, its supremum is the largest of the knot values and the
//! one-sided limits at merged knots. [`difference_events`] enumerates exactly
//! those candidates.

use crate::distributions::Interval;
use crate::error::{Error, Result};

/// A linear piece on an open gap, stored by its one-sided end limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
}

impl Piece {
    pub fn constant(v: f64) -> Self {
        Piece { start: v, end: v }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    knots: Vec<f64>,
    values: Vec<f64>,
    pieces: Vec<Piece>,
}

/// Which side of a knot an [`Event`] was taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    At,
    Right,
}

/// A candidate extremum of a difference `f - g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub x: f64,
    pub side: Side,
    pub value: f64,
}

impl Piecewise {
    pub fn new(knots: Vec<f64>, values: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::MalformedPiecewise("need at least two knots".into()));
        }
        if values.len() != knots.len() || pieces.len() + 1 != knots.len() {
            return Err(Error::MalformedPiecewise(format!(
                "{} knots need {} values and {} pieces, got {} and {}",
                knots.len(),
                knots.len(),
                knots.len() - 1,
                values.len(),
                pieces.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::MalformedPiecewise("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedPiecewise(
                "knots must be strictly increasing".into(),
            ));
        }
        let all_finite = values.iter().all(|v| v.is_finite())
            && pieces.iter().all(|p| p.start.is_finite() && p.end.is_finite());
        if !all_finite {
            return Err(Error::MalformedPiecewise("values must be finite".into()));
        }
        Ok(Piecewise {
            knots,
            values,
            pieces,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn lower(&self) -> f64 {
        self.knots[0]
    }

    pub fn upper(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    pub fn interval(&self) -> Interval {
        Interval {
            a: self.lower(),
            b: self.upper(),
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if x >= self.lower() && x <= self.upper() {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                a: self.lower(),
                b: self.upper(),
            })
        }
    }

    // Either Ok(knot index) or Err(gap index) for x inside the domain.
    fn locate(&self, x: f64) -> std::result::Result<usize, usize> {
        let j = self.knots.partition_point(|&k| k <= x);
        if j > 0 && self.knots[j - 1] == x {
            Ok(j - 1)
        } else {
            Err(j - 1)
        }
    }

    fn interpolate(&self, gap: usize, x: f64) -> f64 {
        let (k0, k1) = (self.knots[gap], self.knots[gap + 1]);
        let p = self.pieces[gap];
        if p.start == p.end {
            return p.start;
        }
        p.start + (p.end - p.start) * ((x - k0) / (k1 - k0))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self.locate(x) {
            Ok(i) => self.values[i],
            Err(gap) => self.interpolate(gap, x),
        })
    }

    /// Limit from the left; at the lower end this is the value there.
    pub fn left_limit(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self.locate(x) {
            Ok(0) => self.values[0],
            Ok(i) => self.pieces[i - 1].end,
            Err(gap) => self.interpolate(gap, x),
        })
    }

    /// Limit from the right; at the upper end this is the value there.
    pub fn right_limit(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self.locate(x) {
            Ok(i) if i + 1 == self.knots.len() => self.values[i],
            Ok(i) => self.pieces[i].start,
            Err(gap) => self.interpolate(gap, x),
        })
    }

    /// True when every knot value and every piece stays monotone.
    pub fn is_nondecreasing(&self) -> bool {
        let mut prev = self.values[0];
        for (i, p) in self.pieces.iter().enumerate() {
            if p.start < prev || p.end < p.start || self.values[i + 1] < p.end {
                return false;
            }
            prev = self.values[i + 1];
        }
        true
    }
}

/// Merged, sorted knot set of two functions on the same interval.
pub fn merged_knots(f: &Piecewise, g: &Piecewise) -> Vec<f64> {
    let mut all: Vec<f64> = f.knots.iter().chain(g.knots.iter()).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

/// Every candidate extremum of `f - g`: values at merged knots and the
/// one-sided limits there.
pub fn difference_events(f: &Piecewise, g: &Piecewise) -> Result<Vec<Event>> {
    if f.lower() != g.lower() || f.upper() != g.upper() {
        return Err(Error::IntervalMismatch);
    }
    let knots = merged_knots(f, g);
    let last = knots.len() - 1;
    let mut events = Vec::with_capacity(3 * knots.len());
    for (i, &x) in knots.iter().enumerate() {
        if i > 0 {
            events.push(Event {
                x,
                side: Side::Left,
                value: f.left_limit(x)? - g.left_limit(x)?,
            });
        }
        events.push(Event {
            x,
            side: Side::At,
            value: f.eval(x)? - g.eval(x)?,
        });
        if i < last {
            events.push(Event {
                x,
                side: Side::Right,
                value: f.right_limit(x)? - g.right_limit(x)?,
            });
        }
    }
    Ok(events)
}

/// Largest event by `key`; ties keep the earliest event, preferring attained
/// values over limits at the same knot.
pub fn max_event_by(events: &[Event], key: impl Fn(f64) -> f64) -> Event {
    let mut best = events[0];
    let mut best_key = key(best.value);
    for e in &events[1..] {
        let k = key(e.value);
        let better = k > best_key || (k == best_key && e.x == best.x && e.side == Side::At);
        if better {
            best = *e;
            best_key = k;
        }
    }
    best
}
