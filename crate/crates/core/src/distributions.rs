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

//! One-dimensional CDFs on a bounded interval.
//!
//! Every [`PiecewiseCdf`] satisfies `F(a) = 0` and `F(b) = 1` exactly. Inputs
//! that miss these by at most [`BOUNDARY_TOLERANCE`] are snapped; anything
//! further off is rejected.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::{Piece, Piecewise};

pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// A closed interval `[a, b]` with `a < b`. Serialized as `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn contains_open(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.a, i.b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Step,
    Linear,
}

/// JSON wire form shared by CDFs and utilities.
///
/// * `step`: `breakpoints` are jump locations. For a CDF, `values[i]` is the
///   level from `breakpoints[i]` on (right-continuous), and the level below
///   the first jump is 0. For a utility, `values` has one more entry than
///   `breakpoints` and lists the plateaus from left to right.
/// * `linear`: `breakpoints` run from `a` to `b` and `values` are the
///   function values there, joined by straight lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseSpec {
    pub interval: Interval,
    pub kind: SegmentKind,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

/// A CDF on `[a, b]` built from step or linear segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseSpec", into = "PiecewiseSpec")]
pub struct PiecewiseCdf {
    spec: PiecewiseSpec,
    function: Piecewise,
}

fn snap(v: f64, target: f64, what: &str) -> Result<f64> {
    if (v - target).abs() <= BOUNDARY_TOLERANCE {
        Ok(target)
    } else {
        Err(Error::BoundaryCondition(format!(
            "{what} is {v}, expected {target}"
        )))
    }
}

fn check_levels(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
        return Err(Error::MalformedPiecewise(
            "CDF values must lie in [0, 1]".into(),
        ));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::MalformedPiecewise(
            "CDF values must be nondecreasing".into(),
        ));
    }
    Ok(())
}

impl PiecewiseCdf {
    /// Right-continuous step CDF jumping to `values[i]` at `jumps[i]`.
    pub fn step(interval: Interval, jumps: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if jumps.is_empty() || jumps.len() != values.len() {
            return Err(Error::MalformedPiecewise(
                "step CDF needs one value per jump and at least one jump".into(),
            ));
        }
        if jumps[0] <= interval.a || jumps[jumps.len() - 1] > interval.b {
            return Err(Error::MalformedPiecewise(format!(
                "step CDF jumps must lie in ({}, {}]",
                interval.a, interval.b
            )));
        }
        let last = values.len() - 1;
        values[last] = snap(values[last], 1.0, "F(b)")?;
        check_levels(&values)?;

        let mut knots = vec![interval.a];
        let mut at = vec![0.0];
        let mut pieces = Vec::with_capacity(jumps.len() + 1);
        let mut level = 0.0;
        for (&t, &v) in jumps.iter().zip(&values) {
            pieces.push(Piece::constant(level));
            knots.push(t);
            at.push(v);
            level = v;
        }
        if jumps[last] < interval.b {
            pieces.push(Piece::constant(level));
            knots.push(interval.b);
            at.push(level);
        }
        let function = Piecewise::new(knots, at, pieces)?;
        Ok(PiecewiseCdf {
            spec: PiecewiseSpec {
                interval,
                kind: SegmentKind::Step,
                breakpoints: jumps,
                values,
            },
            function,
        })
    }

    /// Continuous CDF interpolating `values` at `knots`, which must start at
    /// `a` and end at `b`.
    pub fn linear(interval: Interval, knots: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::MalformedPiecewise(
                "linear CDF needs matching knots and values, at least two".into(),
            ));
        }
        if knots[0] != interval.a || knots[knots.len() - 1] != interval.b {
            return Err(Error::MalformedPiecewise(format!(
                "linear CDF knots must start at {} and end at {}",
                interval.a, interval.b
            )));
        }
        let last = values.len() - 1;
        values[0] = snap(values[0], 0.0, "F(a)")?;
        values[last] = snap(values[last], 1.0, "F(b)")?;
        check_levels(&values)?;
        let pieces = values
            .windows(2)
            .map(|w| Piece {
                start: w[0],
                end: w[1],
            })
            .collect();
        let function = Piecewise::new(knots.clone(), values.clone(), pieces)?;
        Ok(PiecewiseCdf {
            spec: PiecewiseSpec {
                interval,
                kind: SegmentKind::Linear,
                breakpoints: knots,
                values,
            },
            function,
        })
    }

    /// `F(x) = (x - a) / (b - a)`.
    pub fn uniform(interval: Interval) -> Self {
        Self::linear(interval, vec![interval.a, interval.b], vec![0.0, 1.0])
            .expect("uniform CDF is always valid")
    }

    /// Linear interpolant of a continuous CDF `cdf` through `segments + 1`
    /// equally spaced knots.
    pub fn interpolate(
        interval: Interval,
        segments: usize,
        cdf: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if segments == 0 {
            return Err(Error::MalformedPiecewise("need at least one segment".into()));
        }
        let knots: Vec<f64> = (0..=segments)
            .map(|i| {
                if i == segments {
                    interval.b
                } else {
                    interval.a + interval.width() * (i as f64 / segments as f64)
                }
            })
            .collect();
        let values = knots.iter().map(|&x| cdf(x)).collect();
        Self::linear(interval, knots, values)
    }

    /// Empirical CDF `F(x) = #{samples <= x} / N`.
    pub fn from_samples(samples: &[f64], interval: Interval) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&bad) = samples
            .iter()
            .find(|&&s| !(s > interval.a && s <= interval.b))
        {
            return Err(Error::SampleOutOfRange {
                value: bad,
                a: interval.a,
                b: interval.b,
            });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut jumps = Vec::new();
        let mut values = Vec::new();
        for (i, &s) in sorted.iter().enumerate() {
            if i + 1 < sorted.len() && sorted[i + 1] == s {
                continue;
            }
            jumps.push(s);
            values.push((i + 1) as f64 / n);
        }
        Self::step(interval, jumps, values)
    }

    pub fn from_spec(spec: PiecewiseSpec) -> Result<Self> {
        match spec.kind {
            SegmentKind::Step => Self::step(spec.interval, spec.breakpoints, spec.values),
            SegmentKind::Linear => Self::linear(spec.interval, spec.breakpoints, spec.values),
        }
    }

    pub fn spec(&self) -> &PiecewiseSpec {
        &self.spec
    }

    pub fn interval(&self) -> Interval {
        self.spec.interval
    }

    pub fn kind(&self) -> SegmentKind {
        self.spec.kind
    }

    pub fn function(&self) -> &Piecewise {
        &self.function
    }

    /// Breakpoints strictly inside `(a, b)`.
    pub fn interior_breakpoints(&self) -> Vec<f64> {
        let iv = self.interval();
        self.function
            .knots()
            .iter()
            .copied()
            .filter(|&k| iv.contains_open(k))
            .collect()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.function.eval(x)
    }
}

impl TryFrom<PiecewiseSpec> for PiecewiseCdf {
    type Error = Error;

    fn try_from(spec: PiecewiseSpec) -> Result<Self> {
        PiecewiseCdf::from_spec(spec)
    }
}

impl From<PiecewiseCdf> for PiecewiseSpec {
    fn from(cdf: PiecewiseCdf) -> Self {
        cdf.spec
    }
}

pub fn cdf_eval(cdf: &PiecewiseCdf, x: f64) -> Result<f64> {
    cdf.eval(x)
}

pub fn uniform_cdf(interval: Interval) -> PiecewiseCdf {
    PiecewiseCdf::uniform(interval)
}

/// Reads one real per line, with an optional `value` header.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Input(e.to_string()))?;
        let Some(field) = record.get(0) else { continue };
        if field.is_empty() {
            continue;
        }
        if line == 0 && field.eq_ignore_ascii_case("value") {
            continue;
        }
        let v: f64 = field
            .parse()
            .map_err(|_| Error::Input(format!("line {}: not a number: {field:?}", line + 1)))?;
        out.push(v);
    }
    Ok(out)
}

pub fn load_samples_csv(path: &Path) -> Result<Vec<f64>> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    read_samples_csv(file)
}

pub fn load_cdf_json(path: &Path) -> Result<PiecewiseCdf> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn ten() -> Interval {
        Interval::new(0.0, 10.0).unwrap()
    }

    #[test]
    fn interval_rejects_empty() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn uniform_values() {
        let f = uniform_cdf(ten());
        assert!((cdf_eval(&f, 6.5).unwrap() - 0.65).abs() < 1e-15);
        assert_eq!(cdf_eval(&f, 3.0).unwrap(), 0.3);
        let g = uniform_cdf(unit());
        assert_eq!(g.eval(0.0).unwrap(), 0.0);
        assert_eq!(g.eval(1.0).unwrap(), 1.0);
    }

    #[test]
    fn out_of_domain() {
        let f = uniform_cdf(ten());
        assert!(matches!(f.eval(-0.1), Err(Error::OutOfDomain { .. })));
        assert!(matches!(f.eval(10.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn empirical_counts() {
        let f = PiecewiseCdf::from_samples(&[2.0, 4.0, 4.0, 8.0], ten()).unwrap();
        assert_eq!(f.eval(4.0).unwrap(), 0.75);
        assert_eq!(f.eval(3.999).unwrap(), 0.25);
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert_eq!(f.eval(10.0).unwrap(), 1.0);
    }

    #[test]
    fn single_atom_is_right_continuous() {
        let f = PiecewiseCdf::from_samples(&[5.0], ten()).unwrap();
        assert_eq!(f.eval(4.999).unwrap(), 0.0);
        assert_eq!(f.eval(5.0).unwrap(), 1.0);
    }

    #[test]
    fn atom_at_upper_end_is_allowed() {
        let f = PiecewiseCdf::from_samples(&[10.0], ten()).unwrap();
        assert_eq!(f.eval(9.0).unwrap(), 0.0);
        assert_eq!(f.eval(10.0).unwrap(), 1.0);
    }

    #[test]
    fn sample_errors() {
        assert_eq!(PiecewiseCdf::from_samples(&[], ten()), Err(Error::EmptySample));
        assert!(matches!(
            PiecewiseCdf::from_samples(&[0.0, 3.0], ten()),
            Err(Error::SampleOutOfRange { .. })
        ));
        assert!(matches!(
            PiecewiseCdf::from_samples(&[3.0, 10.5], ten()),
            Err(Error::SampleOutOfRange { .. })
        ));
    }

    #[test]
    fn boundary_snapping() {
        let f = PiecewiseCdf::linear(unit(), vec![0.0, 0.5, 1.0], vec![1e-13, 0.5, 1.0 - 1e-13])
            .unwrap();
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert_eq!(f.eval(1.0).unwrap(), 1.0);
        assert!(matches!(
            PiecewiseCdf::linear(unit(), vec![0.0, 1.0], vec![0.0, 0.9]),
            Err(Error::BoundaryCondition(_))
        ));
        assert!(PiecewiseCdf::linear(unit(), vec![0.0, 0.5, 1.0], vec![0.0, 0.7, 0.6]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"interval":[0,10],"kind":"step","breakpoints":[2,5],"values":[0.4,1]}"#;
        let f: PiecewiseCdf = serde_json::from_str(text).unwrap();
        assert_eq!(f.eval(3.0).unwrap(), 0.4);
        let back: PiecewiseCdf = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"interval":[0,10],"kind":"linear","breakpoints":[0,10],"values":[0,0.5]}"#;
        assert!(serde_json::from_str::<PiecewiseCdf>(bad).is_err());
    }

    #[test]
    fn csv_ingest() {
        let v = read_samples_csv("value\n1.5\n 2 \n\n3e0\n".as_bytes()).unwrap();
        assert_eq!(v, vec![1.5, 2.0, 3.0]);
        let v = read_samples_csv("4\n5\n".as_bytes()).unwrap();
        assert_eq!(v, vec![4.0, 5.0]);
        assert!(read_samples_csv("1\nabc\n".as_bytes()).is_err());
    }

    #[test]
    fn interpolated_quadratic_is_exact_at_knots() {
        let g = PiecewiseCdf::interpolate(ten(), 20, |x| (x / 10.0).powi(2)).unwrap();
        assert_eq!(g.eval(5.0).unwrap(), 0.25);
        assert!(g.function().is_nondecreasing());
    }
}
