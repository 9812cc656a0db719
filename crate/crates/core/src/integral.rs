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

//! The robust Riemann-Stieltjes integral of a utility against a CDF.
//!
//! Only (approximate) indicator utilities get a nonzero value: an exact
//! indicator at `x0` integrates to `1 - F(x0)`, an `eps`-close one to
//! `1 - F(x0) + eps * (b - a)`, and anything else to `0`.

use serde::Serialize;

use crate::distributions::PiecewiseCdf;
use crate::error::{Error, Result};
use crate::utility::{classify_indicator, exact_reference, IndicatorClass, PiecewiseUtility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RsiCase {
    Exact,
    Approx,
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsiResult {
    pub value: f64,
    pub case: RsiCase,
    pub reference: Option<f64>,
    pub tolerance_adjustment: f64,
}

impl RsiResult {
    pub(crate) fn fallback() -> Self {
        RsiResult {
            value: 0.0,
            case: RsiCase::Fallback,
            reference: None,
            tolerance_adjustment: 0.0,
        }
    }
}

pub fn rsi(u: &PiecewiseUtility, cdf: &PiecewiseCdf, eps: f64) -> Result<RsiResult> {
    if u.interval() != cdf.interval() {
        return Err(Error::IntervalMismatch);
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidTolerance(eps));
    }
    // Exact is tested first and places no bound on eps.
    if let Some(x0) = exact_reference(u)? {
        return Ok(RsiResult {
            value: 1.0 - cdf.eval(x0)?,
            case: RsiCase::Exact,
            reference: Some(x0),
            tolerance_adjustment: 0.0,
        });
    }
    if eps == 0.0 {
        return Ok(RsiResult::fallback());
    }
    match classify_indicator(u, eps)? {
        IndicatorClass::Approx { reference, .. } => {
            let adjustment = eps * u.interval().width();
            Ok(RsiResult {
                value: (1.0 - cdf.eval(reference)?) + adjustment,
                case: RsiCase::Approx,
                reference: Some(reference),
                tolerance_adjustment: adjustment,
            })
        }
        IndicatorClass::Exact { .. } | IndicatorClass::Neither => Ok(RsiResult::fallback()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Interval;

    fn ten() -> Interval {
        Interval::new(0.0, 10.0).unwrap()
    }

    #[test]
    fn approx_case_adds_adjustment() {
        let u = PiecewiseUtility::step(ten(), &[3.0], &[0.2, 0.8]).unwrap();
        let f = PiecewiseCdf::uniform(ten());
        let r = rsi(&u, &f, 0.2).unwrap();
        assert_eq!(r.case, RsiCase::Approx);
        assert_eq!(r.reference, Some(3.0));
        assert_eq!(r.tolerance_adjustment, 2.0);
        assert!((r.value - 2.7).abs() < 1e-12);
    }

    #[test]
    fn exact_case_ignores_eps() {
        let u = PiecewiseUtility::indicator(ten(), 6.5).unwrap();
        let f = PiecewiseCdf::uniform(ten());
        for eps in [0.0, 0.1, 0.49, 0.5, 3.0] {
            let r = rsi(&u, &f, eps).unwrap();
            assert_eq!(r.case, RsiCase::Exact);
            assert!((r.value - 0.35).abs() < 1e-15);
            assert_eq!(r.tolerance_adjustment, 0.0);
        }
    }

    #[test]
    fn fallback_cases() {
        let f = PiecewiseCdf::uniform(ten());
        let half = PiecewiseUtility::constant(ten(), 0.5).unwrap();
        let r = rsi(&half, &f, 0.1).unwrap();
        assert_eq!(r, RsiResult::fallback());
        let soft = PiecewiseUtility::step(ten(), &[3.0], &[0.2, 0.8]).unwrap();
        assert_eq!(rsi(&soft, &f, 0.0).unwrap().case, RsiCase::Fallback);
    }

    #[test]
    fn errors() {
        let f = PiecewiseCdf::uniform(ten());
        let soft = PiecewiseUtility::step(ten(), &[3.0], &[0.2, 0.8]).unwrap();
        assert_eq!(rsi(&soft, &f, 0.5), Err(Error::ToleranceTooLarge(0.5)));
        let other = PiecewiseCdf::uniform(Interval::new(0.0, 5.0).unwrap());
        assert_eq!(rsi(&soft, &other, 0.2), Err(Error::IntervalMismatch));
    }
}
