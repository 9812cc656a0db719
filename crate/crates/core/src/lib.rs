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

//! Flexible (tolerance-based) first-order stochastic dominance.
//!
//! The crate classifies utilities against indicator functions, evaluates the
//! robust Riemann-Stieltjes integral, decides tolerance dominance in one and
//! n dimensions, and ships seeded randomized suites that check the
//! dominance/expected-utility equivalence numerically.
//!
//! ```
//! use ffsd::distributions::{Interval, PiecewiseCdf};
//! use ffsd::dominance::check_ffsd;
//!
//! let iv = Interval::new(0.0, 10.0).unwrap();
//! let f = PiecewiseCdf::uniform(iv);
//! let g = PiecewiseCdf::interpolate(iv, 40, |x| (x / 10.0).powi(2)).unwrap();
//! let verdict = check_ffsd(&f, &g, 0.25).unwrap();
//! assert!(verdict.holds);
//! assert_eq!(verdict.witness_x, 5.0);
//! ```

pub mod cli;
pub mod distributions;
pub mod dominance;
pub mod error;
pub mod integral;
pub mod multid;
pub mod oracle;
pub mod piecewise;
pub mod sampling;
pub mod utility;
pub mod verify;

pub use error::{Error, Result};
