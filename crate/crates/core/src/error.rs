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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: lower bound must be strictly below upper bound")]
    InvalidInterval { a: f64, b: f64 },

    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("sample {value} lies outside the half-open support ({a}, {b}]")]
    SampleOutOfRange { value: f64, a: f64, b: f64 },

    #[error("sample list is empty")]
    EmptySample,

    #[error("malformed piecewise function: {0}")]
    MalformedPiecewise(String),

    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),

    #[error("operands live on different intervals")]
    IntervalMismatch,

    #[error("tolerance {0} is outside its admissible range")]
    InvalidTolerance(f64),

    #[error("tolerance {0} must be strictly below 1/2")]
    ToleranceTooLarge(f64),

    #[error("tolerances must satisfy 0 < eps2 < eps1, got eps1 = {eps1}, eps2 = {eps2}")]
    BadToleranceOrder { eps1: f64, eps2: f64 },

    #[error("more than one feasible reference point ({first} and {second}); sup-distance is inconsistent")]
    InternalUniquenessViolation { first: f64, second: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),

    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("candidate set is empty")]
    CandidateSetEmpty,

    #[error("candidate set of size {size} exceeds the cap of {cap}")]
    CandidateCapExceeded { size: usize, cap: usize },

    #[error("input error: {0}")]
    Input(String),
}
