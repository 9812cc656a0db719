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

//! Upper-orthant survival probabilities `P(X >> x0)`.

use super::{all_gt, mixed_vector_mask, same_dim, DiscreteJointDist, JointCdf, RVec};
use crate::error::{Error, Result};

/// Inclusion-exclusion over all non-empty index subsets, in ascending mask
/// order, without clamping.
pub fn survival_prob_unclamped(
    cdf: &dyn JointCdf,
    x0: &RVec,
    upper: &RVec,
    dim_cap: usize,
) -> Result<f64> {
    same_dim(x0, upper)?;
    let n = x0.dim();
    if n != cdf.dim() {
        return Err(Error::DimensionMismatch {
            expected: cdf.dim(),
            got: n,
        });
    }
    if n > dim_cap || n >= u64::BITS as usize {
        return Err(Error::DimensionCapExceeded { dim: n, cap: dim_cap });
    }
    let mut sum = 0.0;
    for mask in 1u64..(1u64 << n) {
        let value = cdf.cdf(&mixed_vector_mask(x0, upper, mask))?;
        if mask.count_ones() % 2 == 1 {
            sum += value;
        } else {
            sum -= value;
        }
    }
    Ok(1.0 - sum)
}

/// `1 - sum_{S != {}} (-1)^(|S|+1) F(mixed(x0, upper, S))`, clamped to `[0, 1]`.
pub fn survival_prob(cdf: &dyn JointCdf, x0: &RVec, upper: &RVec, dim_cap: usize) -> Result<f64> {
    Ok(survival_prob_unclamped(cdf, x0, upper, dim_cap)?.clamp(0.0, 1.0))
}

/// Total weight of atoms strictly above `x0` in every coordinate.
pub fn survival_direct(dist: &DiscreteJointDist, x0: &RVec) -> Result<f64> {
    let mut total = 0.0;
    for (p, w) in dist.points().iter().zip(dist.weights()) {
        if all_gt(p, x0)? {
            total += w;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::super::tests::four_atoms;
    use super::super::{Rectangle, DEFAULT_DIM_CAP};
    use super::*;

    fn v(x: &[f64]) -> RVec {
        RVec::new(x.to_vec())
    }

    #[test]
    fn four_atom_example() {
        let d = four_atoms();
        let b = v(&[4.0, 4.0]);
        assert_eq!(survival_prob(&d, &v(&[2.0, 2.0]), &b, DEFAULT_DIM_CAP).unwrap(), 0.25);
        assert_eq!(survival_direct(&d, &v(&[2.0, 2.0])).unwrap(), 0.25);
    }

    #[test]
    fn extreme_references() {
        let d = four_atoms();
        let b = v(&[4.0, 4.0]);
        assert_eq!(survival_prob(&d, &v(&[0.5, 0.5]), &b, DEFAULT_DIM_CAP).unwrap(), 1.0);
        assert_eq!(survival_prob(&d, &v(&[3.0, 0.5]), &b, DEFAULT_DIM_CAP).unwrap(), 0.0);
        assert_eq!(survival_direct(&d, &v(&[0.0, 0.0])).unwrap(), 1.0);
        let rect = Rectangle::unit(2);
        let single = DiscreteJointDist::uniform(rect, vec![v(&[0.5, 0.5])]).unwrap();
        assert_eq!(survival_direct(&single, &v(&[0.49, 0.49])).unwrap(), 1.0);
    }

    #[test]
    fn dimension_cap() {
        let rect = Rectangle::unit(3);
        let d = DiscreteJointDist::uniform(rect, vec![v(&[0.5, 0.5, 0.5])]).unwrap();
        let x0 = v(&[0.1, 0.1, 0.1]);
        let b = v(&[1.0, 1.0, 1.0]);
        assert_eq!(
            survival_prob(&d, &x0, &b, 2),
            Err(Error::DimensionCapExceeded { dim: 3, cap: 2 })
        );
        assert_eq!(survival_prob(&d, &x0, &b, 3).unwrap(), 1.0);
        assert!(survival_prob(&d, &v(&[0.1, 0.1]), &b, 3).is_err());
    }
}
