//! Sampling statistics for random height functions.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::height::{height_critical_points, random_hermitian};
use super::hermitian::{affine_span_dimension, random_vector, veronese_point};
use crate::error::KernelError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub k: usize,
    pub seed: u64,
    pub samples: usize,
    /// Runs with three critical points of indices `0, k, 2k`.
    pub perfect_runs: usize,
    pub degenerate_runs: usize,
    /// Number of runs per critical-point count.
    pub critical_point_counts: BTreeMap<usize, usize>,
    /// Number of critical points per Morse index.
    pub index_histogram: BTreeMap<usize, usize>,
    pub span_dimension: usize,
    pub span_samples: usize,
    pub expected_span: usize,
}

impl TightnessReport {
    pub fn all_perfect(&self) -> bool {
        self.perfect_runs == self.samples && self.span_dimension == self.expected_span
    }
}

/// Samples `samples` random height functions on the standard embedding of
/// `KP²` and the affine span of `4(3k + 4)` random points. Deterministic in
/// `seed`.
pub fn tightness_survey(k: usize, samples: usize, seed: u64) -> Result<TightnessReport, KernelError> {
    if !matches!(k, 1 | 2 | 4) {
        return Err(KernelError::InvalidK(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights: Vec<_> = (0..samples).map(|_| random_hermitian(k, &mut rng)).collect();
    let results: Vec<_> = heights.par_iter().map(height_critical_points).collect();
    let mut report = TightnessReport {
        k,
        seed,
        samples,
        perfect_runs: 0,
        degenerate_runs: 0,
        critical_point_counts: BTreeMap::new(),
        index_histogram: BTreeMap::new(),
        span_dimension: 0,
        span_samples: 4 * (3 * k + 4),
        expected_span: 3 * k + 2,
    };
    for r in results {
        match r {
            Ok(cps) => {
                *report.critical_point_counts.entry(cps.len()).or_default() += 1;
                let mut idx: Vec<usize> = cps.iter().map(|c| c.index).collect();
                for i in &idx {
                    *report.index_histogram.entry(*i).or_default() += 1;
                }
                idx.sort();
                if idx == [0, k, 2 * k] {
                    report.perfect_runs += 1;
                }
            }
            Err(KernelError::Degenerate(_)) => report.degenerate_runs += 1,
            Err(e) => return Err(e),
        }
    }
    let points: Vec<_> =
        (0..report.span_samples).map(|_| veronese_point(&random_vector(k, &mut rng), 0)).collect::<Result<_, _>>()?;
    report.span_dimension = affine_span_dimension(k, &points)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_repeat() {
        let a = tightness_survey(2, 10, 7).unwrap();
        assert_eq!(a, tightness_survey(2, 10, 7).unwrap());
        assert!(a.all_perfect());
        assert_eq!(a.span_dimension, 8);
    }

    #[test]
    fn octonions_rejected() {
        assert!(tightness_survey(8, 1, 0).is_err());
    }
}
