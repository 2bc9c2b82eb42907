//! Two-tailed paired t-test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::MetricsError;
use crate::scalar::Scalar;

/// Result of a paired t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedTTest<S> {
    pub statistic: S,
    pub p_value: S,
    pub degrees_of_freedom: usize,
}

/// Two-tailed paired t-test over per-topic metric values.
///
/// Degenerate inputs (fewer than 2 pairs, or differences with zero variance,
/// which includes identical inputs) are reported as errors rather than fake
/// p-values.
pub fn paired_ttest<S: Scalar>(a: &[S], b: &[S]) -> Result<PairedTTest<S>, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::UnpairedInputs {
            a: a.len(),
            b: b.len(),
        });
    }
    let n = a.len();
    if n < 2 {
        return Err(MetricsError::TooFewObservations(n));
    }

    let diffs: Vec<S> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
    let n_s = S::from_count(n);
    let mean = diffs.iter().copied().sum::<S>() / n_s;
    let ss: S = diffs.iter().map(|&d| (d - mean) * (d - mean)).sum();
    let variance = ss / S::from_count(n - 1);
    if variance <= S::zero() {
        return Err(MetricsError::ZeroVariance);
    }

    let t = mean / (variance / n_s).sqrt();
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid Student's t parameters for n >= 2");
    let p = 2.0 * dist.cdf(-t.to_f64_lossy().abs());
    Ok(PairedTTest {
        statistic: t,
        p_value: S::from_f64_lossy(p),
        degrees_of_freedom: n - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs_are_degenerate() {
        let a = [0.1f64, 0.2, 0.3];
        match paired_ttest(&a, &a).unwrap_err() {
            MetricsError::ZeroVariance => {}
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn constant_differences_are_degenerate() {
        let a = [0.1f64, 0.2, 0.3, 0.4];
        let b = [0.2f64, 0.3, 0.4, 0.5];
        assert!(matches!(
            paired_ttest(&a, &b).unwrap_err(),
            MetricsError::ZeroVariance
        ));
    }

    #[test]
    fn too_few_observations() {
        assert!(matches!(
            paired_ttest(&[0.1f64], &[0.2]).unwrap_err(),
            MetricsError::TooFewObservations(1)
        ));
    }

    #[test]
    fn consistent_large_differences_are_significant() {
        let a = [1.0f64, 1.001, 0.999, 1.0, 1.002, 0.998];
        let b = [0.0f64, 0.002, 0.001, 0.0015, 0.0005, 0.001];
        let result = paired_ttest(&a, &b).unwrap();
        assert!(result.p_value < 0.05, "p = {}", result.p_value);
        assert!(result.statistic > 0.0);
        assert_eq!(result.degrees_of_freedom, 5);
    }

    #[test]
    fn symmetric_p_value_for_swapped_inputs() {
        let a = [0.3f64, 0.5, 0.2, 0.6];
        let b = [0.1f64, 0.4, 0.25, 0.3];
        let ab = paired_ttest(&a, &b).unwrap();
        let ba = paired_ttest(&b, &a).unwrap();
        assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        assert!((ab.statistic + ba.statistic).abs() < 1e-12);
    }

    #[test]
    fn matches_reference_two_sided_value() {
        // scipy.stats.ttest_rel([1,2,3,4,5], [2,2,4,4,7]) gives
        // t = -1.6329931618554523, p = 0.17780949934396554.
        let a = [1.0f64, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0f64, 2.0, 4.0, 4.0, 7.0];
        let result = paired_ttest(&a, &b).unwrap();
        assert!((result.statistic - -1.6329931618554523).abs() < 1e-12);
        assert!((result.p_value - 0.17780949934396554).abs() < 1e-10);
    }
}
