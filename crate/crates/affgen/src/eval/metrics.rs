//! Scalar agreement metrics between predicted and reference affordance maps,
//! and the zero-downweighted training loss.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::affordance::DenseAffordanceMap;
use crate::error::{Error, Result};
use crate::seed::{self, salt};

/// Default down-weight applied to zero-label terms in [`weighted_mse`].
pub const DEFAULT_LAMBDA: f64 = 0.7;

/// The four agreement metrics for one prediction/reference pair.
///
/// `pcc` is undefined (and excluded from aggregates) when either input has
/// zero variance; `sim` is undefined when either input is the zero vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub rmse: f64,
    pub log_mse: f64,
    pub pcc: Option<f64>,
    pub sim: Option<f64>,
}

fn check_pair(pred: &[f64], gt: &[f64]) -> Result<()> {
    if pred.len() != gt.len() {
        return Err(Error::DimensionMismatch(format!(
            "prediction has {} values, reference has {}",
            pred.len(),
            gt.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::param("pred", "maps must hold at least one value"));
    }
    for (name, values) in [("pred", pred), ("gt", gt)] {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::param(
                name,
                format!("values must be finite and non-negative, found {v}"),
            ));
        }
    }
    Ok(())
}

/// Metrics over raw value vectors; see [`metrics`] for the map-level form.
pub fn metric_values(pred: &[f64], gt: &[f64]) -> Result<MetricValues> {
    check_pair(pred, gt)?;
    let n = pred.len() as f64;

    let mut sq_sum = 0.0;
    let mut log_sq_sum = 0.0;
    for (&p, &g) in pred.iter().zip(gt) {
        sq_sum += (g - p) * (g - p);
        let dl = g.ln_1p() - p.ln_1p();
        log_sq_sum += dl * dl;
    }
    let rmse = (sq_sum / n).sqrt();
    let log_mse = log_sq_sum / n;

    let mean_p: f64 = pred.iter().sum::<f64>() / n;
    let mean_g: f64 = gt.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_p = 0.0;
    let mut var_g = 0.0;
    for (&p, &g) in pred.iter().zip(gt) {
        cov += (g - mean_g) * (p - mean_p);
        var_p += (p - mean_p) * (p - mean_p);
        var_g += (g - mean_g) * (g - mean_g);
    }
    let pcc = (var_p > 0.0 && var_g > 0.0).then(|| cov / (var_p * var_g).sqrt());

    let dot: f64 = pred.iter().zip(gt).map(|(&p, &g)| p * g).sum();
    let norm_p = pred.iter().map(|&p| p * p).sum::<f64>().sqrt();
    let norm_g = gt.iter().map(|&g| g * g).sum::<f64>().sqrt();
    let sim = (norm_p > 0.0 && norm_g > 0.0).then(|| dot / (norm_p * norm_g));

    Ok(MetricValues {
        rmse,
        log_mse,
        pcc,
        sim,
    })
}

/// RMSE, logMSE (`ln(1 + y)` squared error), Pearson correlation, and cosine
/// similarity of the two full value vectors.
///
/// Inputs must be equally long, non-empty, finite and non-negative.
pub fn metrics(pred: &DenseAffordanceMap, gt: &DenseAffordanceMap) -> Result<MetricValues> {
    metric_values(&pred.values, &gt.values)
}

/// Dataset-level metrics: the four scalars averaged over all episodes, plus
/// a per-scene breakdown.
///
/// Undefined `pcc`/`sim` entries are excluded from the averages; an average
/// is `None` only when every contributing episode left it undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub rmse: f64,
    pub log_mse: f64,
    pub pcc: Option<f64>,
    pub sim: Option<f64>,
    pub per_scene: BTreeMap<u64, MetricValues>,
    pub episodes: usize,
}

fn mean_values(items: &[MetricValues]) -> MetricValues {
    let n = items.len() as f64;
    let mean_opt = |select: fn(&MetricValues) -> Option<f64>| {
        let defined: Vec<f64> = items.iter().filter_map(select).collect();
        (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
    };
    MetricValues {
        rmse: items.iter().map(|m| m.rmse).sum::<f64>() / n,
        log_mse: items.iter().map(|m| m.log_mse).sum::<f64>() / n,
        pcc: mean_opt(|m| m.pcc),
        sim: mean_opt(|m| m.sim),
    }
}

/// Folds per-episode metric values, keyed by scene id, into a
/// [`MetricsReport`].
pub fn aggregate_metrics(items: &[(u64, MetricValues)]) -> Result<MetricsReport> {
    if items.is_empty() {
        return Err(Error::param("items", "nothing to aggregate"));
    }
    let all: Vec<MetricValues> = items.iter().map(|(_, m)| *m).collect();
    let overall = mean_values(&all);
    let mut by_scene: BTreeMap<u64, Vec<MetricValues>> = BTreeMap::new();
    for (scene, m) in items {
        by_scene.entry(*scene).or_default().push(*m);
    }
    let per_scene = by_scene
        .into_iter()
        .map(|(scene, ms)| (scene, mean_values(&ms)))
        .collect();
    Ok(MetricsReport {
        rmse: overall.rmse,
        log_mse: overall.log_mse,
        pcc: overall.pcc,
        sim: overall.sim,
        per_scene,
        episodes: items.len(),
    })
}

/// Plain mean squared error.
pub fn mse(pred: &[f64], gt: &[f64]) -> Result<f64> {
    check_pair(pred, gt)?;
    let n = pred.len() as f64;
    Ok(pred
        .iter()
        .zip(gt)
        .map(|(&p, &g)| (p - g) * (p - g))
        .sum::<f64>()
        / n)
}

/// Mean squared error with zero-label terms down-weighted.
///
/// Terms whose reference value is exactly 0 get weight `lambda` with
/// probability one half (a seeded coin per zero term, flipped in index
/// order) and weight 1 otherwise; nonzero-reference terms always weigh 1.
/// Requires `0 < lambda < 1`.
pub fn weighted_mse(pred: &[f64], gt: &[f64], lambda: f64, seed: u64) -> Result<f64> {
    check_pair(pred, gt)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::param(
            "lambda",
            "must lie strictly between 0 and 1",
        ));
    }
    let mut rng = seed::rng(seed, salt::WMSE, 0, 0);
    let mut sum = 0.0;
    for (&p, &g) in pred.iter().zip(gt) {
        let w = if g == 0.0 && rng.random::<bool>() {
            lambda
        } else {
            1.0
        };
        sum += w * (p - g) * (p - g);
    }
    Ok(sum / pred.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Independent scalar-loop implementations of all four metrics, written
    /// against the published formulas rather than sharing code with the
    /// production path.
    fn oracle(pred: &[f64], gt: &[f64]) -> (f64, f64, Option<f64>, Option<f64>) {
        let n = pred.len() as f64;
        let mut acc = 0.0;
        for i in 0..pred.len() {
            acc += (gt[i] - pred[i]).powi(2);
        }
        let rmse = (acc / n).sqrt();

        let mut acc = 0.0;
        for i in 0..pred.len() {
            acc += ((1.0 + gt[i]).ln() - (1.0 + pred[i]).ln()).powi(2);
        }
        let log_mse = acc / n;

        let my: f64 = gt.iter().sum::<f64>() / n;
        let mp: f64 = pred.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut dy = 0.0;
        let mut dp = 0.0;
        for i in 0..pred.len() {
            num += (gt[i] - my) * (pred[i] - mp);
            dy += (gt[i] - my).powi(2);
            dp += (pred[i] - mp).powi(2);
        }
        let pcc = if dy == 0.0 || dp == 0.0 {
            None
        } else {
            Some(num / (dy.sqrt() * dp.sqrt()))
        };

        let mut dot = 0.0;
        let mut ny = 0.0;
        let mut np = 0.0;
        for i in 0..pred.len() {
            dot += gt[i] * pred[i];
            ny += gt[i] * gt[i];
            np += pred[i] * pred[i];
        }
        let sim = if ny == 0.0 || np == 0.0 {
            None
        } else {
            Some(dot / (ny.sqrt() * np.sqrt()))
        };
        (rmse, log_mse, pcc, sim)
    }

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    fn assert_opt_close(a: Option<f64>, b: Option<f64>) {
        match (a, b) {
            (Some(a), Some(b)) => assert_close(a, b),
            (None, None) => {}
            _ => panic!("definedness mismatch: {a:?} vs {b:?}"),
        }
    }

    #[test]
    fn identical_nonconstant_maps_score_perfectly() {
        let v = vec![0.1, 0.9, 0.4, 0.0, 0.7];
        let got = metric_values(&v, &v).unwrap();
        assert_eq!(got.rmse, 0.0);
        assert_eq!(got.log_mse, 0.0);
        assert_close(got.pcc.unwrap(), 1.0);
        assert_close(got.sim.unwrap(), 1.0);
    }

    #[test]
    fn reference_triplet_matches_the_scalar_oracle() {
        let pred = [0.1, 0.4, 0.7];
        let gt = [0.2, 0.2, 0.8];
        let got = metric_values(&pred, &gt).unwrap();
        let (rmse, log_mse, pcc, sim) = oracle(&pred, &gt);
        assert_close(got.rmse, rmse);
        assert_close(got.log_mse, log_mse);
        assert_opt_close(got.pcc, pcc);
        assert_opt_close(got.sim, sim);
    }

    #[test]
    fn random_vectors_match_the_scalar_oracle() {
        let mut rng = seed::rng(70, salt::SCENE, 0, 0);
        for _ in 0..100 {
            let n = rng.random_range(1..200);
            let pred: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let gt: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let got = metric_values(&pred, &gt).unwrap();
            let (rmse, log_mse, pcc, sim) = oracle(&pred, &gt);
            assert_close(got.rmse, rmse);
            assert_close(got.log_mse, log_mse);
            assert_opt_close(got.pcc, pcc);
            assert_opt_close(got.sim, sim);
        }
    }

    #[test]
    fn pcc_is_invariant_under_positive_affine_maps() {
        let mut rng = seed::rng(71, salt::SCENE, 0, 0);
        let gt: Vec<f64> = (0..60).map(|_| rng.random_range(0.0..1.0)).collect();
        for _ in 0..100 {
            let a = rng.random_range(0.01..5.0);
            let b = rng.random_range(0.0..2.0);
            let pred: Vec<f64> = gt.iter().map(|&g| a * g + b).collect();
            let got = metric_values(&pred, &gt).unwrap();
            assert_close(got.pcc.unwrap(), 1.0);
            if a != 1.0 || b != 0.0 {
                assert!(got.rmse > 0.0);
            }
        }
    }

    #[test]
    fn rmse_and_pcc_are_symmetric() {
        let mut rng = seed::rng(72, salt::SCENE, 0, 0);
        for _ in 0..20 {
            let n = rng.random_range(2..50);
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let ab = metric_values(&a, &b).unwrap();
            let ba = metric_values(&b, &a).unwrap();
            assert_eq!(ab.rmse, ba.rmse);
            assert_eq!(ab.log_mse, ba.log_mse);
            assert_opt_close(ab.pcc, ba.pcc);
            assert_opt_close(ab.sim, ba.sim);
        }
    }

    #[test]
    fn degenerate_inputs_leave_pcc_and_sim_undefined() {
        let constant = vec![0.5; 4];
        let varied = vec![0.1, 0.2, 0.3, 0.4];
        let got = metric_values(&constant, &varied).unwrap();
        assert_eq!(got.pcc, None);
        assert!(got.sim.is_some(), "constant nonzero still has a direction");
        let zeros = vec![0.0; 4];
        let got = metric_values(&zeros, &varied).unwrap();
        assert_eq!(got.pcc, None);
        assert_eq!(got.sim, None);
        // Bounds hold whenever defined.
        let got = metric_values(&varied, &[0.4, 0.3, 0.2, 0.1]).unwrap();
        assert!(got.pcc.unwrap() >= -1.0 - 1e-12 && got.pcc.unwrap() <= 1.0 + 1e-12);
        assert!(got.sim.unwrap() >= 0.0 && got.sim.unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn invalid_metric_inputs_are_rejected() {
        assert!(matches!(
            metric_values(&[0.1, 0.2], &[0.1]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(metric_values(&[], &[]).is_err());
        assert!(metric_values(&[-0.1], &[0.1]).is_err());
        assert!(metric_values(&[0.1], &[f64::NAN]).is_err());
    }

    #[test]
    fn aggregation_averages_overall_and_per_scene() {
        let m = |rmse: f64, pcc: Option<f64>| MetricValues {
            rmse,
            log_mse: rmse / 2.0,
            pcc,
            sim: pcc,
        };
        let items = vec![
            (1u64, m(0.2, Some(0.8))),
            (1, m(0.4, None)),
            (2, m(0.6, Some(0.4))),
        ];
        let report = aggregate_metrics(&items).unwrap();
        assert_eq!(report.episodes, 3);
        assert!((report.rmse - 0.4).abs() < 1e-15);
        assert!((report.log_mse - 0.2).abs() < 1e-15);
        // Undefined entries are excluded, not counted as zero.
        assert!((report.pcc.unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(report.per_scene.len(), 2);
        assert!((report.per_scene[&1].rmse - 0.3).abs() < 1e-15);
        assert!((report.per_scene[&1].pcc.unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(report.per_scene[&2], m(0.6, Some(0.4)));
        // All undefined stays undefined.
        let report = aggregate_metrics(&[(1, m(0.1, None))]).unwrap();
        assert_eq!(report.pcc, None);
        assert!(aggregate_metrics(&[]).is_err());
    }

    #[test]
    fn weighted_mse_without_zero_labels_equals_plain_mse() {
        let mut rng = seed::rng(73, salt::SCENE, 0, 0);
        for seed in 0..10 {
            let n = rng.random_range(1..100);
            let gt: Vec<f64> = (0..n).map(|_| rng.random_range(0.001..1.0)).collect();
            let pred: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let w = weighted_mse(&pred, &gt, 0.7, seed).unwrap();
            assert_eq!(w, mse(&pred, &gt).unwrap());
        }
    }

    #[test]
    fn weighted_mse_of_matching_zero_maps_is_zero() {
        let zeros = vec![0.0; 32];
        for (lambda, seed) in [(0.1, 0), (0.7, 9), (0.99, 1234)] {
            assert_eq!(weighted_mse(&zeros, &zeros, lambda, seed).unwrap(), 0.0);
        }
    }

    #[test]
    fn weighted_mse_matches_a_hand_unrolled_mask() {
        let gt: [f64; 6] = [0.0, 0.5, 0.0, 1.0, 0.0, 0.0];
        let pred: [f64; 6] = [0.3, 0.4, 0.2, 0.9, 0.0, 0.6];
        let lambda = 0.7;
        let seed = 42;
        // Re-draw the per-zero-label coins exactly as the implementation
        // does: one bool per gt zero, in index order.
        let mut rng = seed::rng(seed, salt::WMSE, 0, 0);
        let mut expected = 0.0;
        for i in 0..gt.len() {
            let w = if gt[i] == 0.0 && rng.random::<bool>() {
                lambda
            } else {
                1.0
            };
            expected += w * (pred[i] - gt[i]).powi(2);
        }
        expected /= gt.len() as f64;
        assert_eq!(weighted_mse(&pred, &gt, lambda, seed).unwrap(), expected);
        // Coins actually vary across seeds on this instance.
        let all: Vec<f64> = (0..20)
            .map(|s| weighted_mse(&pred, &gt, lambda, s).unwrap())
            .collect();
        assert!(all.iter().any(|v| v != &all[0]));
    }

    #[test]
    fn weighted_mse_never_exceeds_plain_mse() {
        let mut rng = seed::rng(74, salt::SCENE, 0, 0);
        for seed in 0..50 {
            let n = rng.random_range(1..80);
            let gt: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.random::<bool>() {
                        0.0
                    } else {
                        rng.random_range(0.0..1.0)
                    }
                })
                .collect();
            let pred: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let lambda = rng.random_range(0.01..0.99);
            let w = weighted_mse(&pred, &gt, lambda, seed).unwrap();
            assert!(w <= mse(&pred, &gt).unwrap() + 1e-15);
        }
    }

    #[test]
    fn weighted_mse_validates_lambda_and_lengths() {
        let v = [0.1, 0.0];
        for lambda in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            assert!(weighted_mse(&v, &v, lambda, 0).is_err(), "{lambda}");
        }
        assert!(weighted_mse(&[0.1], &v, 0.7, 0).is_err());
        assert_eq!(
            weighted_mse(&v, &v, 0.7, 5).unwrap(),
            weighted_mse(&v, &v, 0.7, 5).unwrap()
        );
    }
}
