//! Manipulation success rate: do the best-scored standing positions actually
//! work when the feasibility oracle is re-run there?

use serde::{Deserialize, Serialize};

use crate::affordance::DenseAffordanceMap;
use crate::error::{Error, Result};
use crate::geom::PointCloud;
use crate::labeler::{feasible, RobotSpec};
use crate::scenegen::Configuration;

/// Success rates of the highest-scored predicted base positions.
///
/// `top1` re-checks only the single best point per trial; `top5` averages
/// over the `top_k` best (named after the protocol's default of five).
/// `trials` counts the configurations aggregated into the rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsrReport {
    pub top1: f64,
    pub top5: f64,
    pub trials: usize,
}

/// Indices of `values` ranked by descending value; exact ties keep the lower
/// index first.
fn ranked_indices(values: &[f64]) -> Result<Vec<usize>> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::param(
            "pred",
            format!("scores must be finite, found {v}"),
        ));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .expect("finite scores compare")
            .then(a.cmp(&b))
    });
    Ok(order)
}

/// Scores one prediction against the feasibility oracle.
///
/// The `k` highest-valued floor points (ties by lower index) are taken as
/// proposed base positions, the trial oracle is re-run at each, and the
/// succeeding fraction is reported: `top1` with `k = 1`, `top5` with
/// `k = top_k`. When the map holds fewer than `k` points, all of them count.
pub fn msr(
    pred: &DenseAffordanceMap,
    floor: &PointCloud,
    robot: &RobotSpec,
    config: &Configuration,
    target_id: u32,
    top_k: usize,
) -> Result<MsrReport> {
    if pred.values.is_empty() {
        return Err(Error::param("pred", "cannot rank an empty affordance map"));
    }
    if pred.values.len() != floor.len() {
        return Err(Error::DimensionMismatch(format!(
            "prediction has {} values but the floor cloud has {} points",
            pred.values.len(),
            floor.len()
        )));
    }
    if top_k == 0 {
        return Err(Error::param("top_k", "must be at least 1"));
    }
    let order = ranked_indices(&pred.values)?;
    let success_rate = |k: usize| -> Result<f64> {
        let take = k.min(order.len());
        let mut wins = 0usize;
        for &idx in &order[..take] {
            let p = floor.points()[idx];
            if feasible(robot, nalgebra::Vector2::new(p.x, p.y), config, target_id)? {
                wins += 1;
            }
        }
        Ok(wins as f64 / take as f64)
    };
    Ok(MsrReport {
        top1: success_rate(1)?,
        top5: success_rate(top_k)?,
        trials: 1,
    })
}

/// Pools per-configuration reports into one, weighting by their trial
/// counts.
pub fn aggregate_msr(reports: &[MsrReport]) -> Result<MsrReport> {
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    if trials == 0 {
        return Err(Error::param("reports", "nothing to aggregate"));
    }
    let total = trials as f64;
    Ok(MsrReport {
        top1: reports.iter().map(|r| r.top1 * r.trials as f64).sum::<f64>() / total,
        top5: reports.iter().map(|r| r.top5 * r.trials as f64).sum::<f64>() / total,
        trials,
    })
}
