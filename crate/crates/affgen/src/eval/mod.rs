//! Evaluation protocol: agreement metrics, the zero-downweighted loss,
//! manipulation success rates, and training-free reference predictors.
//!
//! [`metrics`] compares a predicted dense map against a reference one;
//! [`weighted_mse`] is the training loss with zero-label terms randomly
//! down-weighted; [`msr`] re-runs the feasibility oracle at the best-scored
//! floor points; [`predict_random`] and [`predict_heuristic`] provide the
//! untrained baselines the success-rate ordering is checked against.

mod metrics;
mod msr;
mod predictors;

pub use metrics::{
    aggregate_metrics, metric_values, metrics, mse, weighted_mse, MetricValues, MetricsReport,
    DEFAULT_LAMBDA,
};
pub use msr::{aggregate_msr, msr, MsrReport};
pub use predictors::{heuristic_scores, predict_heuristic, predict_random};
