//! Experiment harness: configuration, solar-altitude sweeps, error metrics
//! and CSV export. Experiments run in `f64`.

mod config;
mod export;
mod metrics;
pub mod selftest;
mod sweep;

pub use config::{DistanceSetting, ExperimentConfig, FactorSetting, Mode};
pub use export::{export, read_trials, write_metrics, write_trials, METRICS_HEADER, TRIALS_HEADER};
pub use metrics::{compute_metrics, overall_mae, summarize, Angle, BinMetrics};
pub use sweep::{draw_scenario, estimator_params, run_sweep, run_trial, trial_seed, Scenario, TrialResult};
