//! Monte Carlo trials over solar altitude bins.

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::geometry::{yaw_diff_unchecked, Attitude};
use crate::imager::{add_noise, render, NoiseSpec};
use crate::skymodel::{SkyConfig, SkyParams};
use crate::sso::{estimate_attitude, Bounds};

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub h_s: f64,
    pub turbidity: f64,
    pub albedo: f64,
    pub wavelength: f64,
    pub truth: Attitude<f64>,
    pub estimate: Attitude<f64>,
    /// Wrapped yaw error in `[0, 180]`.
    pub err_yaw: f64,
    /// Signed `estimate - truth`.
    pub err_pitch: f64,
    pub err_roll: f64,
    pub wall_ms: u64,
}

impl TrialResult {
    pub fn errors(&self) -> [f64; 3] {
        [self.err_yaw, self.err_pitch, self.err_roll]
    }
}

/// Seed of trial `index`: first output of the master generator on stream `index`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64);
    rng.next_u64()
}

fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Everything drawn for one trial before estimation. Draws depend only on
/// the trial seed, so different modes see the same scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub params: SkyParams<f64>,
    pub truth: Attitude<f64>,
    pub noise_seed: u64,
    /// Signs of the turbidity and albedo perturbations.
    pub signs: [f64; 2],
    pub sso_seed: u64,
}

pub fn draw_scenario(cfg: &ExperimentConfig, h_s: f64, seed: u64) -> Result<Scenario> {
    let mut rng = substream(seed, 0);
    let mut uniform = |r: [f64; 2]| r[0] + rng.random::<f64>() * (r[1] - r[0]);
    let turbidity = uniform(cfg.turbidity);
    let albedo = uniform(cfg.albedo);
    let wavelength = uniform(cfg.wavelength);
    let azimuth = uniform([-180.0, 180.0]);
    let params = SkyParams::from_altitude(h_s, azimuth, turbidity, albedo, wavelength)?;
    let truth = Bounds::full(cfg.fov).sample(&mut rng);
    let mut signs_rng = substream(seed, 2);
    let mut sign = || if signs_rng.random::<bool>() { 1.0 } else { -1.0 };
    let signs = [sign(), sign()];
    Ok(Scenario {
        params,
        truth,
        noise_seed: substream(seed, 1).next_u64(),
        signs,
        sso_seed: substream(seed, 3).next_u64(),
    })
}

/// Parameters handed to the estimator: the truth, or the truth with
/// turbidity and albedo scaled by `1 ± perturbation`.
pub fn estimator_params(cfg: &ExperimentConfig, s: &Scenario) -> Result<SkyParams<f64>> {
    let p = s.params;
    if !cfg.mode.applies_perturbation() || cfg.perturbation == 0.0 {
        return Ok(p);
    }
    SkyParams::new(
        p.solar_zenith,
        p.solar_azimuth,
        p.turbidity * (1.0 + s.signs[0] * cfg.perturbation),
        p.albedo * (1.0 + s.signs[1] * cfg.perturbation),
        p.wavelength,
    )
}

pub fn run_trial(cfg: &ExperimentConfig, index: usize, h_s: f64) -> Result<TrialResult> {
    let start = Instant::now();
    let seed = trial_seed(cfg.seed, index);
    let s = draw_scenario(cfg, h_s, seed)?;
    let camera = cfg.camera()?;
    let sky = SkyConfig::default();
    let mut given = render(&s.truth, &s.params, &camera, &sky)?;
    if cfg.mode.applies_noise() && cfg.noise_level > 0.0 {
        let spec = NoiseSpec {
            enabled: true,
            level: cfg.noise_level,
            scale: cfg.noise_scale,
            seed: s.noise_seed,
        };
        given = add_noise(&given, &spec);
    }
    let est_params = estimator_params(cfg, &s)?;
    let est = estimate_attitude(&given, &est_params, &cfg.sso(s.sso_seed), &camera, &sky)?;
    let a = est.attitude;
    let wall_ms = if cfg.record_wall_time {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    log::info!(
        "trial {index}: h_s {h_s} truth ({:.3}, {:.3}, {:.3}) estimate ({:.3}, {:.3}, {:.3})",
        s.truth.yaw,
        s.truth.pitch,
        s.truth.roll,
        a.yaw,
        a.pitch,
        a.roll
    );
    Ok(TrialResult {
        trial: index,
        seed,
        h_s,
        turbidity: s.params.turbidity,
        albedo: s.params.albedo,
        wavelength: s.params.wavelength,
        truth: s.truth,
        estimate: a,
        err_yaw: yaw_diff_unchecked(a.yaw - s.truth.yaw),
        err_pitch: a.pitch - s.truth.pitch,
        err_roll: a.roll - s.truth.roll,
        wall_ms,
    })
}

/// Trial `i` of bin `b` has index `b * trials_per_bin + i`. Results are
/// returned in index order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    let jobs: Vec<(usize, f64)> = cfg
        .h_s
        .iter()
        .enumerate()
        .flat_map(|(b, &h)| (0..cfg.trials_per_bin).map(move |i| (b * cfg.trials_per_bin + i, h)))
        .collect();
    jobs.par_iter().map(|&(i, h)| run_trial(cfg, i, h)).collect()
}
