//! Experiment configuration: a flat TOML file whose keys mirror
//! [`ExperimentConfig`]'s fields. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imager::{CameraModel, NoiseScale, REFERENCE_FOV};
use crate::sso::{DistanceMode, RandomFactors, SsoConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Noise-free images, exact model.
    #[default]
    Clean,
    /// Gaussian noise on the given images.
    Noise,
    /// Estimator uses perturbed turbidity and albedo.
    ModelError,
    /// Noise and perturbation both applied when their levels are positive.
    Custom,
}

impl Mode {
    pub fn applies_noise(self) -> bool {
        matches!(self, Mode::Noise | Mode::Custom)
    }

    pub fn applies_perturbation(self) -> bool {
        matches!(self, Mode::ModelError | Mode::Custom)
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clean" => Ok(Mode::Clean),
            "noise" => Ok(Mode::Noise),
            "model-error" => Ok(Mode::ModelError),
            "custom" => Ok(Mode::Custom),
            other => Err(Error::Config(format!(
                "unknown mode {other:?} (expected clean, noise, model-error or custom)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceSetting {
    #[default]
    Normalized,
    Degrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FactorSetting {
    #[default]
    PerSpider,
    PerDimension,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub trials_per_bin: usize,
    /// Solar altitudes, degrees.
    pub h_s: Vec<f64>,
    pub turbidity: [f64; 2],
    pub albedo: [f64; 2],
    /// nanometres
    pub wavelength: [f64; 2],
    pub noise_level: f64,
    pub noise_scale: NoiseScale,
    /// Relative error applied to the estimator's turbidity and albedo.
    pub perturbation: f64,
    /// Divisor of the 2048 x 2448 reference raster.
    pub scale: usize,
    pub seed: u64,
    pub population: usize,
    pub iterations: usize,
    pub pf: f64,
    pub theta: f64,
    pub fov: f64,
    pub split_population: bool,
    pub distance: DistanceSetting,
    pub random_factors: FactorSetting,
    /// Write measured wall time to `trials.csv`; off by default so that
    /// repeated runs produce identical files.
    pub record_wall_time: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Clean,
            trials_per_bin: 30,
            h_s: (0..=9).map(|k| 10.0 * k as f64).collect(),
            turbidity: [3.0, 7.0],
            albedo: [0.1, 0.4],
            wavelength: [320.0, 720.0],
            noise_level: 0.05,
            noise_scale: NoiseScale::Variance,
            perturbation: 0.05,
            scale: 16,
            seed: 0,
            population: 200,
            iterations: 1000,
            pf: 0.7,
            theta: 1.5,
            fov: REFERENCE_FOV,
            split_population: false,
            distance: DistanceSetting::Normalized,
            random_factors: FactorSetting::PerSpider,
            record_wall_time: false,
        }
    }
}

fn check_range(name: &str, r: [f64; 2], lo: f64, hi: f64) -> Result<()> {
    if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1] && r[0] >= lo && r[1] <= hi) {
        return Err(Error::Config(format!(
            "{name} range [{}, {}] must be ordered and within [{lo}, {hi}]",
            r[0], r[1]
        )));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_bin < 1 {
            return Err(Error::Config("trials_per_bin must be at least 1".into()));
        }
        if self.h_s.is_empty() {
            return Err(Error::Config("h_s grid is empty".into()));
        }
        if let Some(h) = self.h_s.iter().find(|h| !(**h >= 0.0 && **h <= 90.0)) {
            return Err(Error::Config(format!("solar altitude {h} outside [0, 90]")));
        }
        check_range("turbidity", self.turbidity, 3.0, 7.0)?;
        check_range("albedo", self.albedo, 0.1, 0.4)?;
        check_range("wavelength", self.wavelength, 320.0, 720.0)?;
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return Err(Error::Config(format!(
                "noise_level {} must be non-negative",
                self.noise_level
            )));
        }
        if !(0.0..1.0).contains(&self.perturbation) {
            return Err(Error::Config(format!(
                "perturbation {} must be in [0, 1)",
                self.perturbation
            )));
        }
        self.camera()?;
        self.sso(0).validate().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn camera(&self) -> Result<CameraModel<f64>> {
        CameraModel::scaled(self.fov, self.scale).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn sso(&self, seed: u64) -> SsoConfig<f64> {
        SsoConfig {
            population: self.population,
            iterations: self.iterations,
            pf: self.pf,
            theta: self.theta,
            fov: self.fov,
            seed,
            distance: match self.distance {
                DistanceSetting::Normalized => DistanceMode::Normalized,
                DistanceSetting::Degrees => DistanceMode::Degrees,
            },
            factors: match self.random_factors {
                FactorSetting::PerSpider => RandomFactors::PerSpider,
                FactorSetting::PerDimension => RandomFactors::PerDimension,
            },
            split_population: self.split_population,
        }
    }

    pub fn total_trials(&self) -> usize {
        self.trials_per_bin * self.h_s.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.h_s.len(), 10);
        assert_eq!(c.total_trials(), 300);
    }

    #[test]
    fn parses_partial_file_with_comments() {
        let c = ExperimentConfig::from_toml_str(
            "# short run\nmode = \"model-error\"\ntrials_per_bin = 2\nh_s = [30, 50]\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(c.mode, Mode::ModelError);
        assert_eq!(c.h_s, vec![30.0, 50.0]);
        assert_eq!(c.population, 200);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_ranges() {
        assert!(ExperimentConfig::from_toml_str("trails_per_bin = 3\n").is_err());
        assert!(ExperimentConfig::from_toml_str("turbidity = [2.0, 5.0]\n").is_err());
        assert!(ExperimentConfig::from_toml_str("h_s = [95]\n").is_err());
        assert!(ExperimentConfig::from_toml_str("trials_per_bin = 0\n").is_err());
        assert!(ExperimentConfig::from_toml_str("pf = 2.0\n").is_err());
        assert!(ExperimentConfig::from_toml_str("mode = \"fast\"\n").is_err());
    }

    #[test]
    fn round_trips_through_toml() {
        let c = ExperimentConfig {
            mode: Mode::Noise,
            seed: 99,
            ..Default::default()
        };
        assert_eq!(ExperimentConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
    }

    #[test]
    fn missing_file_mentions_path() {
        let e = ExperimentConfig::load(Path::new("/no/such/dir/exp.toml")).unwrap_err();
        assert!(e.is_validation());
        assert!(e.to_string().contains("/no/such/dir/exp.toml"));
    }
}
