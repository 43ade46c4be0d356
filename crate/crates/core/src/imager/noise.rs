//! Zero-mean Gaussian measurement noise scaled by each channel's range.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ImageSet;
use crate::geometry::wrap_signed_yaw;
use crate::scalar::Real;

/// How `level * (max - min)` is turned into a noise amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseScale {
    /// `level * range` is the variance.
    #[default]
    Variance,
    /// `level * range` is the standard deviation.
    StdDev,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub enabled: bool,
    pub level: f64,
    pub scale: NoiseScale,
    pub seed: u64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            enabled: true,
            level: 0.05,
            scale: NoiseScale::Variance,
            seed: 0,
        }
    }
}

impl NoiseSpec {
    fn sigma(&self, range: f64) -> f64 {
        let v = self.level * range;
        match self.scale {
            NoiseScale::Variance => v.max(0.0).sqrt(),
            NoiseScale::StdDev => v,
        }
    }
}

#[derive(Clone, Copy)]
enum Channel {
    Aop,
    Dop,
    Li,
}

/// Add noise to every channel. Each channel draws from its own ChaCha stream
/// (AOP 0, DOP 1, LI 2) in row-major order over valid pixels, so the result
/// depends only on the image and the seed. AOP is re-wrapped into
/// `(-180, 180]`, DOP clamped to `[0, 1]`, LI floored at 0.
pub fn add_noise<T: Real>(img: &ImageSet<T>, spec: &NoiseSpec) -> ImageSet<T> {
    let mut out = img.clone();
    if !spec.enabled || spec.level == 0.0 {
        return out;
    }
    let mask = img.mask().to_vec();
    for (stream, ch) in [Channel::Aop, Channel::Dop, Channel::Li].into_iter().enumerate() {
        let data = match ch {
            Channel::Aop => &mut out.aop,
            Channel::Dop => &mut out.dop,
            Channel::Li => &mut out.li,
        };
        let (lo, hi) = data
            .iter()
            .zip(&mask)
            .filter(|(v, &m)| m && v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, _)| {
                let v = v.as_f64();
                (lo.min(v), hi.max(v))
            });
        if !(hi > lo) {
            continue;
        }
        let sigma = spec.sigma(hi - lo);
        if sigma == 0.0 {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(stream as u64);
        for (v, &m) in data.iter_mut().zip(&mask) {
            if !m {
                continue;
            }
            let z: f64 = StandardNormal.sample(&mut rng);
            if !v.is_finite() {
                continue;
            }
            let noisy = *v + T::lit(sigma * z);
            *v = match ch {
                Channel::Aop => wrap_signed_yaw(noisy),
                Channel::Dop => noisy.max(T::zero()).min(T::one()),
                Channel::Li => noisy.max(T::zero()),
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_image() -> ImageSet<f64> {
        let rows = 10;
        let cols = 12;
        let n = rows * cols;
        let mask: Vec<bool> = (0..n).map(|i| i % 7 != 0).collect();
        let aop = (0..n).map(|i| (i as f64 * 13.0) % 180.0 - 89.0).collect();
        let dop = (0..n).map(|i| i as f64 / n as f64).collect();
        let li = (0..n).map(|i| 1.0 + (i % 5) as f64).collect();
        let mut img = ImageSet::from_channels(rows, cols, aop, dop, li, mask).unwrap();
        img.aop[5] = f64::NAN;
        img
    }

    #[test]
    fn zero_level_is_identity() {
        let img = sample_image();
        let out = add_noise(&img, &NoiseSpec { level: 0.0, ..Default::default() });
        assert_eq!(format!("{:?}", out), format!("{:?}", img));
    }

    #[test]
    fn constant_channel_unchanged() {
        let mut img = sample_image();
        img.li.iter_mut().for_each(|v| *v = 3.0);
        let out = add_noise(&img, &NoiseSpec::default());
        assert_eq!(out.li, img.li);
        assert_ne!(out.dop, img.dop);
    }

    #[test]
    fn seeded_and_bounded() {
        let img = sample_image();
        let spec = NoiseSpec { seed: 99, level: 0.5, ..Default::default() };
        let a = add_noise(&img, &spec);
        let b = add_noise(&img, &spec);
        assert_eq!(format!("{:?}", a), format!("{:?}", b));
        let c = add_noise(&img, &NoiseSpec { seed: 100, ..spec });
        assert_ne!(format!("{:?}", a), format!("{:?}", c));
        for i in 0..a.mask().len() {
            if a.mask()[i] {
                assert!((0.0..=1.0).contains(&a.dop[i]));
                assert!(a.li[i] >= 0.0);
                assert!(a.aop[i].is_nan() || (a.aop[i] > -180.0 && a.aop[i] <= 180.0));
            } else {
                assert_eq!(a.dop[i], img.dop[i]);
            }
        }
        assert!(a.aop[5].is_nan());
    }

    #[test]
    fn variance_versus_stddev_amplitude() {
        let spec = NoiseSpec { level: 0.05, ..Default::default() };
        assert!((spec.sigma(180.0) - 3.0).abs() < 1e-12);
        let spec = NoiseSpec { scale: NoiseScale::StdDev, ..spec };
        assert!((spec.sigma(180.0) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn empirical_spread_matches_sigma() {
        let n = 200 * 200;
        let mask = vec![true; n];
        let mut dop: Vec<f64> = vec![0.5; n];
        dop[0] = 0.0;
        dop[1] = 1.0;
        let img = ImageSet::from_channels(200, 200, vec![0.0; n], dop, vec![1.0; n], mask).unwrap();
        let spec = NoiseSpec { level: 0.0004, scale: NoiseScale::Variance, ..Default::default() };
        let out = add_noise(&img, &spec);
        // sigma = sqrt(0.0004 * 1) = 0.02, far from the clamp bounds
        let diffs: Vec<f64> = out.dop[2..].iter().map(|v| v - 0.5).collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64).sqrt();
        assert!(mean.abs() < 1e-3);
        assert!((sd - 0.02).abs() < 1e-3, "sd {sd}");
    }
}
