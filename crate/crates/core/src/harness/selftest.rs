//! Fast runtime checks of the core invariants, run by `skypol selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    attitude_to_rotation, complex_to_sky, dot, sky_to_complex, wrap_aop_diff, wrap_yaw_diff, Attitude,
    SkyDirection,
};
use crate::skymodel::{evector, SkyConfig, SkyModel, SkyParams};
use crate::sso::assign_weights;

pub struct Check {
    pub name: &'static str,
    pub outcome: std::result::Result<(), String>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) * 10.0).round() as i64;
    (0..=n).map(move |k| lo + k as f64 / 10.0)
}

fn aop_wrap() -> std::result::Result<(), String> {
    for x in grid(-180.0, 180.0) {
        let v = wrap_aop_diff(x).map_err(|e| e.to_string())?;
        let m = wrap_aop_diff(-x).map_err(|e| e.to_string())?;
        ensure((0.0..=90.0).contains(&v) && (v - m).abs() < 1e-9, || {
            format!("AOP wrap at {x}: {v} vs {m}")
        })?;
    }
    Ok(())
}

fn yaw_wrap() -> std::result::Result<(), String> {
    for x in grid(0.0, 360.0) {
        let v = wrap_yaw_diff(x).map_err(|e| e.to_string())?;
        let n = wrap_yaw_diff(-x).map_err(|e| e.to_string())?;
        let p = wrap_yaw_diff(360.0 - x).map_err(|e| e.to_string())?;
        ensure((0.0..=180.0).contains(&v) && (v - n).abs() < 1e-9 && (v - p).abs() < 1e-9, || {
            format!("yaw wrap at {x}: {v}, {n}, {p}")
        })?;
    }
    Ok(())
}

fn projection(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    for _ in 0..1000 {
        let d = SkyDirection::<f64>::new(rng.random_range(0.0..179.0), rng.random_range(-179.0..179.0));
        let back = complex_to_sky(sky_to_complex(&d).map_err(|e| e.to_string())?);
        let dz = (back.zenith - d.zenith).abs();
        let da = (back.azimuth - d.azimuth).abs();
        ensure(dz < 1e-9 && (d.zenith < 1e-6 || da < 1e-9), || {
            format!("projection round trip {d:?} -> {back:?}")
        })?;
    }
    Ok(())
}

fn evector_orthogonal(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    for _ in 0..10_000 {
        let d = SkyDirection::<f64>::new(rng.random_range(0.0..85.0), rng.random_range(-180.0..180.0));
        let e = evector(&d, rng.random_range(-180.0..180.0)).map_err(|e| e.to_string())?;
        let dp = dot(&e, &d.to_vector()).abs();
        ensure(dp < 1e-12, || format!("E-vector not orthogonal at {d:?}: {dp}"))?;
    }
    Ok(())
}

fn rotations(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    for _ in 0..1000 {
        let a = Attitude::<f64>::new(
            rng.random_range(-180.0..180.0),
            rng.random_range(-90.0..90.0),
            rng.random_range(-180.0..180.0),
        );
        let r = attitude_to_rotation(&a);
        ensure(r.orthogonality_error() < 1e-12 && (r.determinant() - 1.0).abs() < 1e-12, || {
            format!("rotation for {a:?} is not orthonormal")
        })?;
    }
    Ok(())
}

fn neutral_points(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    for _ in 0..100 {
        let p = SkyParams::<f64>::new(
            rng.random_range(0.0..90.0),
            rng.random_range(-180.0..180.0),
            rng.random_range(1.0..10.0),
            rng.random_range(0.0..1.0),
            rng.random_range(320.0..720.0),
        )
        .map_err(|e| e.to_string())?;
        let model = SkyModel::new(p, &SkyConfig::default()).map_err(|e| e.to_string())?;
        for z in model.neutral_points().all().map_err(|e| e.to_string())? {
            let d = complex_to_sky(z);
            let dop = model.dop_unclamped_at(&d).abs();
            ensure(dop < 1e-12, || format!("DOP {dop} at neutral point {d:?}"))?;
        }
    }
    Ok(())
}

fn weights(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    for _ in 0..200 {
        let n = rng.random_range(1..50);
        let j: Vec<f64> = (0..n).map(|_| -rng.random_range(0.0..1e4)).collect();
        let w = assign_weights(&j);
        let max = w.iter().cloned().fold(f64::MIN, f64::max);
        let min = w.iter().cloned().fold(f64::MAX, f64::min);
        ensure(w.iter().all(|v| (0.0..=1.0).contains(v)) && max == 1.0 && (min == 0.0 || n == 1), || {
            format!("weights out of range for {j:?}")
        })?;
    }
    Ok(())
}

/// Run every check with a fixed seed.
pub fn run_all(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        Check { name: "AOP difference wrap", outcome: aop_wrap() },
        Check { name: "yaw difference wrap", outcome: yaw_wrap() },
        Check { name: "projection round trip", outcome: projection(&mut rng) },
        Check { name: "E-vector orthogonality", outcome: evector_orthogonal(&mut rng) },
        Check { name: "rotation orthonormality", outcome: rotations(&mut rng) },
        Check { name: "neutral-point zeros", outcome: neutral_points(&mut rng) },
        Check { name: "weight normalization", outcome: weights(&mut rng) },
    ]
}
