//! CSV persistence of trial results and metrics.

use std::path::{Path, PathBuf};

use super::metrics::BinMetrics;
use super::sweep::TrialResult;
use crate::error::{Error, Result};
use crate::geometry::Attitude;

pub const TRIALS_HEADER: [&str; 16] = [
    "trial", "seed", "h_s", "T", "rho", "lambda", "psi_true", "alpha_true", "beta_true", "psi_est",
    "alpha_est", "beta_est", "err_psi", "err_alpha", "err_beta", "wall_ms",
];

pub const METRICS_HEADER: [&str; 5] = ["h_s_bin", "angle", "mae", "rmse", "maxe"];

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_trials(path: &Path, results: &[TrialResult]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(TRIALS_HEADER).map_err(csv_err(path))?;
    for r in results {
        let row = [
            r.trial.to_string(),
            r.seed.to_string(),
            f(r.h_s),
            f(r.turbidity),
            f(r.albedo),
            f(r.wavelength),
            f(r.truth.yaw),
            f(r.truth.pitch),
            f(r.truth.roll),
            f(r.estimate.yaw),
            f(r.estimate.pitch),
            f(r.estimate.roll),
            f(r.err_yaw),
            f(r.err_pitch),
            f(r.err_roll),
            r.wall_ms.to_string(),
        ];
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_metrics(path: &Path, metrics: &[BinMetrics]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(METRICS_HEADER).map_err(csv_err(path))?;
    for m in metrics {
        let row = [f(m.h_s), m.angle.name().to_string(), f(m.mae), f(m.rmse), f(m.maxe)];
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Write `trials.csv` and `metrics.csv` into `dir`, creating it if needed.
pub fn export(dir: &Path, results: &[TrialResult], metrics: &[BinMetrics]) -> Result<[PathBuf; 2]> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let trials = dir.join("trials.csv");
    let metrics_path = dir.join("metrics.csv");
    write_trials(&trials, results)?;
    write_metrics(&metrics_path, metrics)?;
    Ok([trials, metrics_path])
}

pub fn read_trials(path: &Path) -> Result<Vec<TrialResult>> {
    let mut rd = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = rd.headers().map_err(csv_err(path))?.clone();
    if header.iter().ne(TRIALS_HEADER) {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: format!("unexpected header {header:?}"),
        });
    }
    let bad = |line: usize, msg: String| Error::Format {
        path: path.to_path_buf(),
        msg: format!("record {line}: {msg}"),
    };
    let mut out = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse()
                .map_err(|e| bad(line + 1, format!("{}: {e}", TRIALS_HEADER[k])))
        };
        let int = |k: usize| -> Result<u64> {
            rec[k]
                .parse()
                .map_err(|e| bad(line + 1, format!("{}: {e}", TRIALS_HEADER[k])))
        };
        out.push(TrialResult {
            trial: int(0)? as usize,
            seed: int(1)?,
            h_s: num(2)?,
            turbidity: num(3)?,
            albedo: num(4)?,
            wavelength: num(5)?,
            truth: Attitude::new(num(6)?, num(7)?, num(8)?),
            estimate: Attitude::new(num(9)?, num(10)?, num(11)?),
            err_yaw: num(12)?,
            err_pitch: num(13)?,
            err_roll: num(14)?,
            wall_ms: int(15)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::metrics::compute_metrics;

    fn sample(i: usize) -> TrialResult {
        TrialResult {
            trial: i,
            seed: 12_345_678_901_234_567_890,
            h_s: 30.0,
            turbidity: 4.123_456_789,
            albedo: 0.25,
            wavelength: 555.5,
            truth: Attitude::new(-179.999_999_6, 10.5, -3.25),
            estimate: Attitude::new(179.9, 10.4, -3.0),
            err_yaw: 0.1,
            err_pitch: -0.1,
            err_roll: 0.25,
            wall_ms: 0,
        }
    }

    #[test]
    fn empty_results_give_headers_only() {
        let dir = tempfile::tempdir().unwrap();
        let [t, m] = export(dir.path(), &[], &[]).unwrap();
        assert_eq!(std::fs::read_to_string(t).unwrap(), TRIALS_HEADER.join(",") + "\n");
        assert_eq!(std::fs::read_to_string(m).unwrap(), "h_s_bin,angle,mae,rmse,maxe\n");
    }

    #[test]
    fn round_trip_within_format_precision() {
        let dir = tempfile::tempdir().unwrap();
        let rs: Vec<_> = (0..3).map(sample).collect();
        let [t, _] = export(dir.path(), &rs, &compute_metrics(&rs)).unwrap();
        let back = read_trials(&t).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in rs.iter().zip(&back) {
            assert_eq!(a.seed, b.seed);
            assert!((a.turbidity - b.turbidity).abs() <= 1e-6);
            assert!((a.truth.yaw - b.truth.yaw).abs() <= 1e-6);
            assert!((a.err_roll - b.err_roll).abs() <= 1e-6);
        }
        let text = std::fs::read_to_string(&t).unwrap();
        assert!(text.lines().all(|l| l.split(',').count() == 16));
        assert!(text.contains(",-180.000000,"));
    }

    #[test]
    fn unwritable_path_is_reported() {
        let e = write_trials(Path::new("/no/such/dir/trials.csv"), &[]).unwrap_err();
        assert!(e.to_string().contains("/no/such/dir/trials.csv"));
    }
}
