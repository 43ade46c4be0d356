//! Per-bin error statistics.

use super::sweep::TrialResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Angle {
    Yaw,
    Pitch,
    Roll,
}

impl Angle {
    pub const ALL: [Angle; 3] = [Angle::Yaw, Angle::Pitch, Angle::Roll];

    pub fn name(self) -> &'static str {
        match self {
            Angle::Yaw => "yaw",
            Angle::Pitch => "pitch",
            Angle::Roll => "roll",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinMetrics {
    pub h_s: f64,
    pub angle: Angle,
    pub mae: f64,
    pub rmse: f64,
    pub maxe: f64,
    pub count: usize,
}

/// MAE, RMSE and MaxE of `errors`; `None` when empty.
pub fn summarize(errors: &[f64]) -> Option<(f64, f64, f64)> {
    if errors.is_empty() {
        return None;
    }
    let n = errors.len() as f64;
    let mae = errors.iter().map(|e| e.abs()).sum::<f64>() / n;
    let rmse = (errors.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    let maxe = errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    Some((mae, rmse, maxe))
}

/// One row per angle for each solar-altitude bin, bins in order of first
/// appearance.
pub fn compute_metrics(results: &[TrialResult]) -> Vec<BinMetrics> {
    let mut bins: Vec<f64> = Vec::new();
    for r in results {
        if !bins.contains(&r.h_s) {
            bins.push(r.h_s);
        }
    }
    let mut out = Vec::with_capacity(bins.len() * 3);
    for h in bins {
        let in_bin: Vec<&TrialResult> = results.iter().filter(|r| r.h_s == h).collect();
        for (k, angle) in Angle::ALL.into_iter().enumerate() {
            let errs: Vec<f64> = in_bin.iter().map(|r| r.errors()[k]).collect();
            match summarize(&errs) {
                Some((mae, rmse, maxe)) => out.push(BinMetrics {
                    h_s: h,
                    angle,
                    mae,
                    rmse,
                    maxe,
                    count: errs.len(),
                }),
                None => log::warn!("bin h_s = {h} has no results; omitted"),
            }
        }
    }
    out
}

/// Mean absolute error per angle over all results.
pub fn overall_mae(results: &[TrialResult]) -> [f64; 3] {
    std::array::from_fn(|k| {
        let errs: Vec<f64> = results.iter().map(|r| r.errors()[k]).collect();
        summarize(&errs).map_or(0.0, |s| s.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn summary_examples() {
        assert_eq!(summarize(&[1.0, -1.0]), Some((1.0, 1.0, 1.0)));
        let (mae, rmse, maxe) = summarize(&[0.0, 2.0]).unwrap();
        assert_eq!(mae, 1.0);
        assert_abs_diff_eq!(rmse, 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(maxe, 2.0);
        assert_eq!(summarize(&[-0.7]), Some((0.7, 0.7, 0.7)));
        assert_eq!(summarize(&[]), None);
    }
}
