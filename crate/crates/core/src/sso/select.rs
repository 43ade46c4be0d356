//! Final choice among the quadrant candidates using light-intensity sectors.

use crate::error::{Error, Result};
use crate::geometry::Attitude;
use crate::imager::{com_score, sector_ratios, ImageSet, Imager};
use crate::scalar::Real;

/// Best spider of one quadrant search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate<T> {
    pub attitude: Attitude<T>,
    pub fitness: T,
    /// 1..=4
    pub quadrant: usize,
    /// Light-intensity comparison score, set for the two finalists when
    /// sector ratios are available.
    pub com: Option<T>,
}

/// Keep the two candidates with the highest fitness, render their LI and
/// return the index (into `cands`) of the one whose opposite-sector ratios
/// are closer to the given image. Ties go to the higher fitness. When a
/// sector is empty or dark the choice falls back to fitness alone.
pub fn select_final<T: Real>(cands: &mut [Candidate<T>], given: &ImageSet<T>, imager: &Imager<T>) -> Result<usize> {
    if cands.is_empty() {
        return Err(Error::Parameter("no candidates to select from".into()));
    }
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&a, &b| {
        cands[b]
            .fitness
            .partial_cmp(&cands[a].fitness)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let finalists = &order[..order.len().min(2)];
    if finalists.len() == 1 {
        return Ok(finalists[0]);
    }
    let given_ratios = match sector_ratios(given) {
        Ok(r) => r,
        Err(e) => return fallback(finalists[0], e),
    };
    let mut coms = Vec::with_capacity(2);
    for &k in finalists {
        let sim = imager.render(&cands[k].attitude)?;
        match sector_ratios(&sim) {
            Ok(r) => coms.push(com_score(&given_ratios, &r)),
            Err(e) => return fallback(finalists[0], e),
        }
    }
    for (&k, &c) in finalists.iter().zip(&coms) {
        cands[k].com = Some(c);
    }
    Ok(if coms[1] < coms[0] {
        finalists[1]
    } else {
        finalists[0]
    })
}

fn fallback(best: usize, e: Error) -> Result<usize> {
    match e {
        Error::DegenerateImage(msg) => {
            log::warn!("light-intensity sectors unusable ({msg}); selecting by fitness only");
            Ok(best)
        }
        other => Err(other),
    }
}
