//! Eight-sector LI statistics used to disambiguate candidate attitudes.
//!
//! Sectors are 45 degrees wide around the raster centre, numbered 1..8
//! counterclockwise (in camera `X`/`Y`) from the pixel-row axis `+X`, so
//! sector `n + 4` is diametrically opposite sector `n`.

use super::ImageSet;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Total LI of the valid pixels in each of the eight sectors.
pub fn sector_sums<T: Real>(img: &ImageSet<T>) -> ([T; 8], [usize; 8]) {
    let mut sums = [T::zero(); 8];
    let mut counts = [0usize; 8];
    let two = T::lit(2.0);
    let cx = T::from_usize_lossy(img.cols()) / two;
    let cy = T::from_usize_lossy(img.rows()) / two;
    let width = T::lit(45.0);
    for row in 0..img.rows() {
        let dy = T::from_usize_lossy(row) + T::lit(0.5) - cy;
        for col in 0..img.cols() {
            let idx = img.index(row, col);
            if !img.mask()[idx] {
                continue;
            }
            let dx = T::from_usize_lossy(col) + T::lit(0.5) - cx;
            let mut angle = dy.atan2(dx).to_degrees();
            if angle < T::zero() {
                angle += T::lit(360.0);
            }
            let s = (angle / width).floor().to_usize().unwrap_or(0).min(7);
            sums[s] += img.li[idx];
            counts[s] += 1;
        }
    }
    (sums, counts)
}

/// `LI_n / LI_{n+4}` for `n = 1..4`.
pub fn sector_ratios<T: Real>(img: &ImageSet<T>) -> Result<[T; 4]> {
    let (sums, counts) = sector_sums(img);
    if let Some(n) = counts.iter().position(|&c| c == 0) {
        return Err(Error::DegenerateImage(format!("LI sector {} is empty", n + 1)));
    }
    let mut out = [T::zero(); 4];
    for n in 0..4 {
        if !(sums[n + 4] > T::zero()) {
            return Err(Error::DegenerateImage(format!(
                "LI sector {} has no light",
                n + 5
            )));
        }
        out[n] = sums[n] / sums[n + 4];
    }
    Ok(out)
}

/// Sum of squared differences of the sector ratios.
pub fn com_score<T: Real>(given: &[T; 4], simulated: &[T; 4]) -> T {
    given
        .iter()
        .zip(simulated)
        .map(|(a, b)| (*a - *b) * (*a - *b))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(rows: usize, cols: usize) -> ImageSet<f64> {
        let n = rows * cols;
        let mut mask = vec![false; n];
        let (cx, cy) = (cols as f64 / 2.0, rows as f64 / 2.0);
        let r = rows.min(cols) as f64 / 2.0;
        for row in 0..rows {
            for col in 0..cols {
                let d = (col as f64 + 0.5 - cx).hypot(row as f64 + 0.5 - cy);
                mask[row * cols + col] = d <= r;
            }
        }
        let li = mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
        ImageSet::from_channels(rows, cols, vec![0.0; n], vec![0.0; n], li, mask).unwrap()
    }

    fn sector_of(img: &ImageSet<f64>, row: usize, col: usize) -> usize {
        let dx = col as f64 + 0.5 - img.cols() as f64 / 2.0;
        let dy = row as f64 + 0.5 - img.rows() as f64 / 2.0;
        let a = dy.atan2(dx).to_degrees().rem_euclid(360.0);
        (a / 45.0) as usize
    }

    #[test]
    fn uniform_is_balanced() {
        let img = disc(40, 40);
        let r = sector_ratios(&img).unwrap();
        for v in r {
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn doubled_first_sector() {
        let mut img = disc(40, 40);
        for row in 0..40 {
            for col in 0..40 {
                let idx = img.index(row, col);
                if img.mask()[idx] && sector_of(&img, row, col) == 0 {
                    img.li[idx] = 2.0;
                }
            }
        }
        let r = sector_ratios(&img).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-12);
        for v in &r[1..] {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn com_hand_example() {
        // sector sums {2,1,1,1,1,1,1,1} against a uniform image
        let given = [2.0, 1.0, 1.0, 1.0];
        let uniform = [1.0; 4];
        assert_eq!(com_score(&given, &uniform), 1.0);
        assert_eq!(com_score(&given, &given), 0.0);
    }

    #[test]
    fn empty_sector_is_degenerate() {
        let mut img = disc(20, 20);
        for row in 0..20 {
            for col in 0..20 {
                if sector_of(&img, row, col) == 2 {
                    let idx = img.index(row, col);
                    img.li[idx] = 0.0;
                    let mut m = img.mask().to_vec();
                    m[idx] = false;
                    img = ImageSet::from_channels(20, 20, img.aop.clone(), img.dop.clone(), img.li.clone(), m).unwrap();
                }
            }
        }
        assert!(matches!(sector_ratios(&img), Err(Error::DegenerateImage(_))));
    }
}
