//! Template-matching fitness.

use crate::error::{Error, Result};
use crate::geometry::{aop_diff_unchecked, wrap_signed_yaw, Attitude, Vec3};
use crate::imager::{ImageSet, Imager};
use crate::scalar::Real;

/// Something the optimizer can maximize.
pub trait Objective<T: Real>: Sync {
    fn evaluate(&self, attitude: &Attitude<T>) -> Result<T>;
}

impl<T: Real, F> Objective<T> for F
where
    F: Fn(&Attitude<T>) -> Result<T> + Sync,
{
    fn evaluate(&self, attitude: &Attitude<T>) -> Result<T> {
        self(attitude)
    }
}

#[inline]
fn pixel_cost<T: Real>(aop_r: T, dop_r: T, aop_s: T, dop_s: T, theta: T) -> T {
    let mut c = (dop_r - dop_s).abs();
    if aop_r.is_finite() && aop_s.is_finite() {
        c += theta * aop_diff_unchecked(wrap_signed_yaw(aop_r - aop_s));
    }
    c
}

/// `J = -sum |dDOP| - theta sum xi1(dAOP)` over pixels valid in both images.
/// A pixel whose AOP is undefined in either image contributes its DOP term only.
pub fn template_fitness<T: Real>(given: &ImageSet<T>, simulated: &ImageSet<T>, theta: T) -> Result<T> {
    if given.rows() != simulated.rows() || given.cols() != simulated.cols() {
        return Err(Error::Consistency(format!(
            "image sizes differ: {}x{} vs {}x{}",
            given.rows(),
            given.cols(),
            simulated.rows(),
            simulated.cols()
        )));
    }
    let mut j = T::zero();
    let mut overlap = false;
    for k in 0..given.mask().len() {
        if given.mask()[k] && simulated.mask()[k] {
            overlap = true;
            j -= pixel_cost(given.aop[k], given.dop[k], simulated.aop[k], simulated.dop[k], theta);
        }
    }
    if !overlap {
        return Err(Error::NoOverlap);
    }
    Ok(j)
}

/// Scores attitudes by rendering AOP and DOP only at the pixels valid in both
/// the given image and the camera, without building image buffers.
#[derive(Debug, Clone)]
pub struct TemplateMatcher<T: Real> {
    imager: Imager<T>,
    rays: Vec<Vec3<T>>,
    aop: Vec<T>,
    dop: Vec<T>,
    theta: T,
}

impl<T: Real> TemplateMatcher<T> {
    pub fn new(imager: Imager<T>, given: &ImageSet<T>, theta: T) -> Result<Self> {
        let cam = imager.camera();
        if given.rows() != cam.rows() || given.cols() != cam.cols() {
            return Err(Error::Consistency(format!(
                "given image is {}x{}, camera is {}x{}",
                given.rows(),
                given.cols(),
                cam.rows(),
                cam.cols()
            )));
        }
        let (mut rays, mut aop, mut dop) = (Vec::new(), Vec::new(), Vec::new());
        let table = imager.rays();
        for (&idx, ray) in table.indices().iter().zip(table.rays()) {
            if given.mask()[idx] {
                rays.push(*ray);
                aop.push(given.aop[idx]);
                dop.push(given.dop[idx]);
            }
        }
        if rays.is_empty() {
            return Err(Error::NoOverlap);
        }
        Ok(Self {
            imager,
            rays,
            aop,
            dop,
            theta,
        })
    }

    pub fn imager(&self) -> &Imager<T> {
        &self.imager
    }

    pub fn pixel_count(&self) -> usize {
        self.rays.len()
    }
}

impl<T: Real> Objective<T> for TemplateMatcher<T> {
    fn evaluate(&self, attitude: &Attitude<T>) -> Result<T> {
        let frame = self.imager.frame(attitude)?;
        let mut j = T::zero();
        for k in 0..self.rays.len() {
            let (aop_s, dop_s) = self.imager.shade_polarization(&frame, &self.rays[k])?;
            j -= pixel_cost(self.aop[k], self.dop[k], aop_s, dop_s, self.theta);
        }
        Ok(j)
    }
}
