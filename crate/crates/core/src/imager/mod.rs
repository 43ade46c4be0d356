//! Hypothetical fisheye polarization camera.
//!
//! Rasters are `rows x cols`, row-major. The camera frame has `+X` along the
//! pixel rows (increasing column index), `+Y` along increasing row index and
//! `+Z` on the boresight. The principal point is the raster centre and the
//! lens is equidistant: the off-axis angle grows linearly with the radial
//! pixel distance and reaches `FOV/2` on the inscribed circle.

mod noise;
mod raster;
mod sectors;

use std::sync::Arc;

pub use noise::{add_noise, NoiseScale, NoiseSpec};
pub use raster::{read_pfm, read_pgm, write_pfm, write_pgm, Pfm};
pub use sectors::{com_score, sector_ratios, sector_sums};

use crate::error::{Error, Result};
use crate::geometry::{body_to_sun_frame, Attitude, Rotation, Vec3};
use crate::scalar::Real;
use crate::skymodel::{SkyConfig, SkyModel, SkyParams};

/// Field of view of the reference imager, degrees.
pub const REFERENCE_FOV: f64 = 107.95;
/// Pixels in the row direction (number of rows) of the reference imager.
pub const REFERENCE_ROWS: usize = 2048;
/// Pixels in the column direction (number of columns) of the reference imager.
pub const REFERENCE_COLS: usize = 2448;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel<T> {
    fov: T,
    rows: usize,
    cols: usize,
}

impl<T: Real> CameraModel<T> {
    pub fn new(fov: T, rows: usize, cols: usize) -> Result<Self> {
        if !(fov > T::zero() && fov < T::lit(180.0)) {
            return Err(Error::domain("field of view", fov.as_f64(), "(0, 180) deg"));
        }
        if rows < 8 || cols < 8 {
            return Err(Error::Parameter(format!(
                "raster {rows}x{cols} is smaller than 8x8"
            )));
        }
        Ok(Self { fov, rows, cols })
    }

    /// The 2048 x 2448, 107.95 deg reference imager.
    pub fn reference() -> Self {
        Self {
            fov: T::lit(REFERENCE_FOV),
            rows: REFERENCE_ROWS,
            cols: REFERENCE_COLS,
        }
    }

    /// Reference imager with both raster dimensions divided by `scale` (floored).
    pub fn scaled(fov: T, scale: usize) -> Result<Self> {
        if scale == 0 {
            return Err(Error::Parameter("resolution scale must be >= 1".into()));
        }
        Self::new(fov, REFERENCE_ROWS / scale, REFERENCE_COLS / scale)
    }

    pub fn fov(&self) -> T {
        self.fov
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `(x, y)` of the principal point in continuous pixel coordinates.
    pub fn principal_point(&self) -> (T, T) {
        let two = T::lit(2.0);
        (
            T::from_usize_lossy(self.cols) / two,
            T::from_usize_lossy(self.rows) / two,
        )
    }

    pub fn inscribed_radius(&self) -> T {
        T::from_usize_lossy(self.rows.min(self.cols)) / T::lit(2.0)
    }

    /// Unit ray in the camera frame for continuous pixel coordinates `(x, y)`
    /// (`x` along the row, pixel `(r, c)` centred at `(c + 0.5, r + 0.5)`).
    /// `None` outside the field of view.
    pub fn pixel_to_ray(&self, x: T, y: T) -> Result<Option<Vec3<T>>> {
        let w = T::from_usize_lossy(self.cols);
        let h = T::from_usize_lossy(self.rows);
        if !(x >= T::zero() && x <= w && y >= T::zero() && y <= h) {
            return Err(Error::PixelOutOfBounds {
                x: x.as_f64(),
                y: y.as_f64(),
                cols: self.cols,
                rows: self.rows,
            });
        }
        let (cx, cy) = self.principal_point();
        let (dx, dy) = (x - cx, y - cy);
        let r = dx.hypot(dy);
        let half = self.fov / T::lit(2.0);
        let off_axis = r * half / self.inscribed_radius();
        if off_axis > half {
            return Ok(None);
        }
        if r == T::zero() {
            return Ok(Some([T::zero(), T::zero(), T::one()]));
        }
        let (s, c) = off_axis.to_radians().sin_cos();
        Ok(Some([s * dx / r, s * dy / r, c]))
    }

    /// Ray through the centre of pixel `(row, col)`.
    pub fn pixel_center_ray(&self, row: usize, col: usize) -> Result<Option<Vec3<T>>> {
        let half = T::lit(0.5);
        self.pixel_to_ray(
            T::from_usize_lossy(col) + half,
            T::from_usize_lossy(row) + half,
        )
    }

    /// Rays of every pixel centre inside the field of view.
    pub fn rays(&self) -> CameraRays<T> {
        let mut indices = Vec::new();
        let mut rays = Vec::new();
        let mut mask = vec![false; self.rows * self.cols];
        for row in 0..self.rows {
            for col in 0..self.cols {
                if let Ok(Some(ray)) = self.pixel_center_ray(row, col) {
                    let idx = row * self.cols + col;
                    indices.push(idx);
                    rays.push(ray);
                    mask[idx] = true;
                }
            }
        }
        CameraRays {
            camera: *self,
            indices,
            rays,
            mask,
        }
    }
}

/// Precomputed pixel rays of a camera, in row-major order of valid pixels.
#[derive(Debug, Clone)]
pub struct CameraRays<T> {
    camera: CameraModel<T>,
    indices: Vec<usize>,
    rays: Vec<Vec3<T>>,
    mask: Vec<bool>,
}

impl<T: Real> CameraRays<T> {
    pub fn camera(&self) -> &CameraModel<T> {
        &self.camera
    }

    /// Raster indices of the valid pixels.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn rays(&self) -> &[Vec3<T>] {
        &self.rays
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }
}

/// Co-registered AOP / DOP / LI rasters with their validity mask.
///
/// AOP is in degrees with modulo-180 meaning (rendered values lie in
/// `(-90, 90]`; NaN where undefined). Invalid pixels hold 0 in every channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSet<T> {
    rows: usize,
    cols: usize,
    pub aop: Vec<T>,
    pub dop: Vec<T>,
    pub li: Vec<T>,
    mask: Vec<bool>,
}

impl<T: Real> ImageSet<T> {
    /// Blank image with the given mask; all channels zero.
    pub fn blank(rows: usize, cols: usize, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != rows * cols {
            return Err(Error::Parameter(format!(
                "mask has {} entries, raster is {rows}x{cols}",
                mask.len()
            )));
        }
        let n = rows * cols;
        Ok(Self {
            rows,
            cols,
            aop: vec![T::zero(); n],
            dop: vec![T::zero(); n],
            li: vec![T::zero(); n],
            mask,
        })
    }

    pub fn from_channels(
        rows: usize,
        cols: usize,
        aop: Vec<T>,
        dop: Vec<T>,
        li: Vec<T>,
        mask: Vec<bool>,
    ) -> Result<Self> {
        let n = rows * cols;
        if aop.len() != n || dop.len() != n || li.len() != n || mask.len() != n {
            return Err(Error::Parameter(format!(
                "channel sizes do not match the {rows}x{cols} raster"
            )));
        }
        Ok(Self {
            rows,
            cols,
            aop,
            dop,
            li,
            mask,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// Values of one pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelSample<T> {
    pub aop: T,
    pub dop: T,
    pub li: T,
}

/// A camera looking at one sky model.
#[derive(Debug, Clone)]
pub struct Imager<T: Real> {
    rays: Arc<CameraRays<T>>,
    sky: SkyModel<T>,
}

impl<T: Real> Imager<T> {
    pub fn new(camera: CameraModel<T>, sky: SkyModel<T>) -> Self {
        Self::with_rays(Arc::new(camera.rays()), sky)
    }

    /// Share a precomputed ray table between imagers of the same camera.
    pub fn with_rays(rays: Arc<CameraRays<T>>, sky: SkyModel<T>) -> Self {
        Self { rays, sky }
    }

    pub fn camera(&self) -> &CameraModel<T> {
        self.rays.camera()
    }

    pub fn rays(&self) -> &Arc<CameraRays<T>> {
        &self.rays
    }

    pub fn sky(&self) -> &SkyModel<T> {
        &self.sky
    }

    /// Camera-to-sun-following rotation for `attitude`.
    pub fn frame(&self, attitude: &Attitude<T>) -> Result<Rotation<T>> {
        attitude.validate(self.camera().fov())?;
        Ok(body_to_sun_frame(
            attitude,
            self.sky.params().solar_azimuth,
        ))
    }

    /// Image-plane AOP and DOP for one camera ray.
    #[inline]
    pub(crate) fn shade_polarization(&self, frame: &Rotation<T>, ray: &Vec3<T>) -> Result<(T, T)> {
        let v = frame.apply(ray);
        if !(v[2] > T::zero()) {
            return Err(Error::Consistency(format!(
                "camera ray maps below the horizon (z = {})",
                v[2]
            )));
        }
        let p = self.sky.polarization(&v);
        let aop = if p.w_abs == T::zero() {
            T::nan()
        } else {
            image_plane_aop(frame, &v, p.w.re, p.w.im)
        };
        Ok((aop, p.dop))
    }

    #[inline]
    fn shade(&self, frame: &Rotation<T>, ray: &Vec3<T>) -> Result<PixelSample<T>> {
        let (aop, dop) = self.shade_polarization(frame, ray)?;
        let v = frame.apply(ray);
        let cos_gamma = crate::geometry::dot(&v, &self.sky.sun_vector())
            .max(-T::one())
            .min(T::one());
        Ok(PixelSample {
            aop,
            dop,
            li: self.sky.luminance_at(v[2], cos_gamma),
        })
    }

    pub fn render(&self, attitude: &Attitude<T>) -> Result<ImageSet<T>> {
        let frame = self.frame(attitude)?;
        let cam = self.camera();
        let mut img = ImageSet::blank(cam.rows(), cam.cols(), self.rays.mask().to_vec())?;
        for (&idx, ray) in self.rays.indices().iter().zip(self.rays.rays()) {
            let s = self.shade(&frame, ray)?;
            img.aop[idx] = s.aop;
            img.dop[idx] = s.dop;
            img.li[idx] = s.li;
        }
        Ok(img)
    }

    /// Values of a single pixel; `None` outside the field of view.
    pub fn sample_pixel(
        &self,
        attitude: &Attitude<T>,
        row: usize,
        col: usize,
    ) -> Result<Option<PixelSample<T>>> {
        let frame = self.frame(attitude)?;
        match self.camera().pixel_center_ray(row, col)? {
            Some(ray) => Ok(Some(self.shade(&frame, &ray)?)),
            None => Ok(None),
        }
    }
}

/// Angle of the projected E-vector from the camera `+X` axis, in `(-90, 90]`.
/// `(cos_a, sin_a)` is any positive multiple of the sky AOP phasor and `v`
/// the unit view vector (`v[2] > 0`), both in the sun-following frame.
#[inline]
pub(crate) fn image_plane_aop<T: Real>(frame: &Rotation<T>, v: &Vec3<T>, cos_a: T, sin_a: T) -> T {
    // E-vector scaled by v[2] > 0, which leaves its direction unchanged
    let e = [sin_a * v[2], cos_a * v[2], -(sin_a * v[0] + cos_a * v[1])];
    let m = frame.rows();
    let ex = m[0][0] * e[0] + m[1][0] * e[1] + m[2][0] * e[2];
    let ey = m[0][1] * e[0] + m[1][1] * e[1] + m[2][1] * e[2];
    let a = ey.atan2(ex).to_degrees();
    let (q, h) = (T::lit(90.0), T::lit(180.0));
    if a > q {
        a - h
    } else if a <= -q {
        a + h
    } else {
        a
    }
}

/// Render the three channels for `attitude` under `params`.
pub fn render<T: Real>(
    attitude: &Attitude<T>,
    params: &SkyParams<T>,
    camera: &CameraModel<T>,
    sky: &SkyConfig<T>,
) -> Result<ImageSet<T>> {
    Imager::new(*camera, SkyModel::new(*params, sky)?).render(attitude)
}

/// All-sky map of the model in the sun-following frame: an azimuthal
/// equidistant disc of diameter `size` pixels, zenith at the centre, `+X_f`
/// to the right and the sun toward decreasing row index. AOP is the sky AOP
/// (`arg w`), not an image-plane angle.
pub fn render_sky_map<T: Real>(sky: &SkyModel<T>, size: usize) -> Result<ImageSet<T>> {
    if size < 8 {
        return Err(Error::Parameter("sky map must be at least 8 pixels".into()));
    }
    let n = size * size;
    let mut mask = vec![false; n];
    let mut img = ImageSet::blank(size, size, vec![false; n])?;
    let c = T::from_usize_lossy(size) / T::lit(2.0);
    for row in 0..size {
        for col in 0..size {
            let dx = T::from_usize_lossy(col) + T::lit(0.5) - c;
            let dy = c - (T::from_usize_lossy(row) + T::lit(0.5));
            let zenith = dx.hypot(dy) / c * T::lit(90.0);
            if zenith >= T::lit(90.0) {
                continue;
            }
            let azimuth = dx.atan2(dy).to_degrees();
            let s = sky.sample(&crate::geometry::SkyDirection::new(zenith, azimuth))?;
            let idx = row * size + col;
            mask[idx] = true;
            img.aop[idx] = s.aop;
            img.dop[idx] = s.dop;
            img.li[idx] = s.li;
        }
    }
    img.mask = mask;
    Ok(img)
}
