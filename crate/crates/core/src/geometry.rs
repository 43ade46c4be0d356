//! Frames, Euler rotations, the complex-plane sky projection and the two
//! cyclic difference functions used by the matcher and the optimizer.
//!
//! Frames:
//! - geographic: East-North-Zenith, right-handed.
//! - sun-following: `Z_f` at the zenith, `Y_f` along the solar azimuth,
//!   `X_f = Y_f x Z_f`.
//! - body/camera: boresight along `+Z`; at zero attitude the body axes coincide
//!   with the geographic axes.
//!
//! Sky directions carry a zenith angle and an azimuth measured in the
//! sun-following frame from `Y_f` toward `X_f`, so the unit vector of
//! `(theta, phi)` is `(sin theta sin phi, sin theta cos phi, cos theta)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Vec3<T> = [T; 3];

#[inline]
pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

/// Camera attitude as yaw/pitch/roll in degrees (Z-Y-X sequence).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Attitude<T> {
    pub yaw: T,
    pub pitch: T,
    pub roll: T,
}

impl<T: Real> Attitude<T> {
    pub fn new(yaw: T, pitch: T, roll: T) -> Self {
        Self { yaw, pitch, roll }
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.yaw, self.pitch, self.roll]
    }

    /// `90 - fov/2`: the largest pitch, roll or `|pitch| + |roll|` that keeps
    /// the whole field of view above the horizon.
    pub fn tilt_limit(fov: T) -> T {
        T::lit(90.0) - fov / T::lit(2.0)
    }

    pub fn is_feasible(&self, fov: T) -> bool {
        self.validate(fov).is_ok()
    }

    pub fn validate(&self, fov: T) -> Result<()> {
        let lim = Self::tilt_limit(fov);
        let tol = T::lit(1e-9).max(T::epsilon() * T::lit(256.0));
        let half_turn = T::lit(180.0);
        if !(self.yaw.abs() <= half_turn) {
            return Err(Error::domain("yaw", self.yaw.as_f64(), "[-180, 180] deg"));
        }
        if !(self.pitch.abs() <= lim + tol) {
            return Err(Error::domain(
                "pitch",
                self.pitch.as_f64(),
                "[-(90 - FOV/2), 90 - FOV/2] deg",
            ));
        }
        if !(self.roll.abs() <= lim + tol) {
            return Err(Error::domain(
                "roll",
                self.roll.as_f64(),
                "[-(90 - FOV/2), 90 - FOV/2] deg",
            ));
        }
        let tilt = self.pitch.abs() + self.roll.abs();
        if !(tilt <= lim + tol) {
            return Err(Error::domain(
                "|pitch| + |roll|",
                tilt.as_f64(),
                "[0, 90 - FOV/2] deg",
            ));
        }
        Ok(())
    }
}

/// A direction on the sky in the sun-following frame, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SkyDirection<T> {
    pub zenith: T,
    pub azimuth: T,
}

impl<T: Real> SkyDirection<T> {
    pub fn new(zenith: T, azimuth: T) -> Self {
        Self { zenith, azimuth }
    }

    pub fn zenith_point() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn to_vector(self) -> Vec3<T> {
        let (st, ct) = self.zenith.to_radians().sin_cos();
        let (sp, cp) = self.azimuth.to_radians().sin_cos();
        [st * sp, st * cp, ct]
    }

    /// Direction of a (not necessarily unit) vector. The azimuth of the zenith
    /// and nadir is reported as 0.
    pub fn from_vector(v: &Vec3<T>) -> Self {
        let horiz = v[0].hypot(v[1]);
        let zenith = horiz.atan2(v[2]).to_degrees();
        let azimuth = if horiz == T::zero() {
            T::zero()
        } else {
            v[0].atan2(v[1]).to_degrees()
        };
        Self::new(zenith, azimuth)
    }

    pub fn antipode(self) -> Self {
        Self::new(
            T::lit(180.0) - self.zenith,
            wrap_signed_yaw(self.azimuth + T::lit(180.0)),
        )
    }
}

/// Row-major 3x3 rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<T> {
    m: [[T; 3]; 3],
}

impl<T: Real> Rotation<T> {
    pub fn from_rows(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self::from_rows([[o, z, z], [z, o, z], [z, z, o]])
    }

    pub fn about_x(deg: T) -> Self {
        let (s, c) = deg.to_radians().sin_cos();
        let (o, z) = (T::one(), T::zero());
        Self::from_rows([[o, z, z], [z, c, -s], [z, s, c]])
    }

    pub fn about_y(deg: T) -> Self {
        let (s, c) = deg.to_radians().sin_cos();
        let (o, z) = (T::one(), T::zero());
        Self::from_rows([[c, z, s], [z, o, z], [-s, z, c]])
    }

    pub fn about_z(deg: T) -> Self {
        let (s, c) = deg.to_radians().sin_cos();
        let (o, z) = (T::one(), T::zero());
        Self::from_rows([[c, -s, z], [s, c, z], [z, z, o]])
    }

    pub fn rows(&self) -> &[[T; 3]; 3] {
        &self.m
    }

    #[inline]
    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// `R^T v`, the inverse rotation.
    #[inline]
    pub fn apply_inverse(&self, v: &Vec3<T>) -> Vec3<T> {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
            m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
            m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self::from_rows([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        Self::from_rows(out)
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest absolute entry of `R R^T - I`.
    pub fn orthogonality_error(&self) -> T {
        let p = self.compose(&self.transpose());
        let mut worst = T::zero();
        for (i, row) in p.m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

/// Body-to-geographic rotation `Rz(yaw) Ry(pitch) Rx(roll)`.
///
/// Positive yaw turns the body X axis from East toward North.
pub fn attitude_to_rotation<T: Real>(a: &Attitude<T>) -> Rotation<T> {
    Rotation::about_z(a.yaw)
        .compose(&Rotation::about_y(a.pitch))
        .compose(&Rotation::about_x(a.roll))
}

/// Geographic-to-sun-following rotation for a solar azimuth measured from
/// North toward East. `v_sun = R v_geo`.
pub fn geographic_to_sun_frame<T: Real>(solar_azimuth: T) -> Rotation<T> {
    Rotation::about_z(solar_azimuth)
}

/// Body-to-sun-following rotation.
pub fn body_to_sun_frame<T: Real>(a: &Attitude<T>, solar_azimuth: T) -> Rotation<T> {
    geographic_to_sun_frame(solar_azimuth).compose(&attitude_to_rotation(a))
}

/// Cyclic AOP difference: maps `x` in `[-180, 180]` to `[0, 90]`.
pub fn wrap_aop_diff<T: Real>(x: T) -> Result<T> {
    let h = T::lit(180.0);
    if !(x >= -h && x <= h) {
        return Err(Error::domain("AOP difference", x.as_f64(), "[-180, 180] deg"));
    }
    Ok(aop_diff_unchecked(x))
}

#[inline]
pub(crate) fn aop_diff_unchecked<T: Real>(x: T) -> T {
    let q = T::lit(90.0);
    let h = T::lit(180.0);
    if x < -q {
        h + x
    } else if x < T::zero() {
        -x
    } else if x <= q {
        x
    } else {
        h - x
    }
}

/// Cyclic yaw difference: maps `x` in `[-360, 360]` to `[0, 180]`.
pub fn wrap_yaw_diff<T: Real>(x: T) -> Result<T> {
    let f = T::lit(360.0);
    if !(x >= -f && x <= f) {
        return Err(Error::domain("yaw difference", x.as_f64(), "[-360, 360] deg"));
    }
    Ok(yaw_diff_unchecked(x))
}

#[inline]
pub(crate) fn yaw_diff_unchecked<T: Real>(x: T) -> T {
    let h = T::lit(180.0);
    let f = T::lit(360.0);
    if x < -h {
        x + f
    } else if x < T::zero() {
        -x
    } else if x <= h {
        x
    } else {
        f - x
    }
}

/// Signed angle in `(-180, 180]` congruent to `x` modulo 360. Its magnitude
/// equals [`wrap_yaw_diff`] on that function's domain.
pub fn wrap_signed_yaw<T: Real>(x: T) -> T {
    let f = T::lit(360.0);
    let h = T::lit(180.0);
    if x > -h && x <= h {
        return x;
    }
    let mut r = x % f;
    if r > h {
        r -= f;
    } else if r <= -h {
        r += f;
    }
    r
}

/// Signed angle in `(-90, 90]` congruent to `x` modulo 180.
pub fn wrap_half_turn<T: Real>(x: T) -> T {
    let h = T::lit(180.0);
    let q = T::lit(90.0);
    let mut r = x % h;
    if r > q {
        r -= h;
    } else if r <= -q {
        r += h;
    }
    r
}

/// Stereographic projection from the nadir: `tan(theta/2) e^{i mu}` with
/// `mu = 90 - azimuth` measured from `X_m` toward `Y_m`.
pub fn sky_to_complex<T: Real>(d: &SkyDirection<T>) -> Result<Complex<T>> {
    let h = T::lit(180.0);
    if !(d.zenith >= T::zero() && d.zenith <= h) {
        return Err(Error::domain("zenith angle", d.zenith.as_f64(), "[0, 180] deg"));
    }
    if d.zenith == h {
        return Err(Error::ProjectionAtInfinity);
    }
    let r = (d.zenith / T::lit(2.0)).to_radians().tan();
    let mu = (T::lit(90.0) - d.azimuth).to_radians();
    Ok(Complex::from_polar(r, mu))
}

/// Projection of a vector in the sun-following frame; same mapping as
/// [`sky_to_complex`] for unit vectors, without trigonometry.
#[inline]
pub(crate) fn vector_to_complex<T: Real>(v: &Vec3<T>) -> Complex<T> {
    let s = (T::one() + v[2]).recip();
    Complex::new(v[0] * s, v[1] * s)
}

/// Inverse of [`sky_to_complex`].
pub fn complex_to_sky<T: Real>(z: Complex<T>) -> SkyDirection<T> {
    let zenith = T::lit(2.0) * z.norm().atan().to_degrees();
    let azimuth = if z.re == T::zero() && z.im == T::zero() {
        T::zero()
    } else {
        wrap_signed_yaw(T::lit(90.0) - z.im.atan2(z.re).to_degrees())
    };
    SkyDirection::new(zenith, azimuth)
}

/// Great-circle angle between two sky directions, degrees in `[0, 180]`.
pub fn angular_separation<T: Real>(a: &SkyDirection<T>, b: &SkyDirection<T>) -> T {
    let (sa, ca) = a.zenith.to_radians().sin_cos();
    let (sb, cb) = b.zenith.to_radians().sin_cos();
    let c = ca * cb + sa * sb * (a.azimuth - b.azimuth).to_radians().cos();
    c.max(-T::one()).min(T::one()).acos().to_degrees()
}
