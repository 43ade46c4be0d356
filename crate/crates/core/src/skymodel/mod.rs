//! Combined sky model: the four-neutral-point polarization field for AOP and
//! DOP, and the nine-coefficient luminance model for LI.
//!
//! Everything here is expressed in the sun-following frame. The sun sits at
//! azimuth 0, zenith angle `theta_s`.

mod atmosphere;
mod berry;
mod hosek;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

pub use atmosphere::{Atmosphere, DefaultAtmosphere, ViewAngles};
pub use berry::{
    aop, aop_of, berry_w, place_neutral_points, BerryField, LinearOffsetRule, NeutralPointRule,
    NeutralPoints, MIN_NEUTRAL_ZENITH_DEG,
};
pub use hosek::{chi, li, HosekCoefficients, HosekModel};

use crate::error::{Error, Result};
use crate::geometry::{dot, vector_to_complex, SkyDirection, Vec3};
use crate::scalar::Real;

/// Sun position and atmospheric state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkyParams<T> {
    /// degrees, `[0, 90]`
    pub solar_zenith: T,
    /// degrees from North toward East, `[-180, 180]`
    pub solar_azimuth: T,
    /// `[1, 10]`
    pub turbidity: T,
    /// `[0, 1]`
    pub albedo: T,
    /// nanometres, `[320, 720]`
    pub wavelength: T,
}

impl<T: Real> SkyParams<T> {
    pub fn new(
        solar_zenith: T,
        solar_azimuth: T,
        turbidity: T,
        albedo: T,
        wavelength: T,
    ) -> Result<Self> {
        let p = Self {
            solar_zenith,
            solar_azimuth,
            turbidity,
            albedo,
            wavelength,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters from the solar altitude `h_s = 90 - theta_s`.
    pub fn from_altitude(
        solar_altitude: T,
        solar_azimuth: T,
        turbidity: T,
        albedo: T,
        wavelength: T,
    ) -> Result<Self> {
        Self::new(
            T::lit(90.0) - solar_altitude,
            solar_azimuth,
            turbidity,
            albedo,
            wavelength,
        )
    }

    pub fn solar_altitude(&self) -> T {
        T::lit(90.0) - self.solar_zenith
    }

    pub fn validate(&self) -> Result<()> {
        let check = |what, v: T, lo: f64, hi: f64, domain| {
            if v >= T::lit(lo) && v <= T::lit(hi) {
                Ok(())
            } else {
                Err(Error::domain(what, v.as_f64(), domain))
            }
        };
        check("solar zenith", self.solar_zenith, 0.0, 90.0, "[0, 90] deg")?;
        check("solar azimuth", self.solar_azimuth, -180.0, 180.0, "[-180, 180] deg")?;
        check("turbidity", self.turbidity, 1.0, 10.0, "[1, 10]")?;
        check("albedo", self.albedo, 0.0, 1.0, "[0, 1]")?;
        check("wavelength", self.wavelength, 320.0, 720.0, "[320, 720] nm")
    }

    pub fn sun_direction(&self) -> SkyDirection<T> {
        SkyDirection::new(self.solar_zenith, T::zero())
    }
}

/// Pluggable pieces of the sky model.
#[derive(Clone)]
pub struct SkyConfig<T: Real> {
    pub atmosphere: Arc<dyn Atmosphere<T>>,
    pub luminance: HosekModel<T>,
    pub neutral_rule: Arc<dyn NeutralPointRule<T>>,
}

impl<T: Real> Default for SkyConfig<T> {
    fn default() -> Self {
        Self {
            atmosphere: Arc::new(DefaultAtmosphere),
            luminance: HosekModel::default(),
            neutral_rule: Arc::new(LinearOffsetRule::default()),
        }
    }
}

impl<T: Real> fmt::Debug for SkyConfig<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkyConfig")
            .field("luminance", &self.luminance)
            .finish_non_exhaustive()
    }
}

/// DOP before clamping: `|w| (theta E + (pi/2 - theta) S) M_DOP`, with the
/// blend weights in radians.
pub fn dop_unclamped<T: Real>(
    w_abs: T,
    view: &ViewAngles<T>,
    params: &SkyParams<T>,
    atmosphere: &dyn Atmosphere<T>,
) -> T {
    let theta = view.zenith_deg.to_radians();
    let e = atmosphere.ground_depolarization(view.zenith_deg, params.albedo);
    let s = atmosphere.spectral(view, params.wavelength);
    w_abs * (theta * e + (T::FRAC_PI_2() - theta) * s) * atmosphere.max_dop(params.turbidity)
}

#[inline]
fn clamp_unit<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// Degree of polarization at projected point `z` seen in direction `d`,
/// `gamma_deg` from the sun. Clamped to `[0, 1]`.
pub fn dop<T: Real>(
    z: Complex<T>,
    np: &NeutralPoints<T>,
    d: &SkyDirection<T>,
    gamma_deg: T,
    params: &SkyParams<T>,
    atmosphere: &dyn Atmosphere<T>,
) -> Result<T> {
    let w = berry_w(z, np)?;
    let view = ViewAngles::new(d.zenith, gamma_deg);
    Ok(clamp_unit(dop_unclamped(w.norm(), &view, params, atmosphere)))
}

/// Polarization E-vector `(sin A, cos A, -(sin A sin phi + cos A cos phi) tan theta)`
/// in the sun-following frame, `A` the AOP in degrees.
pub fn evector<T: Real>(d: &SkyDirection<T>, aop_deg: T) -> Result<Vec3<T>> {
    if !(d.zenith < T::lit(90.0)) {
        return Err(Error::HorizonSingularity(d.zenith.as_f64()));
    }
    let (sa, ca) = aop_deg.to_radians().sin_cos();
    let (sp, cp) = d.azimuth.to_radians().sin_cos();
    let t = d.zenith.to_radians().tan();
    Ok([sa, ca, -(sa * sp + ca * cp) * t])
}

/// Same vector as [`evector`] from a unit viewing vector and the unit phasor
/// `(cos A, sin A)`, without trigonometry.
#[cfg(test)]
pub(crate) fn evector_from_vector<T: Real>(v: &Vec3<T>, cos_a: T, sin_a: T) -> Vec3<T> {
    [sin_a, cos_a, -(sin_a * v[0] + cos_a * v[1]) / v[2]]
}

/// Model outputs at one sky direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkySample<T> {
    /// `arg(w)`, degrees in `(-180, 180]`, NaN at neutral points
    pub aop: T,
    pub dop: T,
    pub li: T,
    pub w: Complex<T>,
}

/// A sky model instantiated for one set of [`SkyParams`].
#[derive(Clone)]
pub struct SkyModel<T: Real> {
    params: SkyParams<T>,
    neutral: NeutralPoints<T>,
    field: BerryField<T>,
    luminance: HosekCoefficients<T>,
    atmosphere: Arc<dyn Atmosphere<T>>,
    sun: Vec3<T>,
    max_dop: T,
}

impl<T: Real> fmt::Debug for SkyModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkyModel")
            .field("params", &self.params)
            .field("neutral", &self.neutral)
            .field("luminance", &self.luminance)
            .finish_non_exhaustive()
    }
}

/// Pieces of a sample needed for template matching.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Polarization<T> {
    pub w: Complex<T>,
    pub w_abs: T,
    pub dop: T,
}

impl<T: Real> SkyModel<T> {
    pub fn new(params: SkyParams<T>, config: &SkyConfig<T>) -> Result<Self> {
        params.validate()?;
        let neutral = place_neutral_points(&params, config.neutral_rule.as_ref())?;
        let luminance = config
            .luminance
            .coefficients(params.turbidity, params.albedo)?;
        Self::with_parts(params, neutral, luminance, config.atmosphere.clone())
    }

    pub fn with_parts(
        params: SkyParams<T>,
        neutral: NeutralPoints<T>,
        luminance: HosekCoefficients<T>,
        atmosphere: Arc<dyn Atmosphere<T>>,
    ) -> Result<Self> {
        let field = BerryField::new(&neutral)?;
        let sun = params.sun_direction().to_vector();
        let max_dop = atmosphere.max_dop(params.turbidity);
        Ok(Self {
            params,
            neutral,
            field,
            luminance,
            atmosphere,
            sun,
            max_dop,
        })
    }

    pub fn params(&self) -> &SkyParams<T> {
        &self.params
    }

    pub fn neutral_points(&self) -> &NeutralPoints<T> {
        &self.neutral
    }

    pub fn luminance(&self) -> &HosekCoefficients<T> {
        &self.luminance
    }

    pub fn atmosphere(&self) -> &dyn Atmosphere<T> {
        self.atmosphere.as_ref()
    }

    /// Sun direction as a unit vector in the sun-following frame.
    pub fn sun_vector(&self) -> Vec3<T> {
        self.sun
    }

    pub fn sample(&self, d: &SkyDirection<T>) -> Result<SkySample<T>> {
        if !(d.zenith >= T::zero() && d.zenith < T::lit(90.0)) {
            return Err(Error::domain("zenith angle", d.zenith.as_f64(), "[0, 90) deg"));
        }
        Ok(self.sample_vector(&d.to_vector()))
    }

    /// Sample at a unit vector in the sun-following frame with `v[2] > 0`.
    pub fn sample_vector(&self, v: &Vec3<T>) -> SkySample<T> {
        let p = self.polarization(v);
        let cos_gamma = self.cos_gamma(v);
        SkySample {
            aop: aop_of(p.w),
            dop: p.dop,
            li: self.luminance_at(v[2], cos_gamma),
            w: p.w,
        }
    }

    #[inline]
    fn cos_gamma(&self, v: &Vec3<T>) -> T {
        dot(v, &self.sun).max(-T::one()).min(T::one())
    }

    #[inline]
    pub(crate) fn polarization(&self, v: &Vec3<T>) -> Polarization<T> {
        let z = vector_to_complex(v);
        let w = self.field.eval(z);
        let w_abs = w.norm_sqr().sqrt();
        let zenith_rad = v[2].min(T::one()).acos();
        let view = ViewAngles {
            zenith_deg: zenith_rad.to_degrees(),
            cos_gamma: self.cos_gamma(v),
        };
        let e = self
            .atmosphere
            .ground_depolarization(view.zenith_deg, self.params.albedo);
        let s = self.atmosphere.spectral(&view, self.params.wavelength);
        let raw = w_abs * (zenith_rad * e + (T::FRAC_PI_2() - zenith_rad) * s) * self.max_dop;
        Polarization {
            w,
            w_abs,
            dop: clamp_unit(raw),
        }
    }

    #[inline]
    pub(crate) fn luminance_at(&self, cos_zenith: T, cos_gamma: T) -> T {
        self.luminance
            .radiance(cos_zenith, cos_gamma, cos_gamma.acos())
    }

    /// DOP before clamping at `d`; used to inspect how far the default
    /// atmospheric factors push the field over 1.
    pub fn dop_unclamped_at(&self, d: &SkyDirection<T>) -> T {
        let v = d.to_vector();
        let w = self.field.eval(vector_to_complex(&v));
        let view = ViewAngles {
            zenith_deg: d.zenith,
            cos_gamma: self.cos_gamma(&v),
        };
        dop_unclamped(w.norm(), &view, &self.params, self.atmosphere.as_ref())
    }
}

/// Evaluate AOP, DOP and LI at one direction for the given parameters.
pub fn sample_sky<T: Real>(
    d: &SkyDirection<T>,
    params: &SkyParams<T>,
    config: &SkyConfig<T>,
) -> Result<SkySample<T>> {
    SkyModel::new(*params, config)?.sample(d)
}
