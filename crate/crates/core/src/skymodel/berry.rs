//! Four-singularity complex polarization field and neutral-point placement.

use num_complex::Complex;

use super::SkyParams;
use crate::error::{Error, Result};
use crate::geometry::{sky_to_complex, SkyDirection};
use crate::scalar::Real;

/// Smallest zenith angle given to a neutral point. A point exactly at the
/// zenith projects to 0, where `1/conj(z)` is undefined.
pub const MIN_NEUTRAL_ZENITH_DEG: f64 = 1e-6;

/// The two independent neutral points (Babinet `plus`, Brewster `minus`) in
/// the complex plane. The remaining two are `-1/conj(plus)` and `-1/conj(minus)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralPoints<T> {
    plus: Complex<T>,
    minus: Complex<T>,
}

impl<T: Real> NeutralPoints<T> {
    pub fn new(plus: Complex<T>, minus: Complex<T>) -> Result<Self> {
        let finite = |z: Complex<T>| z.re.is_finite() && z.im.is_finite();
        if !finite(plus) || !finite(minus) {
            return Err(Error::DegenerateNeutralPoints(
                "neutral points must be finite".into(),
            ));
        }
        if plus == minus {
            return Err(Error::DegenerateNeutralPoints(
                "the two neutral points coincide".into(),
            ));
        }
        Ok(Self { plus, minus })
    }

    pub fn plus(&self) -> Complex<T> {
        self.plus
    }

    pub fn minus(&self) -> Complex<T> {
        self.minus
    }

    /// All four zeros of the field. Fails if `plus` or `minus` is 0.
    pub fn all(&self) -> Result<[Complex<T>; 4]> {
        let f = BerryField::new(self)?;
        Ok([self.plus, self.minus, -f.plus_reflected, -f.minus_reflected])
    }
}

/// Angular offset of the Babinet and Brewster points from the sun along the
/// solar meridian.
pub trait NeutralPointRule<T: Real>: Send + Sync {
    fn offset(&self, params: &SkyParams<T>) -> T;
}

/// `delta = clamp(base + slope (T - reference_turbidity), min, max)` degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOffsetRule<T> {
    pub base: T,
    pub slope: T,
    pub reference_turbidity: T,
    pub min: T,
    pub max: T,
}

impl<T: Real> Default for LinearOffsetRule<T> {
    fn default() -> Self {
        Self {
            base: T::lit(15.0),
            slope: T::lit(2.0),
            reference_turbidity: T::lit(3.0),
            min: T::lit(5.0),
            max: T::lit(30.0),
        }
    }
}

impl<T: Real> NeutralPointRule<T> for LinearOffsetRule<T> {
    fn offset(&self, params: &SkyParams<T>) -> T {
        let d = self.base + self.slope * (params.turbidity - self.reference_turbidity);
        d.max(self.min).min(self.max)
    }
}

/// Babinet point at `theta_s - delta` and Brewster point at `theta_s + delta`
/// on the solar meridian (sun-following frame). A negative Babinet zenith
/// angle reflects through the zenith onto the anti-solar meridian.
pub fn place_neutral_points<T, R>(params: &SkyParams<T>, rule: &R) -> Result<NeutralPoints<T>>
where
    T: Real,
    R: NeutralPointRule<T> + ?Sized,
{
    let delta = rule.offset(params);
    let babinet = params.solar_zenith - delta;
    let (bz, b_azimuth) = if babinet < T::zero() {
        (-babinet, T::lit(180.0))
    } else {
        (babinet, T::zero())
    };
    let bz = bz.max(T::lit(MIN_NEUTRAL_ZENITH_DEG));
    let plus = sky_to_complex(&SkyDirection::new(bz, b_azimuth))?;
    let minus = sky_to_complex(&SkyDirection::new(params.solar_zenith + delta, T::zero()))?;
    NeutralPoints::new(plus, minus)
}

/// The field `w(z)` with its constant factors precomputed.
#[derive(Debug, Clone, Copy)]
pub struct BerryField<T> {
    plus: Complex<T>,
    minus: Complex<T>,
    plus_reflected: Complex<T>,
    minus_reflected: Complex<T>,
    /// `-4 / (|z+ + 1/z+*| |z- + 1/z-*|)`
    scale: T,
}

impl<T: Real> BerryField<T> {
    pub fn new(np: &NeutralPoints<T>) -> Result<Self> {
        let zero = Complex::new(T::zero(), T::zero());
        if np.plus == zero || np.minus == zero {
            return Err(Error::DegenerateNeutralPoints(
                "a neutral point at the projection origin has no reflected partner".into(),
            ));
        }
        let plus_reflected = np.plus.conj().inv();
        let minus_reflected = np.minus.conj().inv();
        let norm = (np.plus + plus_reflected).norm() * (np.minus + minus_reflected).norm();
        Ok(Self {
            plus: np.plus,
            minus: np.minus,
            plus_reflected,
            minus_reflected,
            scale: -T::lit(4.0) / norm,
        })
    }

    #[inline]
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let num = (z - self.plus)
            * (z - self.minus)
            * (z + self.plus_reflected)
            * (z + self.minus_reflected);
        let d = T::one() + z.norm_sqr();
        num * (self.scale / (d * d))
    }
}

/// The complex polarization field `w(z)` for the given neutral points.
pub fn berry_w<T: Real>(z: Complex<T>, np: &NeutralPoints<T>) -> Result<Complex<T>> {
    Ok(BerryField::new(np)?.eval(z))
}

/// `arg(w)` in degrees, in `(-180, 180]`; NaN where `w = 0` (a neutral point).
#[inline]
pub fn aop_of<T: Real>(w: Complex<T>) -> T {
    if w.re == T::zero() && w.im == T::zero() {
        return T::nan();
    }
    let a = w.im.atan2(w.re).to_degrees();
    if a <= -T::lit(180.0) {
        T::lit(180.0)
    } else {
        a
    }
}

/// Sky AOP at `z`: the argument of `w(z)` in degrees. NaN at neutral points.
pub fn aop<T: Real>(z: Complex<T>, np: &NeutralPoints<T>) -> Result<T> {
    Ok(aop_of(berry_w(z, np)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn symmetric_pair() -> NeutralPoints<f64> {
        NeutralPoints::new(c(0.0, 0.2), c(0.0, -0.2)).unwrap()
    }

    #[test]
    fn zeros_at_the_four_neutral_points() {
        let np = symmetric_pair();
        for z in np.all().unwrap() {
            assert!(berry_w(z, &np).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn frozen_reference_values() {
        // Reference values from tests/oracles/sky_oracle.py (50-digit evaluation).
        let np = symmetric_pair();
        let w = berry_w(c(1.0, 0.0), &np).unwrap();
        assert_abs_diff_eq!(w.re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.im, 0.0, epsilon = 1e-14);
        let w = berry_w(c(0.3, 0.7), &np).unwrap();
        assert_abs_diff_eq!(w.re, 0.535_232_272_934_564_2, epsilon = 1e-14);
        assert_abs_diff_eq!(w.im, -0.603_282_928_600_616_8, epsilon = 1e-14);
    }

    #[test]
    fn origin_neutral_point_is_degenerate() {
        let np = NeutralPoints::new(c(0.0, 0.0), c(0.0, 0.3)).unwrap();
        assert!(matches!(
            berry_w(c(0.5, 0.5), &np),
            Err(Error::DegenerateNeutralPoints(_))
        ));
        assert!(NeutralPoints::new(c(0.1, 0.1), c(0.1, 0.1)).is_err());
    }

    #[test]
    fn aop_of_examples() {
        assert_eq!(aop_of(c(2.0, 0.0)), 0.0);
        assert_eq!(aop_of(c(-1.0, 0.0)), 180.0);
        assert_eq!(aop_of(c(-1.0, -0.0)), 180.0);
        assert!(aop_of(c(0.0, 0.0)).is_nan());
        assert_abs_diff_eq!(aop_of(c(0.0, 1.0)), 90.0, epsilon = 1e-12);
    }

    fn params(zenith: f64, turbidity: f64) -> SkyParams<f64> {
        SkyParams::new(zenith, 0.0, turbidity, 0.1, 450.0).unwrap()
    }

    #[test]
    fn default_offset_rule() {
        let r = LinearOffsetRule::<f64>::default();
        assert_eq!(r.offset(&params(45.0, 3.0)), 15.0);
        assert_eq!(r.offset(&params(45.0, 7.0)), 23.0);
        assert_eq!(r.offset(&params(45.0, 4.0)), 17.0);
        assert_eq!(r.offset(&params(45.0, 1.0)), 11.0);
        let wide = LinearOffsetRule {
            slope: 10.0,
            ..Default::default()
        };
        assert_eq!(wide.offset(&params(45.0, 10.0)), 30.0);
        assert_eq!(wide.offset(&params(45.0, 1.0)), 5.0);
    }

    #[test]
    fn placement_on_the_solar_meridian() {
        let np = place_neutral_points(&params(45.0, 4.0), &LinearOffsetRule::default()).unwrap();
        let expect_plus = sky_to_complex(&SkyDirection::new(28.0, 0.0)).unwrap();
        let expect_minus = sky_to_complex(&SkyDirection::new(62.0, 0.0)).unwrap();
        assert_abs_diff_eq!((np.plus() - expect_plus).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((np.minus() - expect_minus).norm(), 0.0, epsilon = 1e-15);
        // both on the positive imaginary axis (azimuth 0)
        assert_abs_diff_eq!(np.plus().re, 0.0, epsilon = 1e-15);
        assert!(np.plus().im > 0.0 && np.minus().im > np.plus().im);
    }

    #[test]
    fn overhead_sun_reflects_babinet_point() {
        let np = place_neutral_points(&params(0.0, 4.0), &LinearOffsetRule::default()).unwrap();
        // symmetric about the zenith, each 17 deg away
        assert_abs_diff_eq!((np.plus() + np.minus()).norm(), 0.0, epsilon = 1e-15);
        let d = crate::geometry::complex_to_sky(np.plus());
        assert_abs_diff_eq!(d.zenith, 17.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.azimuth.abs(), 180.0, epsilon = 1e-12);
    }

    #[test]
    fn babinet_at_zenith_is_nudged() {
        // theta_s = delta exactly
        let np = place_neutral_points(&params(15.0, 3.0), &LinearOffsetRule::default()).unwrap();
        assert!(np.plus().norm() > 0.0);
        assert!(BerryField::new(&np).is_ok());
    }
}
