//! Nine-coefficient analytic sky luminance.

use crate::error::{Error, Result};
use crate::geometry::SkyDirection;
use crate::scalar::Real;

/// Coefficients `A..I` of the luminance formula. Validated on construction:
/// `B < 0`, `|H| < 1` and a strictly positive result on a 1 degree grid of
/// zenith angle `[0, 90]` and sun separation `[0, 180]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HosekCoefficients<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
    pub g: T,
    pub h: T,
    pub i: T,
}

impl<T: Real> HosekCoefficients<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(a: T, b: T, c: T, d: T, e: T, f: T, g: T, h: T, i: T) -> Result<Self> {
        let k = Self {
            a,
            b,
            c,
            d,
            e,
            f,
            g,
            h,
            i,
        };
        k.validate()?;
        Ok(k)
    }

    fn validate(&self) -> Result<()> {
        if !(self.b < T::zero()) {
            return Err(Error::Parameter(format!(
                "luminance coefficient B must be negative, got {}",
                self.b
            )));
        }
        if !(self.h.abs() < T::one()) {
            return Err(Error::Parameter(format!(
                "luminance coefficient H must satisfy |H| < 1, got {}",
                self.h
            )));
        }
        for tz in 0..=90 {
            let cos_z = T::from_usize_lossy(tz).to_radians().cos();
            for gd in 0..=180 {
                let gamma = T::from_usize_lossy(gd).to_radians();
                let v = self.radiance(cos_z, gamma.cos(), gamma);
                if !(v > T::zero()) {
                    return Err(Error::Parameter(format!(
                        "luminance not positive ({v}) at zenith {tz} deg, sun separation {gd} deg"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Luminance from `cos(theta_p)`, `cos(gamma_p)` and `gamma_p` in radians.
    #[inline]
    pub(crate) fn radiance(&self, cos_zenith: T, cos_gamma: T, gamma_rad: T) -> T {
        let hundredth = T::lit(0.01);
        let gradation = T::one() + self.a * (self.b / (cos_zenith + hundredth)).exp();
        let h = self.h;
        let chi = (T::one() + cos_gamma * cos_gamma)
            / (T::one() + h * h - T::lit(2.0) * h * cos_gamma).powf(T::lit(1.5));
        let indicatrix = self.c
            + self.d * (self.e * gamma_rad).exp()
            + self.f * cos_gamma * cos_gamma
            + self.g * chi
            + self.i * cos_zenith.max(T::zero()).sqrt();
        gradation * indicatrix
    }
}

/// Anisotropic term `(1 + cos^2 g) / (1 + H^2 - 2 H cos g)^{3/2}`, `g` in degrees.
pub fn chi<T: Real>(h: T, gamma_deg: T) -> Result<T> {
    let cg = gamma_deg.to_radians().cos();
    let den = T::one() + h * h - T::lit(2.0) * h * cg;
    if !(den > T::zero()) {
        return Err(Error::Parameter(format!(
            "anisotropy denominator {den} is not positive (H = {h}, gamma = {gamma_deg})"
        )));
    }
    Ok((T::one() + cg * cg) / den.powf(T::lit(1.5)))
}

/// Relative luminance at direction `d` with sun separation `gamma_deg`.
pub fn li<T: Real>(d: &SkyDirection<T>, gamma_deg: T, c: &HosekCoefficients<T>) -> Result<T> {
    if !(d.zenith >= T::zero() && d.zenith <= T::lit(90.0)) {
        return Err(Error::domain("zenith angle", d.zenith.as_f64(), "[0, 90] deg"));
    }
    chi(c.h, gamma_deg)?;
    let g = gamma_deg.to_radians();
    let v = c.radiance(d.zenith.to_radians().cos(), g.cos(), g);
    if !(v > T::zero()) {
        return Err(Error::Parameter(format!(
            "luminance coefficients give non-positive radiance {v}"
        )));
    }
    Ok(v)
}

/// A base coefficient record whose `C` and `D` vary linearly with turbidity
/// and albedo:
///
/// `C = c0 + c_t (T - t_ref) + c_rho rho`, `D = d0 + d_t (T - t_ref) + d_rho rho`.
///
/// The default record is a smooth, horizon-brightened sky with a solar aureole;
/// it is not fitted to measured data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HosekModel<T> {
    pub base: HosekCoefficients<T>,
    pub reference_turbidity: T,
    pub c_turbidity: T,
    pub c_albedo: T,
    pub d_turbidity: T,
    pub d_albedo: T,
}

impl<T: Real> Default for HosekModel<T> {
    fn default() -> Self {
        let l = T::lit;
        Self {
            base: HosekCoefficients {
                a: l(-1.0),
                b: l(-0.32),
                c: l(0.2),
                d: l(3.0),
                e: l(-3.0),
                f: l(0.5),
                g: l(0.3),
                h: l(0.6),
                i: l(0.8),
            },
            reference_turbidity: l(3.0),
            c_turbidity: l(0.05),
            c_albedo: l(0.3),
            d_turbidity: l(-0.2),
            d_albedo: l(0.5),
        }
    }
}

impl<T: Real> HosekModel<T> {
    pub fn coefficients(&self, turbidity: T, albedo: T) -> Result<HosekCoefficients<T>> {
        let dt = turbidity - self.reference_turbidity;
        let mut k = self.base;
        k.c = k.c + self.c_turbidity * dt + self.c_albedo * albedo;
        k.d = k.d + self.d_turbidity * dt + self.d_albedo * albedo;
        k.validate()?;
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn flat(c: f64, f: f64) -> HosekCoefficients<f64> {
        HosekCoefficients {
            a: 0.0,
            b: -1.0,
            c,
            d: 0.0,
            e: 0.0,
            f,
            g: 0.0,
            h: 0.0,
            i: 0.0,
        }
    }

    #[test]
    fn chi_examples() {
        assert_abs_diff_eq!(chi(0.0, 90.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(chi(0.0, 0.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(chi(0.8, 0.0).unwrap(), 250.0, epsilon = 1e-9);
        assert!(chi(1.0, 0.0).is_err());
    }

    #[test]
    fn collapsed_terms() {
        let k = flat(1.0, 0.0);
        for (z, g) in [(0.0, 0.0), (45.0, 80.0), (90.0, 170.0)] {
            assert_eq!(li(&SkyDirection::new(z, 0.0), g, &k).unwrap(), 1.0);
        }
        let k = flat(0.0, 1.0);
        assert_eq!(li(&SkyDirection::new(30.0, 0.0), 0.0, &k).unwrap(), 1.0);
    }

    #[test]
    fn default_record_reference_value() {
        // tests/oracles/sky_oracle.py, T = 4, rho = 0.1
        let k = HosekModel::default().coefficients(4.0, 0.1).unwrap();
        let v = li(&SkyDirection::new(45.0, 0.0), 45.0, &k).unwrap();
        assert_abs_diff_eq!(v, 0.973_013_270_200_802_6, epsilon = 1e-13);
    }

    #[test]
    fn validation_rejects_bad_records() {
        let mut k = HosekModel::<f64>::default().base;
        k.b = 0.1;
        assert!(HosekCoefficients::new(k.a, k.b, k.c, k.d, k.e, k.f, k.g, k.h, k.i).is_err());
        // negative everywhere
        let k = flat(-1.0, 0.0);
        assert!(HosekCoefficients::new(k.a, k.b, k.c, k.d, k.e, k.f, k.g, k.h, k.i).is_err());
        assert!(li(&SkyDirection::new(10.0, 0.0), 10.0, &k).is_err());
    }

    #[test]
    fn default_model_valid_over_experiment_ranges() {
        let m = HosekModel::<f64>::default();
        for t in [1.0, 3.0, 5.0, 7.0, 10.0] {
            for rho in [0.0, 0.1, 0.4, 1.0] {
                assert!(m.coefficients(t, rho).is_ok(), "T={t} rho={rho}");
            }
        }
    }
}
