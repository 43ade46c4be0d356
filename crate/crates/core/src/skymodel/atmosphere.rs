//! Atmospheric factors of the DOP formula.
//!
//! The default functions are placeholders chosen to be smooth, bounded in
//! `[0, 1]` and strictly monotone in albedo and turbidity. Any other model can
//! be plugged in through [`Atmosphere`].

use crate::scalar::Real;

/// Zenith angle of the viewed point and its angular relation to the sun.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewAngles<T> {
    pub zenith_deg: T,
    pub cos_gamma: T,
}

impl<T: Real> ViewAngles<T> {
    pub fn new(zenith_deg: T, gamma_deg: T) -> Self {
        Self {
            zenith_deg,
            cos_gamma: gamma_deg.to_radians().cos(),
        }
    }

    pub fn gamma_deg(&self) -> T {
        self.cos_gamma.max(-T::one()).min(T::one()).acos().to_degrees()
    }

    #[inline]
    pub fn sin2_gamma(&self) -> T {
        (T::one() - self.cos_gamma * self.cos_gamma).max(T::zero())
    }
}

pub trait Atmosphere<T: Real>: Send + Sync {
    /// Ground depolarization `E(theta_p, rho)` in `[0, 1]`, strictly decreasing in `rho`.
    fn ground_depolarization(&self, zenith_deg: T, albedo: T) -> T;

    /// Spectral factor `S(gamma_p, theta_p, lambda)` in `[0, 1]`.
    fn spectral(&self, view: &ViewAngles<T>, wavelength_nm: T) -> T;

    /// Maximal DOP `M_DOP(T)` in `(0, 1]`, strictly decreasing in turbidity.
    fn max_dop(&self, turbidity: T) -> T;
}

/// `E = 1 - rho`, `S = sin^2(gamma) (0.5 + 0.5 (lambda - 320) / 400)`,
/// `M_DOP = exp(-(T - 1) / 10)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultAtmosphere;

impl<T: Real> Atmosphere<T> for DefaultAtmosphere {
    fn ground_depolarization(&self, _zenith_deg: T, albedo: T) -> T {
        T::one() - albedo
    }

    #[inline]
    fn spectral(&self, view: &ViewAngles<T>, wavelength_nm: T) -> T {
        let half = T::lit(0.5);
        view.sin2_gamma() * (half + half * (wavelength_nm - T::lit(320.0)) / T::lit(400.0))
    }

    fn max_dop(&self, turbidity: T) -> T {
        (-(turbidity - T::one()) / T::lit(10.0)).exp()
    }
}
