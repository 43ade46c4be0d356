//! Skylight polarization simulation and attitude estimation.
//!
//! - [`geometry`]: frames, Euler rotations, sky projection, cyclic differences.
//! - [`skymodel`]: four-neutral-point AOP/DOP field and analytic luminance.
//! - [`imager`]: hypothetical fisheye polarization camera, noise, LI sectors.
//! - [`sso`]: social-spider template-matching attitude estimator.
//! - [`harness`]: experiment sweeps, metrics, CSV export.
//!
//! All numeric modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, with `*32` variants for `f32`.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod harness;
pub mod imager;
pub mod scalar;
pub mod skymodel;
pub mod sso;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Attitude = geometry::Attitude<f64>;
pub type SkyDirection = geometry::SkyDirection<f64>;
pub type Rotation = geometry::Rotation<f64>;
pub type SkyParams = skymodel::SkyParams<f64>;
pub type SkyModel = skymodel::SkyModel<f64>;
pub type SkyConfig = skymodel::SkyConfig<f64>;
pub type CameraModel = imager::CameraModel<f64>;
pub type ImageSet = imager::ImageSet<f64>;
pub type Imager = imager::Imager<f64>;
pub type SsoConfig = sso::SsoConfig<f64>;
pub type Estimate = sso::Estimate<f64>;

pub type Attitude32 = geometry::Attitude<f32>;
pub type SkyParams32 = skymodel::SkyParams<f32>;
pub type SkyModel32 = skymodel::SkyModel<f32>;
pub type CameraModel32 = imager::CameraModel<f32>;
pub type ImageSet32 = imager::ImageSet<f32>;
pub type SsoConfig32 = sso::SsoConfig<f32>;
