//! Spectral densities of the lattice and continuum Gaussian Markov models.
//!
//! | model                     | density                                   | process            |
//! |---------------------------|-------------------------------------------|--------------------|
//! | stationary autoregression | `[1 − β + β(sin²(ω/2) + sin²(η/2))]⁻¹`    | SRW, geometric holding |
//! | intrinsic autoregression  | `(sin²(ω/2) + sin²(η/2))⁻¹`               | simple random walk |
//! | generalized OU            | `(α² + ω² + η²)⁻¹`                        | BM, exponential holding |
//! | de Wijs                   | `(ω² + η²)⁻¹`                             | Brownian motion    |
//!
//! `β → 1` takes the first row to the second and `α → 0` the third to the
//! fourth; low frequencies of the lattice models approach the continuum ones.

use std::f64::consts::PI;

use crate::{Error, Point, Result};

/// Scale of the de Wijs entry in the limit diagram, `(ω² + η²)⁻¹`.
pub const DIAGRAM_DE_WIJS_SCALE: f64 = 1.0;
/// Scale of the de Wijs spectral density matching the `−log` covariance,
/// `1 / (2π‖x‖²)`.
pub const DE_WIJS_SPECTRAL_SCALE: f64 = 1.0 / (2.0 * PI);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralModel {
    StationaryAr { beta: f64 },
    IntrinsicAr,
    GenOu { alpha: f64 },
    DeWijs,
}

impl SpectralModel {
    pub fn stationary_ar(beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::InvalidInput(format!("beta must lie in [0, 1), got {beta}")));
        }
        Ok(SpectralModel::StationaryAr { beta })
    }

    pub fn gen_ou(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
        }
        Ok(SpectralModel::GenOu { alpha })
    }

    /// Density at frequency `(ω, η)` in the limit-diagram normalization.
    pub fn density(&self, omega: f64, eta: f64) -> Result<f64> {
        let lattice = || {
            let (a, b) = ((0.5 * omega).sin(), (0.5 * eta).sin());
            a * a + b * b
        };
        let rho2 = omega * omega + eta * eta;
        match *self {
            SpectralModel::StationaryAr { beta } => Ok(1.0 / (1.0 - beta + beta * lattice())),
            SpectralModel::IntrinsicAr => {
                let d = lattice();
                if d == 0.0 {
                    Err(Error::PoleAtOrigin)
                } else {
                    Ok(1.0 / d)
                }
            }
            SpectralModel::GenOu { alpha } => Ok(1.0 / (alpha * alpha + rho2)),
            SpectralModel::DeWijs => {
                if rho2 == 0.0 {
                    Err(Error::PoleAtOrigin)
                } else {
                    Ok(DIAGRAM_DE_WIJS_SCALE / rho2)
                }
            }
        }
    }
}

/// De Wijs spectral density `1 / (2π‖x‖²)` matching the covariance
/// `−∫∫ log‖x − y‖ σ(dx) ν(dy)`.
pub fn de_wijs_spectral_density(x: Point) -> Result<f64> {
    let r2 = x.norm_sq();
    if r2 == 0.0 {
        return Err(Error::PoleAtOrigin);
    }
    Ok(DE_WIJS_SPECTRAL_SCALE / r2)
}
