//! Path-loss link budget and flat-fading channel models.
//!
//! The channel gain factor is `L_d = M_l * d^eta * L_1` (transmit power over
//! received power, linear). Fading is flat and memoryless per symbol, either
//! Rayleigh or Rician; `omega` is always the total mean-square gain
//! `E[|h|^2]`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Link budget
// ---------------------------------------------------------------------------

/// Distance/path-loss description of a point-to-point link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Transmitter-receiver separation in meters.
    pub distance_m: f64,
    /// Path-loss exponent.
    pub path_loss_exp: f64,
    /// Gain margin in dB (hardware process variations).
    pub margin_db: f64,
    /// Gain factor at d = 1 m in dB (antenna gains and wavelength folded in).
    pub ref_gain_db: f64,
}

impl LinkBudget {
    /// Link with the default 40 dB margin and 30 dB reference gain.
    pub fn new(distance_m: f64, path_loss_exp: f64) -> Result<Self> {
        Self::with_gains(distance_m, path_loss_exp, 40.0, 30.0)
    }

    pub fn with_gains(
        distance_m: f64,
        path_loss_exp: f64,
        margin_db: f64,
        ref_gain_db: f64,
    ) -> Result<Self> {
        if !distance_m.is_finite() || distance_m <= 0.0 {
            return Err(Error::InvalidParameter("distance_m must be > 0".into()));
        }
        if !path_loss_exp.is_finite() || path_loss_exp < 1.0 {
            return Err(Error::InvalidParameter("path_loss_exp must be >= 1".into()));
        }
        if !margin_db.is_finite() || !ref_gain_db.is_finite() {
            return Err(Error::InvalidParameter("gains must be finite".into()));
        }
        Ok(Self { distance_m, path_loss_exp, margin_db, ref_gain_db })
    }

    /// Linear channel gain factor `L_d = 10^((M_l + L_1)/10) * d^eta`.
    pub fn path_loss_gain(&self) -> f64 {
        10f64.powf((self.margin_db + self.ref_gain_db) / 10.0)
            * self.distance_m.powf(self.path_loss_exp)
    }
}

// ---------------------------------------------------------------------------
// Fading models
// ---------------------------------------------------------------------------

/// Flat-fading model of the per-symbol channel coefficient `h`.
///
/// In both variants `omega = E[|h|^2]` is the total mean-square gain. For the
/// Rician variant the line-of-sight and diffuse parts reconstruct as
/// `A^2 = omega * k/(1+k)` and `2*sigma^2 = omega/(1+k)` with
/// `k = 10^(k_db/10)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FadingModel {
    Rayleigh { omega: f64 },
    Rician { k_db: f64, omega: f64 },
}

impl FadingModel {
    pub fn rayleigh(omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter("omega must be > 0".into()));
        }
        Ok(Self::Rayleigh { omega })
    }

    /// Rician fading with total power `omega` (LOS + diffuse).
    pub fn rician(k_db: f64, omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter("omega must be > 0".into()));
        }
        if !k_db.is_finite() {
            return Err(Error::InvalidParameter("k_db must be finite".into()));
        }
        Ok(Self::Rician { k_db, omega })
    }

    /// Rician fading where the LOS component adds on top of a diffuse part of
    /// power `diffuse_omega`, i.e. total power `(1 + k) * diffuse_omega`.
    ///
    /// This is the convention of the published evaluation tables this crate
    /// reproduces: raising K leaves the scattered power fixed and adds a beam.
    pub fn rician_added_los(k_db: f64, diffuse_omega: f64) -> Result<Self> {
        if !diffuse_omega.is_finite() || diffuse_omega <= 0.0 {
            return Err(Error::InvalidParameter("diffuse_omega must be > 0".into()));
        }
        let k = 10f64.powf(k_db / 10.0);
        Self::rician(k_db, (1.0 + k) * diffuse_omega)
    }

    /// Total mean-square gain `E[|h|^2]`.
    pub fn omega(&self) -> f64 {
        match *self {
            FadingModel::Rayleigh { omega } | FadingModel::Rician { omega, .. } => omega,
        }
    }

    /// Linear Rician factor; zero for Rayleigh.
    pub fn k_linear(&self) -> f64 {
        match *self {
            FadingModel::Rayleigh { .. } => 0.0,
            FadingModel::Rician { k_db, .. } => 10f64.powf(k_db / 10.0),
        }
    }

    /// LOS amplitude `A` and per-component diffuse variance `sigma^2`.
    pub fn los_and_sigma2(&self) -> (f64, f64) {
        let omega = self.omega();
        let k = self.k_linear();
        let a = (omega * k / (1.0 + k)).sqrt();
        let sigma2 = omega / (2.0 * (1.0 + k));
        (a, sigma2)
    }
}

/// Draw one channel coefficient from the fading model.
///
/// Rayleigh: circularly-symmetric complex Gaussian with per-component
/// variance `omega/2`. Rician: LOS amplitude plus complex Gaussian with
/// per-component variance `sigma^2` from the reconstruction identity.
pub fn sample_channel_gain<R: Rng + ?Sized>(fading: &FadingModel, rng: &mut R) -> Complex64 {
    let (a, sigma2) = fading.los_and_sigma2();
    let s = sigma2.sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(a + s * re, s * im)
}

/// Average received SNR `omega * e_t / (L_d * n0)`.
pub fn average_snr(e_t_j: f64, link: &LinkBudget, fading: &FadingModel, n0_j: f64) -> Result<f64> {
    if !n0_j.is_finite() || n0_j <= 0.0 {
        return Err(Error::InvalidParameter("n0_j must be > 0".into()));
    }
    if !e_t_j.is_finite() || e_t_j < 0.0 {
        return Err(Error::InvalidParameter("e_t_j must be >= 0".into()));
    }
    Ok(fading.omega() * e_t_j / (link.path_loss_gain() * n0_j))
}
