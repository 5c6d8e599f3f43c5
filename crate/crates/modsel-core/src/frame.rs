//! Duty-cycle frame timing and per-frame energy accounting.
//!
//! A proactive sensor node wakes every `t_frame_s` seconds, spends
//! `t_transient_s` starting up, transmits an `n_bits` message during the
//! active window, and sleeps for the remainder. Sleep-mode leakage is
//! modeled as zero; the DC-DC converter efficiency `chi_e` divides every
//! consumed joule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frame timing of a duty-cycled link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameTiming {
    /// Payload bits per frame.
    pub n_bits: u32,
    /// Frame period in seconds.
    pub t_frame_s: f64,
    /// Transient (start-up) duration in seconds.
    pub t_transient_s: f64,
    /// Channel bandwidth in Hz.
    pub bandwidth_hz: f64,
}

impl FrameTiming {
    pub fn new(n_bits: u32, t_frame_s: f64, t_transient_s: f64, bandwidth_hz: f64) -> Result<Self> {
        if n_bits == 0 {
            return Err(Error::InvalidParameter("n_bits must be >= 1".into()));
        }
        if !t_frame_s.is_finite() || t_frame_s <= 0.0 {
            return Err(Error::InvalidParameter("t_frame_s must be > 0".into()));
        }
        if !bandwidth_hz.is_finite() || bandwidth_hz <= 0.0 {
            return Err(Error::InvalidParameter("bandwidth_hz must be > 0".into()));
        }
        if !(0.0..t_frame_s).contains(&t_transient_s) {
            return Err(Error::InvalidParameter(
                "t_transient_s must satisfy 0 <= t_tr < t_frame".into(),
            ));
        }
        Ok(Self { n_bits, t_frame_s, t_transient_s, bandwidth_hz })
    }

    /// Default frame for the 2.4 GHz narrowband profile: 1024-byte payload,
    /// 1.4 s period, 62.5 kHz bandwidth, 5 us synthesizer start-up.
    pub fn narrowband() -> Self {
        Self { n_bits: 8192, t_frame_s: 1.4, t_transient_s: 5e-6, bandwidth_hz: 62.5e3 }
    }

    /// Default frame for the pulsed UWB profile: 20000 bits, 100 ms period,
    /// 500 MHz bandwidth, 2 ns pulse-generator start-up.
    pub fn uwb_ook() -> Self {
        Self { n_bits: 20_000, t_frame_s: 100e-3, t_transient_s: 2e-9, bandwidth_hz: 500e6 }
    }

    /// Time available for the active mode: `t_frame - t_transient`.
    /// Whatever a scheme leaves unused is sleep slack.
    pub fn active_budget_s(&self) -> f64 {
        self.t_frame_s - self.t_transient_s
    }
}

/// Per-frame energy split of one N-bit transmission.
///
/// `e_total` is always the exact sum of the three components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// RF transmit energy including the amplifier overhead factor, J.
    pub e_rf_tx: f64,
    /// Non-amplifier circuit energy over the active window (both ends), J.
    pub e_circuit_active: f64,
    /// Start-up energy, J.
    pub e_transient: f64,
    /// Total, J.
    pub e_total: f64,
}

impl EnergyBreakdown {
    pub fn new(e_rf_tx: f64, e_circuit_active: f64, e_transient: f64) -> Self {
        Self { e_rf_tx, e_circuit_active, e_transient, e_total: e_rf_tx + e_circuit_active + e_transient }
    }
}

/// Total energy of one frame: `[(p_circuit + p_transmit) * t_active + p_transient * t_transient] / chi_e`.
///
/// `chi_e` is the DC-DC converter transfer efficiency in (0, 1].
pub fn frame_energy(
    p_circuit_w: f64,
    p_transmit_w: f64,
    t_active_s: f64,
    p_transient_w: f64,
    t_transient_s: f64,
    chi_e: f64,
) -> Result<f64> {
    if !chi_e.is_finite() || chi_e <= 0.0 || chi_e > 1.0 {
        return Err(Error::InvalidParameter(format!("chi_e {chi_e} must be in (0, 1]")));
    }
    for (name, v) in [
        ("p_circuit_w", p_circuit_w),
        ("p_transmit_w", p_transmit_w),
        ("t_active_s", t_active_s),
        ("p_transient_w", p_transient_w),
        ("t_transient_s", t_transient_s),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!("{name} must be finite and >= 0")));
        }
    }
    Ok(((p_circuit_w + p_transmit_w) * t_active_s + p_transient_w * t_transient_s) / chi_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn frame_energy_zero_power_is_zero() {
        assert_eq!(frame_energy(0.0, 0.0, 3.0, 0.0, 2.0, 0.8).unwrap(), 0.0);
    }

    #[test]
    fn frame_energy_identity_efficiency() {
        assert_eq!(frame_energy(1.0, 1.0, 1.0, 0.0, 0.0, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn frame_energy_hand_evaluated() {
        let e = frame_energy(65e-3, 10e-3, 0.1, 20e-3, 5e-6, 0.8).unwrap();
        assert_relative_eq!(e, 9.375125e-3, max_relative = 1e-12);
    }

    #[test]
    fn frame_energy_linear_in_powers_and_inverse_in_chi() {
        let base = frame_energy(0.05, 0.02, 0.3, 0.01, 1e-5, 0.4).unwrap();
        let doubled_p = frame_energy(0.10, 0.04, 0.3, 0.02, 1e-5, 0.4).unwrap();
        assert_relative_eq!(doubled_p, 2.0 * base, max_relative = 1e-12);
        let doubled_chi = frame_energy(0.05, 0.02, 0.3, 0.01, 1e-5, 0.8).unwrap();
        assert_relative_eq!(doubled_chi, base / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn frame_energy_no_transient_matches_active_mode_pattern() {
        let e = frame_energy(0.05, 0.02, 0.3, 0.7, 0.0, 0.8).unwrap();
        assert_relative_eq!(e, (0.05 + 0.02) * 0.3 / 0.8, max_relative = 1e-12);
    }

    #[test]
    fn frame_energy_rejects_bad_chi_and_negative_inputs() {
        assert!(frame_energy(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(frame_energy(1.0, 1.0, 1.0, 0.0, 0.0, 1.5).is_err());
        assert!(frame_energy(-1.0, 1.0, 1.0, 0.0, 0.0, 0.8).is_err());
    }

    #[test]
    fn timing_invariants_enforced() {
        assert!(FrameTiming::new(0, 1.0, 0.0, 1.0).is_err());
        assert!(FrameTiming::new(8, 1.0, 1.0, 1.0).is_err());
        assert!(FrameTiming::new(8, 1.0, 0.1, -5.0).is_err());
        let t = FrameTiming::narrowband();
        assert_eq!(t.n_bits, 8192);
        assert_relative_eq!(t.active_budget_s(), 1.4 - 5e-6, max_relative = 1e-15);
    }

    #[test]
    fn breakdown_total_is_exact_sum() {
        let b = EnergyBreakdown::new(0.1, 0.2, 0.3);
        assert_eq!(b.e_total, 0.1 + 0.2 + 0.3);
    }
}
