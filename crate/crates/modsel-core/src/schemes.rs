//! Modulation schemes: bandwidth efficiency, active-mode timing, SER-target
//! energy inversion, circuit-power composition, and total per-frame energy.
//!
//! Covered schemes: non-coherent M-ary FSK, coherent square-grid MQAM with a
//! free integer constellation size, differential offset-QPSK, and pulsed
//! non-coherent OOK. All energies are joules per N-bit frame.

use serde::{Deserialize, Serialize};

use crate::channel::{FadingModel, LinkBudget};
use crate::error::{Error, Result};
use crate::frame::{EnergyBreakdown, FrameTiming};
use crate::ser;

// ---------------------------------------------------------------------------
// Scheme
// ---------------------------------------------------------------------------

/// A candidate modulation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    /// Non-coherent M-ary FSK; `zeta` is the carrier-separation factor
    /// (1 for non-coherent spacing, 2 for coherent spacing).
    NcMfsk { m: u32, zeta: u32 },
    /// Coherent MQAM on a square grid. `m` is a free integer >= 4; it does
    /// not need to be a perfect square or a power of two.
    Mqam { m: u32 },
    /// Differential offset-QPSK (no coherent phase reference at the sink).
    DiffOqpsk,
    /// Non-coherent OOK with the given duty-cycle factor `T_p / T_s`.
    Ook { duty_cycle: f64 },
}

impl Scheme {
    /// Non-coherent MFSK with unit carrier-separation factor.
    pub fn nc_mfsk(m: u32) -> Result<Self> {
        Self::nc_mfsk_with_zeta(m, 1)
    }

    pub fn nc_mfsk_with_zeta(m: u32, zeta: u32) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "NC-MFSK constellation size {m} must be a power of two >= 2"
            )));
        }
        if !(zeta == 1 || zeta == 2) {
            return Err(Error::InvalidParameter(format!("zeta {zeta} must be 1 or 2")));
        }
        Ok(Scheme::NcMfsk { m, zeta })
    }

    pub fn mqam(m: u32) -> Result<Self> {
        if m < 4 {
            return Err(Error::InvalidParameter(format!("MQAM size {m} must be >= 4")));
        }
        Ok(Scheme::Mqam { m })
    }

    pub fn diff_oqpsk() -> Self {
        Scheme::DiffOqpsk
    }

    /// OOK with the default half duty cycle.
    pub fn ook() -> Result<Self> {
        Self::ook_with_duty(0.5)
    }

    pub fn ook_with_duty(duty_cycle: f64) -> Result<Self> {
        if !(duty_cycle > 0.0 && duty_cycle <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "OOK duty cycle {duty_cycle} must be in (0, 1]"
            )));
        }
        Ok(Scheme::Ook { duty_cycle })
    }

    /// Bits carried per symbol (real-valued for non-power-of-two MQAM).
    pub fn bits_per_symbol(&self) -> f64 {
        match *self {
            Scheme::NcMfsk { m, .. } => m.trailing_zeros() as f64,
            Scheme::Mqam { m } => (m as f64).log2(),
            Scheme::DiffOqpsk => 2.0,
            Scheme::Ook { .. } => 1.0,
        }
    }

    /// Bandwidth efficiency in b/s/Hz.
    pub fn bandwidth_efficiency(&self) -> f64 {
        match *self {
            Scheme::NcMfsk { m, zeta } => zeta as f64 * self.bits_per_symbol() / m as f64,
            Scheme::Mqam { .. } => 2.0 * self.bits_per_symbol(),
            Scheme::DiffOqpsk => 2.0,
            Scheme::Ook { duty_cycle } => duty_cycle,
        }
    }

    /// Active-mode duration needed to move `n_bits` through the channel.
    ///
    /// Fails with [`Error::FrameOverrun`] if the result does not fit in
    /// `t_frame - t_transient`.
    pub fn active_duration(&self, timing: &FrameTiming) -> Result<f64> {
        let n = timing.n_bits as f64;
        let b = timing.bandwidth_hz;
        let t_ac = match *self {
            Scheme::NcMfsk { m, zeta } => {
                m as f64 * n / (zeta as f64 * b * self.bits_per_symbol())
            }
            Scheme::Mqam { .. } => n / (2.0 * b * self.bits_per_symbol()),
            Scheme::DiffOqpsk => n / (2.0 * b),
            Scheme::Ook { duty_cycle } => n / (duty_cycle * b),
        };
        let budget = timing.active_budget_s();
        if t_ac > budget {
            return Err(Error::FrameOverrun { t_ac, budget });
        }
        Ok(t_ac)
    }

    /// Average SER upper bound at the given average SNR (Rayleigh form),
    /// clamped to `[0, 1]`.
    pub fn ser_bound(&self, gamma_bar: f64) -> f64 {
        ser::ser_bound(self, gamma_bar)
    }

    /// Power-amplifier overhead coefficient `alpha` (`P_amp = alpha * P_t`).
    pub fn amplifier_coefficient(&self, radio: &RadioParameters) -> f64 {
        match *self {
            Scheme::NcMfsk { .. } => radio.alpha_fsk,
            Scheme::DiffOqpsk => radio.alpha_oqpsk,
            Scheme::Ook { .. } => radio.alpha_ook,
            Scheme::Mqam { m } => {
                let rm = (m as f64).sqrt();
                let xi = 3.0 * (rm - 1.0) / (rm + 1.0);
                xi / radio.vartheta - 1.0
            }
        }
    }

    /// Amplifier-exclusive transmitter circuit power and receiver circuit
    /// power, in watts, per the scheme's block chains.
    ///
    /// The NC-MFSK receiver runs an M-branch matched-filter/envelope bank, so
    /// its power grows linearly in M. The OOK transmit filter is duty-gated
    /// and charged separately by the energy model.
    pub fn circuit_powers(&self, radio: &RadioParameters) -> (f64, f64) {
        match *self {
            Scheme::NcMfsk { m, .. } => (
                radio.p_sy + radio.p_filt,
                radio.p_lna + m as f64 * (radio.p_filr + radio.p_ed) + radio.p_ifa + radio.p_adc,
            ),
            Scheme::Mqam { .. } | Scheme::DiffOqpsk => (
                radio.p_dac + radio.p_sy + radio.p_mix + radio.p_filt,
                radio.p_lna + radio.p_mix + radio.p_sy + radio.p_filr + radio.p_ifa + radio.p_adc,
            ),
            Scheme::Ook { .. } => (
                radio.p_pg + radio.p_filt,
                radio.p_lna + radio.p_ed + radio.p_filr + radio.p_int + radio.p_adc,
            ),
        }
    }

    fn is_linear_carrier(&self) -> bool {
        matches!(self, Scheme::Mqam { .. } | Scheme::DiffOqpsk)
    }

    /// Short display name, e.g. `NC-BFSK`, `64QAM`, `D-OQPSK`, `OOK`.
    pub fn label(&self) -> String {
        match *self {
            Scheme::NcMfsk { m: 2, .. } => "NC-BFSK".to_string(),
            Scheme::NcMfsk { m, .. } => format!("NC-{m}FSK"),
            Scheme::Mqam { m } => format!("{m}QAM"),
            Scheme::DiffOqpsk => "D-OQPSK".to_string(),
            Scheme::Ook { .. } => "OOK".to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Radio parameters
// ---------------------------------------------------------------------------

/// Per-block circuit powers, amplifier coefficients, noise density, and the
/// DC-DC converter efficiency of the evaluated transceiver pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioParameters {
    /// DC-DC converter power-transfer efficiency, in (0, 1].
    pub chi_e: f64,
    /// Noise spectral density in J (W/Hz).
    pub n0: f64,
    /// Frequency synthesizer, W.
    pub p_sy: f64,
    /// Transmit filter, W.
    pub p_filt: f64,
    /// Receive filter (per branch for NC-MFSK), W.
    pub p_filr: f64,
    /// Low-noise amplifier, W.
    pub p_lna: f64,
    /// Intermediate-frequency amplifier, W.
    pub p_ifa: f64,
    /// Envelope detector (per branch for NC-MFSK), W.
    pub p_ed: f64,
    /// Analog-to-digital converter, W.
    pub p_adc: f64,
    /// Digital-to-analog converter, W.
    pub p_dac: f64,
    /// Mixer, W.
    pub p_mix: f64,
    /// Pulse generator (OOK), W.
    pub p_pg: f64,
    /// Integrator (OOK sink), W.
    pub p_int: f64,
    /// Extra fixed active-mode drain charged to the linear-carrier chains
    /// (MQAM and OQPSK) on top of the per-block sums, W. Part of the
    /// calibrated evaluation profile; set to 0 for the bare block-sum model.
    pub p_ovh: f64,
    /// Class-B amplifier coefficient for NC-MFSK.
    pub alpha_fsk: f64,
    /// Amplifier coefficient for OQPSK.
    pub alpha_oqpsk: f64,
    /// Amplifier coefficient for OOK.
    pub alpha_ook: f64,
    /// MQAM amplifier-law constant (`alpha = xi/vartheta - 1`).
    pub vartheta: f64,
}

impl RadioParameters {
    /// Evaluation profile of the 2.4 GHz narrowband transceiver pair.
    pub fn narrowband() -> Self {
        Self {
            chi_e: 0.8,
            n0: 1e-21, // -180 dBm/Hz
            p_sy: 10e-3,
            p_filt: 2.5e-3,
            p_filr: 2.5e-3,
            p_lna: 9e-3,
            p_ifa: 3e-3,
            p_ed: 3e-3,
            p_adc: 7e-3,
            p_dac: 7e-3,
            p_mix: 7e-3,
            p_pg: 0.0,
            p_int: 0.0,
            p_ovh: 13.98625,
            alpha_fsk: 0.33,
            alpha_oqpsk: 0.33,
            alpha_ook: 0.33,
            vartheta: 0.35,
        }
    }

    /// Evaluation profile of the pulsed UWB OOK transceiver pair.
    pub fn uwb_ook() -> Self {
        Self {
            chi_e: 0.8,
            n0: 1e-21,
            p_sy: 0.0,
            p_filt: 2.5e-3,
            p_filr: 2.5e-3,
            p_lna: 3.1e-3,
            p_ifa: 0.0,
            p_ed: 3e-3,
            p_adc: 7e-3,
            p_dac: 0.0,
            p_mix: 0.0,
            p_pg: 675e-6,
            p_int: 3e-3,
            p_ovh: 0.0,
            alpha_fsk: 0.33,
            alpha_oqpsk: 0.33,
            alpha_ook: 0.33,
            vartheta: 0.35,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.chi_e.is_finite() || self.chi_e <= 0.0 || self.chi_e > 1.0 {
            return Err(Error::InvalidParameter(format!("chi_e {} must be in (0, 1]", self.chi_e)));
        }
        if !self.n0.is_finite() || self.n0 <= 0.0 {
            return Err(Error::InvalidParameter("n0 must be > 0".into()));
        }
        let powers = [
            self.p_sy, self.p_filt, self.p_filr, self.p_lna, self.p_ifa, self.p_ed, self.p_adc,
            self.p_dac, self.p_mix, self.p_pg, self.p_int, self.p_ovh,
        ];
        if powers.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter("block powers must be finite and >= 0".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Energy model
// ---------------------------------------------------------------------------

/// Transmit energy per symbol that meets the SER target under Rayleigh
/// fading, via the closed-form bound inversion.
///
/// Rician targets have no closed form here; use
/// [`crate::mc::invert_ser_numeric`] to obtain the required SNR instead.
pub fn required_symbol_energy(
    scheme: &Scheme,
    p_s_target: f64,
    link: &LinkBudget,
    fading: &FadingModel,
    n0: f64,
) -> Result<f64> {
    let FadingModel::Rayleigh { omega } = *fading else {
        return Err(Error::UnsupportedScheme(
            "closed-form energy inversion is Rayleigh-only; invert numerically for Rician".into(),
        ));
    };
    if !n0.is_finite() || n0 <= 0.0 {
        return Err(Error::InvalidParameter("n0 must be > 0".into()));
    }
    let gamma = ser::required_snr_rayleigh(scheme, p_s_target)?;
    Ok(gamma * link.path_loss_gain() * n0 / omega)
}

/// Average SNR that meets the SER target under the given fading model:
/// closed form for Rayleigh, bound-kernel bisection for Rician.
pub fn required_snr(scheme: &Scheme, p_s_target: f64, fading: &FadingModel) -> Result<f64> {
    match fading {
        FadingModel::Rayleigh { .. } => ser::required_snr_rayleigh(scheme, p_s_target),
        FadingModel::Rician { .. } => {
            ser::invert_average_ser_bound(scheme, p_s_target, fading, 1e-12)
        }
    }
}

/// Total energy of one N-bit frame at the SER target.
///
/// RF transmit and amplifier energy ride on the bound-inverted symbol
/// energy; circuit energy runs over the scheme's active window; start-up
/// charges two synthesizers (pulse generators for OOK). The OOK figure is
/// the expectation over the binomial number of "1" pulses (`E[L] = N/2`).
pub fn total_frame_energy(
    scheme: &Scheme,
    p_s_target: f64,
    link: &LinkBudget,
    fading: &FadingModel,
    timing: &FrameTiming,
    radio: &RadioParameters,
) -> Result<EnergyBreakdown> {
    radio.validate()?;
    let t_ac = scheme.active_duration(timing)?;
    let chi = radio.chi_e;
    let n = timing.n_bits as f64;

    let gamma_req = required_snr(scheme, p_s_target, fading)?;
    let e_t = gamma_req * link.path_loss_gain() * radio.n0 / fading.omega();
    let alpha = scheme.amplifier_coefficient(radio);
    let pulses = match *scheme {
        Scheme::Ook { .. } | Scheme::DiffOqpsk => n / 2.0,
        _ => n / scheme.bits_per_symbol(),
    };
    let e_rf_tx = (1.0 + alpha) * e_t * pulses / chi;

    let (p_ct, p_cr) = scheme.circuit_powers(radio);
    let (e_circuit, e_transient) = match *scheme {
        Scheme::Ook { .. } => {
            // pulse generator and sink chain run for the whole window; the
            // transmit filter only during the expected on-time of the pulses
            let e_c = (p_cr + radio.p_pg) * t_ac / chi
                + (n / (2.0 * timing.bandwidth_hz)) * radio.p_filt / chi;
            (e_c, 2.0 * radio.p_pg * timing.t_transient_s / chi)
        }
        _ => {
            let ovh = if scheme.is_linear_carrier() { radio.p_ovh } else { 0.0 };
            let e_c = (p_ct + p_cr + ovh) * t_ac / chi;
            (e_c, 2.0 * radio.p_sy * timing.t_transient_s / chi)
        }
    };

    Ok(EnergyBreakdown::new(e_rf_tx, e_circuit, e_transient))
}

/// OOK frame energy conditioned on `l_ones` transmitted "1" pulses.
///
/// Linear in `l_ones`; its expectation under `L ~ Binomial(N, 1/2)` equals
/// [`total_frame_energy`] for the OOK scheme.
pub fn ook_frame_energy_conditional(
    scheme: &Scheme,
    l_ones: u32,
    p_s_target: f64,
    link: &LinkBudget,
    fading: &FadingModel,
    timing: &FrameTiming,
    radio: &RadioParameters,
) -> Result<f64> {
    let Scheme::Ook { .. } = scheme else {
        return Err(Error::UnsupportedScheme("conditional energy is OOK-only".into()));
    };
    if l_ones > timing.n_bits {
        return Err(Error::InvalidParameter(format!(
            "l_ones {l_ones} exceeds frame payload {}",
            timing.n_bits
        )));
    }
    radio.validate()?;
    let t_ac = scheme.active_duration(timing)?;
    let chi = radio.chi_e;
    let l = l_ones as f64;

    let gamma_req = required_snr(scheme, p_s_target, fading)?;
    let e_t = gamma_req * link.path_loss_gain() * radio.n0 / fading.omega();
    let alpha = scheme.amplifier_coefficient(radio);
    let (_, p_cr) = scheme.circuit_powers(radio);

    Ok((1.0 + alpha) * l * e_t / chi
        + ((p_cr + radio.p_pg) * t_ac
            + (l / timing.bandwidth_hz) * radio.p_filt
            + 2.0 * radio.p_pg * timing.t_transient_s)
            / chi)
}
