//! Scenario configuration: built-in defaults, file overrides, flag overrides.
//!
//! The file format is flat JSON mirroring [`ScenarioConfig`]; any subset of
//! fields may be given and the rest keep their defaults (deep merge). CLI
//! flags override file values, which override the built-in profiles.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use modsel_core::{FadingModel, FrameTiming, LinkBudget, RadioParameters, Scheme};

/// Frame timing plus radio profile of one link flavor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkProfile {
    pub n_bits: u32,
    pub t_frame_s: f64,
    pub t_transient_s: f64,
    pub bandwidth_hz: f64,
    pub radio: RadioParameters,
}

impl LinkProfile {
    fn narrowband() -> Self {
        let t = FrameTiming::narrowband();
        Self {
            n_bits: t.n_bits,
            t_frame_s: t.t_frame_s,
            t_transient_s: t.t_transient_s,
            bandwidth_hz: t.bandwidth_hz,
            radio: RadioParameters::narrowband(),
        }
    }

    fn uwb_ook() -> Self {
        let t = FrameTiming::uwb_ook();
        Self {
            n_bits: t.n_bits,
            t_frame_s: t.t_frame_s,
            t_transient_s: t.t_transient_s,
            bandwidth_hz: t.bandwidth_hz,
            radio: RadioParameters::uwb_ook(),
        }
    }

    pub fn timing(&self) -> Result<FrameTiming> {
        Ok(FrameTiming::new(self.n_bits, self.t_frame_s, self.t_transient_s, self.bandwidth_hz)?)
    }
}

/// One scenario: link geometry, SER target, fading, scheme, sweep grids, and
/// the two link profiles (sinusoidal-carrier and pulsed OOK).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub d_m: f64,
    pub eta: f64,
    pub ps: f64,
    pub margin_db: f64,
    pub ref_gain_db: f64,
    /// "rayleigh" or "rician".
    pub fading: String,
    /// Rician factor in dB (used when `fading = "rician"`).
    pub k_db: f64,
    /// Mean-square channel gain. For Rician scenarios the LOS power adds on
    /// top of this diffuse level.
    pub omega: f64,
    /// "ncmfsk", "mqam", "oqpsk", or "ook".
    pub scheme: String,
    pub m: u32,
    pub duty_cycle: f64,
    pub seed: u64,
    /// Sweep grids; empty means the command default.
    pub m_grid: Vec<u32>,
    pub d_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub carrier: LinkProfile,
    pub ook: LinkProfile,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            d_m: 10.0,
            eta: 3.5,
            ps: 1e-3,
            margin_db: 40.0,
            ref_gain_db: 30.0,
            fading: "rayleigh".into(),
            k_db: 10.0,
            omega: 1.0,
            scheme: "ncmfsk".into(),
            m: 2,
            duty_cycle: 0.5,
            seed: 1,
            m_grid: Vec::new(),
            d_grid: Vec::new(),
            eta_grid: Vec::new(),
            carrier: LinkProfile::narrowband(),
            ook: LinkProfile::uwb_ook(),
        }
    }
}

impl ScenarioConfig {
    /// Canonical JSON emission; parsing this back and emitting again is
    /// byte-identical (pinned by the round-trip test below).
    #[allow(dead_code)]
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Defaults deep-merged with the JSON text: fields present in the text
    /// win, everything else keeps its default.
    pub fn from_json_overrides(text: &str) -> Result<Self> {
        let overrides: Value =
            serde_json::from_str(text).context("config file is not valid JSON")?;
        if !overrides.is_object() {
            bail!("config file must contain a JSON object");
        }
        let mut base =
            serde_json::to_value(ScenarioConfig::default()).expect("defaults serialize");
        merge(&mut base, &overrides)?;
        let cfg: ScenarioConfig =
            serde_json::from_value(base).context("config fields have wrong types")?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        match self.fading.as_str() {
            "rayleigh" | "rician" => {}
            other => bail!("unknown fading model {other:?} (want rayleigh|rician)"),
        }
        match self.scheme.as_str() {
            "ncmfsk" | "mqam" | "oqpsk" | "ook" => {}
            other => bail!("unknown scheme {other:?} (want ncmfsk|mqam|oqpsk|ook)"),
        }
        if !(self.ps > 0.0 && self.ps < 1.0) {
            bail!("ps {} must be in (0, 1)", self.ps);
        }
        Ok(())
    }

    pub fn link(&self) -> Result<LinkBudget> {
        Ok(LinkBudget::with_gains(self.d_m, self.eta, self.margin_db, self.ref_gain_db)?)
    }

    pub fn link_at(&self, d_m: f64, eta: f64) -> Result<LinkBudget> {
        Ok(LinkBudget::with_gains(d_m, eta, self.margin_db, self.ref_gain_db)?)
    }

    /// Fading model of the scenario. Rician scenarios add the LOS power on
    /// top of the diffuse gain `omega`.
    pub fn fading_model(&self) -> Result<FadingModel> {
        Ok(match self.fading.as_str() {
            "rayleigh" => FadingModel::rayleigh(self.omega)?,
            _ => FadingModel::rician_added_los(self.k_db, self.omega)?,
        })
    }

    pub fn scheme_object(&self) -> Result<Scheme> {
        Ok(match self.scheme.as_str() {
            "ncmfsk" => Scheme::nc_mfsk(self.m)?,
            "mqam" => Scheme::mqam(self.m)?,
            "oqpsk" => Scheme::diff_oqpsk(),
            _ => Scheme::ook_with_duty(self.duty_cycle)?,
        })
    }
}

fn merge(base: &mut Value, overrides: &Value) -> Result<()> {
    match (base, overrides) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v)?,
                    None => bail!("unknown config field {k:?}"),
                }
            }
            Ok(())
        }
        (slot, v) => {
            *slot = v.clone();
            Ok(())
        }
    }
}
