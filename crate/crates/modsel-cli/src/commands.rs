//! The five CLI commands: sweep, tables, validate-ser, compare-ook, optimize.

use std::path::Path;

use anyhow::anyhow;

use modsel_core::{
    compare_per_bit, optimize_constellation, select_modulation, total_frame_energy,
    validate_bounds, ConstellationFamily, FadingModel, PerBitScenarios, Scheme,
};

use crate::config::ScenarioConfig;
use crate::output::{emit, sig15, Csv};
use crate::AppError;

/// Reference evaluation grids.
pub const D_GRID: [f64; 8] = [1.0, 10.0, 20.0, 40.0, 80.0, 100.0, 150.0, 200.0];
pub const ETA_GRID: [f64; 5] = [2.5, 3.0, 4.0, 5.0, 6.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    M,
    D,
    Eta,
    Beff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Table {
    Iii,
    Iv,
    V,
}

fn breakdown_fields(bd: &modsel_core::EnergyBreakdown) -> [String; 4] {
    [sig15(bd.e_rf_tx), sig15(bd.e_circuit_active), sig15(bd.e_transient), sig15(bd.e_total)]
}

fn scheme_m(scheme: &Scheme) -> u32 {
    match *scheme {
        Scheme::NcMfsk { m, .. } | Scheme::Mqam { m } => m,
        Scheme::DiffOqpsk => 4,
        Scheme::Ook { .. } => 2,
    }
}

/// Parameter sweep along exactly one axis; one row per grid point per scheme.
pub fn cmd_sweep(
    cfg: &ScenarioConfig,
    axis: Axis,
    schemes: &[String],
    out: Option<&Path>,
) -> Result<(), AppError> {
    let fading = cfg.fading_model()?;
    let carrier_timing = cfg.carrier.timing()?;
    let ook_timing = cfg.ook.timing()?;

    let eval = |scheme: &Scheme, d: f64, eta: f64| -> Result<_, modsel_core::Error> {
        let link = cfg.link_at(d, eta).map_err(|e| {
            modsel_core::Error::InvalidParameter(e.to_string())
        })?;
        let (timing, radio) = match scheme {
            Scheme::Ook { .. } => (&ook_timing, &cfg.ook.radio),
            _ => (&carrier_timing, &cfg.carrier.radio),
        };
        total_frame_energy(scheme, cfg.ps, &link, &fading, timing, radio)
    };

    let axis_label = match axis {
        Axis::M => "m",
        Axis::D => "d_m",
        Axis::Eta => "eta",
        Axis::Beff => "b_eff",
    };
    let mut csv = Csv::new(&[
        axis_label,
        "scheme",
        "m",
        "e_rf_tx_j",
        "e_circuit_active_j",
        "e_transient_j",
        "e_total_j",
    ]);

    let mut push = |axis_value: String, scheme: &Scheme, d: f64, eta: f64| -> Result<(), AppError> {
        match eval(scheme, d, eta) {
            Ok(bd) => {
                let [a, b, c, t] = breakdown_fields(&bd);
                csv.row(&[
                    axis_value,
                    scheme.label(),
                    scheme_m(scheme).to_string(),
                    a,
                    b,
                    c,
                    t,
                ]);
                Ok(())
            }
            // an infeasible constellation is excluded from the sweep
            Err(modsel_core::Error::FrameOverrun { .. }) => Ok(()),
            Err(e) => Err(e.into()),
        }
    };

    match axis {
        Axis::M | Axis::Beff => {
            let m_grid: Vec<u32> = if cfg.m_grid.is_empty() {
                vec![2, 4, 8, 16, 32, 64]
            } else {
                cfg.m_grid.clone()
            };
            for &m in &m_grid {
                for name in schemes {
                    let scheme = match (name.as_str(), axis) {
                        ("ncmfsk", _) if m.is_power_of_two() && m >= 2 => Scheme::nc_mfsk(m)?,
                        ("mqam", Axis::M) if m >= 4 => Scheme::mqam(m)?,
                        ("oqpsk", Axis::M) => Scheme::diff_oqpsk(),
                        ("ook", Axis::M) => Scheme::ook_with_duty(cfg.duty_cycle)?,
                        _ => continue,
                    };
                    let axis_value = match axis {
                        Axis::Beff => format!("{}", scheme.bandwidth_efficiency()),
                        _ => m.to_string(),
                    };
                    push(axis_value, &scheme, cfg.d_m, cfg.eta)?;
                }
            }
        }
        Axis::D => {
            let grid = if cfg.d_grid.is_empty() { D_GRID.to_vec() } else { cfg.d_grid.clone() };
            let scheme = cfg.scheme_object()?;
            for &d in &grid {
                push(format!("{d}"), &scheme, d, cfg.eta)?;
            }
        }
        Axis::Eta => {
            let grid =
                if cfg.eta_grid.is_empty() { ETA_GRID.to_vec() } else { cfg.eta_grid.clone() };
            let scheme = cfg.scheme_object()?;
            for &eta in &grid {
                push(format!("{eta}"), &scheme, cfg.d_m, eta)?;
            }
        }
    }
    emit(out, &csv.into_string())?;
    Ok(())
}

/// Reproduce one of the reference evaluation tables.
pub fn cmd_tables(cfg: &ScenarioConfig, which: Table, out: Option<&Path>) -> Result<(), AppError> {
    let timing = cfg.carrier.timing()?;
    let radio = &cfg.carrier.radio;
    match which {
        Table::Iii | Table::Iv => {
            let d_grid = if cfg.d_grid.is_empty() { D_GRID.to_vec() } else { cfg.d_grid.clone() };
            let eta_grid =
                if cfg.eta_grid.is_empty() { ETA_GRID.to_vec() } else { cfg.eta_grid.clone() };
            let fading = FadingModel::rayleigh(cfg.omega)?;
            let header: Vec<String> = std::iter::once("d_m".to_string())
                .chain(eta_grid.iter().map(|e| format!("eta_{e}")))
                .collect();
            let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
            let mut csv = Csv::new(&header_refs);
            for &d in &d_grid {
                let mut row = vec![format!("{d}")];
                for &eta in &eta_grid {
                    let link = cfg.link_at(d, eta)?;
                    let cell = match which {
                        Table::Iii => {
                            let r = optimize_constellation(
                                ConstellationFamily::Mqam,
                                cfg.ps,
                                &link,
                                &fading,
                                &timing,
                                radio,
                            )?;
                            scheme_m(&r.scheme).to_string()
                        }
                        _ => {
                            let sel =
                                select_modulation(&link, cfg.ps, &fading, &timing, radio)?;
                            sel.winner().scheme.label()
                        }
                    };
                    row.push(cell);
                }
                csv.row(&row);
            }
            emit(out, &csv.into_string())?;
        }
        Table::V => {
            let d_grid =
                if cfg.d_grid.is_empty() { vec![10.0, 100.0] } else { cfg.d_grid.clone() };
            let k_grid = [1.0, 10.0, 15.0];
            let m_grid = [4u32, 16, 64];
            let mut csv = Csv::new(&[
                "d_m",
                "k_db",
                "m",
                "e_oqpsk_j",
                "e_ncmfsk_j",
                "e_mqam_j",
            ]);
            for &d in &d_grid {
                let link = cfg.link_at(d, cfg.eta)?;
                for k_db in k_grid {
                    let fading = FadingModel::rician_added_los(k_db, cfg.omega)?;
                    let e = |s: &Scheme| -> Result<f64, modsel_core::Error> {
                        Ok(total_frame_energy(s, cfg.ps, &link, &fading, &timing, radio)?.e_total)
                    };
                    let oq = e(&Scheme::diff_oqpsk())?;
                    for m in m_grid {
                        let fsk = e(&Scheme::nc_mfsk(m)?)?;
                        let qam = e(&Scheme::mqam(m)?)?;
                        csv.row(&[
                            format!("{d}"),
                            format!("{k_db}"),
                            m.to_string(),
                            sig15(oq),
                            sig15(fsk),
                            sig15(qam),
                        ]);
                    }
                }
            }
            emit(out, &csv.into_string())?;
        }
    }
    Ok(())
}

/// Monte Carlo validation of every SER bound on the reference grid.
/// Exits nonzero when any point beats its bound past confidence noise.
pub fn cmd_validate_ser(
    cfg: &ScenarioConfig,
    n_symbols: u64,
    out: Option<&Path>,
) -> Result<(), AppError> {
    let schemes = [
        Scheme::nc_mfsk(2)?,
        Scheme::nc_mfsk(4)?,
        Scheme::nc_mfsk(8)?,
        Scheme::nc_mfsk(16)?,
        Scheme::mqam(4)?,
        Scheme::mqam(16)?,
        Scheme::mqam(64)?,
        Scheme::ook_with_duty(cfg.duty_cycle)?,
    ];
    let fadings = [
        FadingModel::rayleigh(1.0)?,
        FadingModel::rician(1.0, 1.0)?,
        FadingModel::rician(10.0, 1.0)?,
    ];
    let gammas = [0.0, 10.0, 100.0, 1000.0];
    let rows = validate_bounds(&schemes, &gammas, &fadings, n_symbols, cfg.seed)?;

    let mut csv = Csv::new(&[
        "scheme",
        "m",
        "fading",
        "k_db",
        "gamma_bar",
        "bound",
        "p_hat",
        "ci_halfwidth",
        "pass",
    ]);
    let mut failures = 0usize;
    for r in &rows {
        let (fading_name, k_db) = match r.fading {
            FadingModel::Rayleigh { .. } => ("rayleigh", String::new()),
            FadingModel::Rician { k_db, .. } => ("rician", format!("{k_db}")),
        };
        if !r.pass {
            failures += 1;
        }
        csv.row(&[
            r.scheme.label(),
            scheme_m(&r.scheme).to_string(),
            fading_name.to_string(),
            k_db,
            format!("{}", r.gamma_bar),
            sig15(r.bound),
            sig15(r.estimate.p_hat),
            sig15(r.estimate.ci_halfwidth),
            if r.pass { "true".into() } else { "false".into() },
        ]);
    }
    emit(out, &csv.into_string())?;
    if failures > 0 {
        return Err(AppError::Validation(format!(
            "{failures} of {} grid points exceed their bound past 3 confidence half-widths",
            rows.len()
        )));
    }
    Ok(())
}

/// Per-information-bit energy of the optimized narrowband NC-MFSK link vs
/// the pulsed OOK link over a distance grid.
pub fn cmd_compare_ook(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<(), AppError> {
    let carrier_timing = cfg.carrier.timing()?;
    let ook_timing = cfg.ook.timing()?;
    let scenarios = PerBitScenarios {
        carrier_timing: &carrier_timing,
        carrier_radio: &cfg.carrier.radio,
        ook_timing: &ook_timing,
        ook_radio: &cfg.ook.radio,
        ook_duty: cfg.duty_cycle,
        margin_db: cfg.margin_db,
        ref_gain_db: cfg.ref_gain_db,
    };
    let fading = cfg.fading_model()?;
    let d_grid = if cfg.d_grid.is_empty() {
        vec![5.0, 10.0, 20.0, 40.0, 80.0, 100.0, 150.0, 200.0]
    } else {
        cfg.d_grid.clone()
    };
    let rows = compare_per_bit(&scenarios, cfg.ps, &fading, &d_grid, cfg.eta)?;
    let mut csv = Csv::new(&["d_m", "e_b_ncmfsk_j", "e_b_ook_j"]);
    for r in &rows {
        csv.row(&[format!("{}", r.distance_m), sig15(r.e_b_fsk), sig15(r.e_b_ook)]);
    }
    emit(out, &csv.into_string())?;
    Ok(())
}

/// Scheme selection at a single link: full ranking, winner flagged.
pub fn cmd_optimize(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<(), AppError> {
    let timing = cfg.carrier.timing()?;
    let link = cfg.link()?;
    let fading = cfg.fading_model()?;
    let sel = select_modulation(&link, cfg.ps, &fading, &timing, &cfg.carrier.radio)?;
    let mut csv = Csv::new(&[
        "d_m",
        "eta",
        "scheme",
        "m",
        "e_rf_tx_j",
        "e_circuit_active_j",
        "e_transient_j",
        "e_total_j",
        "winner",
    ]);
    for (i, entry) in sel.ranking.iter().enumerate() {
        let [a, b, c, t] = breakdown_fields(&entry.breakdown);
        csv.row(&[
            format!("{}", cfg.d_m),
            format!("{}", cfg.eta),
            entry.scheme.label(),
            scheme_m(&entry.scheme).to_string(),
            a,
            b,
            c,
            t,
            (i == 0).to_string(),
        ]);
    }
    emit(out, &csv.into_string())?;
    Ok(())
}

impl From<modsel_core::Error> for AppError {
    fn from(e: modsel_core::Error) -> Self {
        match e {
            modsel_core::Error::NonConvergence(msg) => AppError::NonConvergence(msg),
            other => AppError::Config(anyhow!(other)),
        }
    }
}
