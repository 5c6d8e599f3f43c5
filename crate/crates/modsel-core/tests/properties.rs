//! Property tests for the invariants the closed forms must satisfy.

use proptest::prelude::*;

use modsel_core::ser::{average_ser_bound, required_snr_rayleigh, ser_bound};
use modsel_core::{frame_energy, FadingModel, LinkBudget, Scheme};

fn arb_scheme() -> impl Strategy<Value = Scheme> {
    prop_oneof![
        (1u32..=6).prop_map(|k| Scheme::nc_mfsk(1 << k).unwrap()),
        (4u32..=64).prop_map(|m| Scheme::mqam(m).unwrap()),
        Just(Scheme::diff_oqpsk()),
        (0.05f64..=1.0).prop_map(|d| Scheme::ook_with_duty(d).unwrap()),
    ]
}

proptest! {
    // bound(required_snr(p)) = p for any attainable target
    #[test]
    fn inversion_round_trips(scheme in arb_scheme(), exp in -6.0f64..-0.6) {
        let p = 10f64.powf(exp);
        if p < modsel_core::ser::zero_snr_limit(&scheme).min(1.0) {
            let snr = required_snr_rayleigh(&scheme, p).unwrap();
            prop_assert!(snr > 0.0);
            let back = ser_bound(&scheme, snr);
            prop_assert!(((back - p) / p).abs() < 1e-9, "{back} vs {p}");
        }
    }

    #[test]
    fn bound_decreasing_in_snr(scheme in arb_scheme(), a in 0.0f64..1e5, delta in 1e-3f64..1e5) {
        let lo = ser_bound(&scheme, a + delta);
        let hi = ser_bound(&scheme, a);
        prop_assert!(lo <= hi);
    }

    // the Rayleigh arm of the fading-averaged bound is the closed form
    #[test]
    fn rayleigh_average_is_closed_form(scheme in arb_scheme(), snr in 0.0f64..1e6, omega in 0.1f64..10.0) {
        let fading = FadingModel::rayleigh(omega).unwrap();
        let avg = average_ser_bound(&scheme, snr, &fading);
        prop_assert!((avg - ser_bound(&scheme, snr)).abs() <= 1e-12);
    }

    #[test]
    fn frame_energy_scales(p_c in 0.0f64..1.0, p_t in 0.0f64..1.0, t in 0.0f64..10.0, chi in 0.05f64..1.0) {
        let base = frame_energy(p_c, p_t, t, 0.0, 0.0, chi).unwrap();
        let doubled = frame_energy(2.0 * p_c, 2.0 * p_t, t, 0.0, 0.0, chi).unwrap();
        prop_assert!((doubled - 2.0 * base).abs() <= 1e-12 * base.max(1.0));
        if chi <= 0.5 {
            let half = frame_energy(p_c, p_t, t, 0.0, 0.0, 2.0 * chi).unwrap();
            prop_assert!((half - base / 2.0).abs() <= 1e-12 * base.max(1.0));
        }
    }

    #[test]
    fn path_loss_monotone(d in 1.0f64..500.0, eta in 1.0f64..6.0, bump in 0.01f64..2.0) {
        let g = |d: f64, eta: f64| LinkBudget::new(d, eta).unwrap().path_loss_gain();
        prop_assert!(g(d + bump, eta) > g(d, eta));
        if d > 1.0 {
            prop_assert!(g(d, (eta + 0.1).min(6.0)) >= g(d, eta));
        }
    }

    #[test]
    fn rician_total_power_reconstructs(k_db in -30.0f64..25.0, omega in 0.1f64..10.0) {
        let f = FadingModel::rician(k_db, omega).unwrap();
        let (a, sigma2) = f.los_and_sigma2();
        prop_assert!(((a * a + 2.0 * sigma2) - omega).abs() <= 1e-9 * omega);
    }
}
