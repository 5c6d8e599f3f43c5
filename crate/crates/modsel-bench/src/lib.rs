//! Shared fixtures for the criterion benches.

use modsel_core::{FadingModel, FrameTiming, LinkBudget, RadioParameters};

pub struct Fixture {
    pub timing: FrameTiming,
    pub radio: RadioParameters,
    pub link: LinkBudget,
    pub rayleigh: FadingModel,
    pub rician: FadingModel,
}

/// Narrowband evaluation profile at 10 m with path-loss exponent 3.5.
pub fn narrowband_10m() -> Fixture {
    Fixture {
        timing: FrameTiming::narrowband(),
        radio: RadioParameters::narrowband(),
        link: LinkBudget::new(10.0, 3.5).expect("valid link"),
        rayleigh: FadingModel::rayleigh(1.0).expect("valid fading"),
        rician: FadingModel::rician(10.0, 1.0).expect("valid fading"),
    }
}
