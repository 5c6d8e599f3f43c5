//! Energy planning for duty-cycled wireless sensor links.
//!
//! Models the total energy a sensor/sink pair spends moving an N-bit frame
//! through a path-loss channel with Rayleigh or Rician flat fading, for four
//! candidate modulations: non-coherent M-ary FSK, coherent MQAM,
//! differential offset-QPSK, and pulsed non-coherent OOK. On top of the
//! per-scheme models sit constellation-size optimization, distance-based
//! scheme selection, per-bit comparisons across bandwidth regimes, and a
//! seeded Monte Carlo oracle that validates every symbol-error bound the
//! energy inversions rely on.
//!
//! Modules:
//! - [`frame`]: duty-cycle timing and per-frame energy accounting
//! - [`channel`]: path-loss gain, fading models, average SNR
//! - [`schemes`]: per-scheme bandwidth, SER bounds, and frame energies
//! - [`ser`]: bound kernels, fading averages, SNR inversions
//! - [`optimizer`]: constellation scans and scheme selection
//! - [`mc`]: Monte Carlo symbol-error oracle

pub mod channel;
pub mod error;
pub mod frame;
pub mod mc;
pub mod optimizer;
pub mod schemes;
pub mod ser;

pub use channel::{average_snr, sample_channel_gain, FadingModel, LinkBudget};
pub use error::{Error, Result};
pub use frame::{frame_energy, EnergyBreakdown, FrameTiming};
pub use mc::{
    invert_ser_mc, invert_ser_numeric, simulate_ser, validate_bounds, BoundValidationRow,
    SerEstimate,
};
pub use optimizer::{
    compare_per_bit, max_constellation, mqam_intersection_m, optimize_constellation,
    select_modulation, ConstellationFamily, OptimizationResult, PerBitPoint, PerBitScenarios,
    RankedEntry, Selection,
};
pub use schemes::{
    ook_frame_energy_conditional, required_snr, required_symbol_energy, total_frame_energy,
    RadioParameters, Scheme,
};
