//! Instantaneous noise-based logic over random-telegraph-wave references.
//!
//! The crate is layered bottom-up:
//!
//! - [`rtw`]: seed-reproducible ±1 reference signals and the sub-clock grid.
//! - [`algebra`]: exact symbolic product-strings and superpositions.
//! - [`signal`]: the same objects as time-domain waveforms.
//! - [`identify`]: time-shifted O(N) identification and the O(2^N) baseline scan.
//! - [`analysis`]: Monte Carlo experiments, the resolution calculator and benchmarks.
//!
//! All amplitudes are exact rationals. Time is measured in integer sub-clock
//! ticks; a clock period is `2N` ticks.

pub mod algebra;
pub mod amplitude;
pub mod analysis;
pub mod error;
pub mod identify;
pub mod rtw;
pub mod signal;

pub use algebra::{
    apply_not, evaluate_symbolic, expand, uniform_superposition, FactoredSuperposition, Level, ProductString,
    Superposition, Symbolic, DEFAULT_EXPANSION_CAP,
};
pub use amplitude::{Lambda, Rational};
pub use error::{Error, Result};
pub use identify::{
    baseline_periods, baseline_search, baseline_verify, error_bound, required_periods, tsinbl_identify, ErrorBudget,
    IdentificationResult, SearchOutcome, Verification,
};
pub use rtw::{
    build_reference_system, gen_rtw, value_at, ClockGrid, ReferenceSystem, Role, RtwProcess, Sign, SignAssignment,
    StreamId,
};
pub use signal::{readout, trace_product, trace_superposition, SignalTrace, Waveform};
