//! Experiment harness: Monte Carlo checks of the probability claims, exact
//! amplitude-range enumeration, the resolution calculator and scaling
//! benchmarks. Every experiment is reproducible from its master seed.

mod bench;
mod experiments;
mod montecarlo;
mod report;
pub mod stats;

pub use bench::{identification_benchmark, BenchConfig, BASELINE_BENCH_CAP};
pub use experiments::{
    amplitude_range_experiment, identification_experiment, not_gate_demo, resolution_bits, resolution_report,
    zero_probability_experiment, RangeMode, ZERO_PROB_CHUNK,
};
pub use montecarlo::{
    baseline_monte_carlo, hidden_string, mismatch_rate, tsinbl_monte_carlo, BaselineStats, MismatchStats, TsinblStats,
};
pub use report::{Check, ExperimentReport, Metric, Table};
