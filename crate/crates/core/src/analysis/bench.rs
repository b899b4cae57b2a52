use std::time::Instant;

use super::montecarlo::{baseline_monte_carlo, tsinbl_monte_carlo};
use super::report::{ExperimentReport, Table};
use super::stats::{linear_fit, max_relative_spread};
use crate::amplitude::Lambda;
use crate::error::Result;
use crate::identify::required_periods;
use crate::rtw::derive_seed;

/// Baseline scans are skipped above this `N`.
pub const BASELINE_BENCH_CAP: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub bits: Vec<usize>,
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
    /// Adds wall-clock columns; these make the output non-reproducible.
    pub timing: bool,
}

/// Shifted-identifier cost versus baseline scan cost across `N`.
///
/// The shifted cost is the mean number of ticks observed before every bit is
/// decided; the baseline cost is mean tests × periods per test. Checks: the
/// shifted cost per bit stays within ±15% of its mean, and the slope of
/// log₂(mean baseline tests) against `N` is 1.0 ± 0.1.
pub fn identification_benchmark(cfg: &BenchConfig) -> Result<ExperimentReport> {
    let mut columns: Vec<String> = [
        "n",
        "max_periods",
        "tsinbl_mean_ticks",
        "tsinbl_ticks_per_bit",
        "tsinbl_budget_ticks",
        "tsinbl_undecided_rate",
        "baseline_mean_tests",
        "baseline_periods_per_test",
        "baseline_cost_periods",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if cfg.timing {
        columns.push("tsinbl_us_per_trial".into());
        columns.push("baseline_us_per_trial".into());
    }

    let mut rows = Vec::new();
    let mut ts_n = Vec::new();
    let mut ts_cost = Vec::new();
    let mut ts_budget = Vec::new();
    let mut bl_n = Vec::new();
    let mut bl_log_tests = Vec::new();

    for (i, &n) in cfg.bits.iter().enumerate() {
        let m = required_periods(n, cfg.epsilon)?;
        let started = Instant::now();
        let ts = tsinbl_monte_carlo(n, m, cfg.trials, derive_seed(cfg.seed, i as u64), &Lambda::half())?;
        let ts_us = started.elapsed().as_secs_f64() * 1e6 / cfg.trials as f64;
        let budget = 2 * n as u64 * m;
        ts_n.push(n as f64);
        ts_cost.push(ts.mean_ticks());
        ts_budget.push(budget as f64 / n as f64);

        let mut row = vec![
            n.to_string(),
            m.to_string(),
            ts.mean_ticks().to_string(),
            (ts.mean_ticks() / n as f64).to_string(),
            budget.to_string(),
            ts.undecided_rate().to_string(),
        ];
        let mut bl_us = String::new();
        if n <= BASELINE_BENCH_CAP {
            let started = Instant::now();
            let bl = baseline_monte_carlo(n, cfg.epsilon, cfg.trials, derive_seed(cfg.seed, 1000 + i as u64))?;
            bl_us = (started.elapsed().as_secs_f64() * 1e6 / cfg.trials as f64).to_string();
            bl_n.push(n as f64);
            bl_log_tests.push(bl.mean_tests().log2());
            row.push(bl.mean_tests().to_string());
            row.push(bl.periods_per_test.to_string());
            row.push(bl.mean_cost_periods().to_string());
        } else {
            row.extend(std::iter::repeat_n(String::new(), 3));
        }
        if cfg.timing {
            row.push(ts_us.to_string());
            row.push(bl_us);
        }
        rows.push(row);
    }

    let mut r = ExperimentReport::new("bench", Some(cfg.seed));
    let bits: Vec<String> = cfg.bits.iter().map(|n| n.to_string()).collect();
    r.param("bits", bits.join(" ")).param("epsilon", cfg.epsilon).param("trials", cfg.trials);
    r.table = Some(Table { columns, rows });

    if let Some((slope, intercept)) = linear_fit(&ts_n, &ts_cost) {
        r.metric("tsinbl_linear_slope", slope, None).metric("tsinbl_linear_intercept", intercept, None);
    }
    let log_n: Vec<f64> = ts_n.iter().map(|n| n.ln()).collect();
    let log_cost: Vec<f64> = ts_cost.iter().map(|c| c.ln()).collect();
    if let Some((exponent, _)) = linear_fit(&log_n, &log_cost) {
        r.metric("tsinbl_loglog_exponent", exponent, Some("1".into()));
    }
    if let Some(spread) = max_relative_spread(&ts_budget) {
        r.metric("tsinbl_budget_per_bit_spread", spread, None);
    }
    let per_bit: Vec<f64> = ts_n.iter().zip(&ts_cost).map(|(n, c)| c / n).collect();
    if let Some(spread) = max_relative_spread(&per_bit) {
        r.check("tsinbl_cost_per_bit_constant", spread, 0, "0.15", spread <= 0.15);
    }
    if let Some((slope, _)) = linear_fit(&bl_n, &bl_log_tests) {
        r.check("baseline_log2_tests_slope", slope, 1, "0.1", (slope - 1.0).abs() <= 0.1);
    }
    Ok(r)
}
