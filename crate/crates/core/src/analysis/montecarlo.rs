use rayon::prelude::*;

use crate::algebra::ProductString;
use crate::amplitude::Lambda;
use crate::error::Result;
use crate::identify::{baseline_periods, baseline_search, tsinbl_identify};
use crate::rtw::{build_reference_system, derive_seed, low_mask, mix64};
use crate::signal::{ProductWave, Waveform};

const HIDDEN_TAG: u64 = 0x4849_4444_454E;

/// Uniformly random hidden string for one trial.
pub fn hidden_string(trial_seed: u64, num_bits: usize) -> Result<ProductString> {
    ProductString::new(num_bits, mix64(trial_seed ^ HIDDEN_TAG) & low_mask(num_bits))
}

/// Aggregate of independent time-shifted identification trials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TsinblStats {
    pub trials: u64,
    /// Trials with at least one undecided bit when the budget ran out.
    pub undecided_trials: u64,
    pub complete_trials: u64,
    /// Complete trials whose recovered string equals the hidden one.
    pub correct_complete: u64,
    /// Decided bits that disagree with the hidden string, over all trials.
    pub wrong_bits: u64,
    pub total_ticks: u64,
    pub total_periods: u64,
}

impl TsinblStats {
    fn merge(mut self, o: Self) -> Self {
        self.trials += o.trials;
        self.undecided_trials += o.undecided_trials;
        self.complete_trials += o.complete_trials;
        self.correct_complete += o.correct_complete;
        self.wrong_bits += o.wrong_bits;
        self.total_ticks += o.total_ticks;
        self.total_periods += o.total_periods;
        self
    }

    pub fn undecided_rate(&self) -> f64 {
        self.undecided_trials as f64 / self.trials as f64
    }

    pub fn mean_ticks(&self) -> f64 {
        self.total_ticks as f64 / self.trials as f64
    }

    pub fn mean_periods(&self) -> f64 {
        self.total_periods as f64 / self.trials as f64
    }

    pub fn sound(&self) -> bool {
        self.wrong_bits == 0 && self.correct_complete == self.complete_trials
    }
}

/// Runs `trials` identifications of random hidden strings, `max_periods`
/// observed periods each, on independently seeded reference systems.
pub fn tsinbl_monte_carlo(
    num_bits: usize,
    max_periods: u64,
    trials: u64,
    seed: u64,
    lambda: &Lambda,
) -> Result<TsinblStats> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i);
            let refs = build_reference_system(trial_seed, num_bits, max_periods + 1, lambda.clone())?;
            let hidden = hidden_string(trial_seed, num_bits)?;
            let wave = ProductWave::new(&refs, hidden, true)?;
            let res = tsinbl_identify(&wave, &refs, max_periods)?;
            let wrong = res.decided().iter().filter(|(r, l)| hidden.level(**r) != **l).count() as u64;
            let complete = res.is_complete();
            Ok(TsinblStats {
                trials: 1,
                undecided_trials: u64::from(!complete),
                complete_trials: u64::from(complete),
                correct_complete: u64::from(res.product_string() == Some(hidden)),
                wrong_bits: wrong,
                total_ticks: res.ticks_observed(),
                total_periods: res.periods_used(),
            })
        })
        .try_reduce(TsinblStats::default, |a, b| Ok(a.merge(b)))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BaselineStats {
    pub trials: u64,
    pub total_tests: u64,
    pub correct: u64,
    pub periods_per_test: u64,
}

impl BaselineStats {
    pub fn mean_tests(&self) -> f64 {
        self.total_tests as f64 / self.trials as f64
    }

    /// Mean tests × periods per test.
    pub fn mean_cost_periods(&self) -> f64 {
        self.mean_tests() * self.periods_per_test as f64
    }
}

/// Runs `trials` baseline scans at unit λ on unshifted waveforms of random hidden strings.
pub fn baseline_monte_carlo(num_bits: usize, epsilon: f64, trials: u64, seed: u64) -> Result<BaselineStats> {
    let periods = baseline_periods(epsilon)?;
    let stats = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i);
            let refs = build_reference_system(trial_seed, num_bits, periods, Lambda::unit())?;
            let hidden = hidden_string(trial_seed, num_bits)?;
            let wave = ProductWave::new(&refs, hidden, false)?;
            let out = baseline_search(&wave, &refs, epsilon)?;
            Ok(BaselineStats {
                trials: 1,
                total_tests: out.tests_performed,
                correct: u64::from(out.string == hidden),
                periods_per_test: 0,
            })
        })
        .try_reduce(BaselineStats::default, |a, b| {
            Ok(BaselineStats {
                trials: a.trials + b.trials,
                total_tests: a.total_tests + b.total_tests,
                correct: a.correct + b.correct,
                periods_per_test: 0,
            })
        })?;
    Ok(BaselineStats { periods_per_test: periods, ..stats })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MismatchStats {
    pub first: ProductString,
    pub second: ProductString,
    pub periods: u64,
    pub mismatches: u64,
}

impl MismatchStats {
    pub fn rate(&self) -> f64 {
        self.mismatches as f64 / self.periods as f64
    }
}

/// Per-period readout mismatch count between two distinct random strings at unit λ.
pub fn mismatch_rate(num_bits: usize, periods: u64, seed: u64) -> Result<MismatchStats> {
    let refs = build_reference_system(seed, num_bits, periods, Lambda::unit())?;
    let first = hidden_string(seed, num_bits)?;
    let mut second = hidden_string(derive_seed(seed, 1), num_bits)?;
    if second == first {
        second = first.flipped(1);
    }
    let a = ProductWave::new(&refs, first, false)?;
    let b = ProductWave::new(&refs, second, false)?;
    let grid = *refs.grid();
    let mismatches = (0..periods)
        .into_par_iter()
        .filter(|&k| a.signum(grid.readout_tick(k)) != b.signum(grid.readout_tick(k)))
        .count() as u64;
    Ok(MismatchStats { first, second, periods, mismatches })
}
