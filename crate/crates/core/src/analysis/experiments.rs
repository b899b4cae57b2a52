use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::montecarlo::{baseline_monte_carlo, tsinbl_monte_carlo};
use super::report::ExperimentReport;
use super::stats::binomial_sigma;
use crate::algebra::{uniform_superposition, Level, ProductString, Symbolic, DEFAULT_EXPANSION_CAP};
use crate::amplitude::{format_rational, pow, rational_to_f64, Lambda, Rational};
use crate::error::{Error, Result};
use crate::identify::{error_bound_capped, required_periods, DEFAULT_SEARCH_CAP};
use crate::rtw::{build_reference_system, check_bits, derive_seed, SignAssignment, StreamId};
use crate::signal::{MonomialWave, SuperpositionWave, Waveform};

/// Periods per independently seeded reference system in the zero-probability run.
pub const ZERO_PROB_CHUNK: u64 = 1 << 16;

const ZERO_PROB_MAX_BITS: usize = 20;
const EXHAUSTIVE_MAX_BITS: usize = 6;

/// Estimates `P(readout ≠ 0)` of the uniform superposition at unit λ.
pub fn zero_probability_experiment(num_bits: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    check_bits(num_bits)?;
    if num_bits > ZERO_PROB_MAX_BITS {
        return Err(Error::TooManyBits(num_bits));
    }
    if trials == 0 {
        return Err(Error::ZeroPeriods);
    }
    let f = uniform_superposition(num_bits)?;
    let chunks = trials.div_ceil(ZERO_PROB_CHUNK);
    let nonzero: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = ZERO_PROB_CHUNK.min(trials - c * ZERO_PROB_CHUNK);
            let refs = build_reference_system(derive_seed(seed, c), num_bits, len, Lambda::unit())?;
            let wave = SuperpositionWave::new(&refs, &f, false)?;
            Ok((0..len).filter(|&k| !wave.readout_at(k).is_zero()).count() as u64)
        })
        .sum::<Result<u64>>()?;

    let theory = Rational::new(BigInt::one(), BigInt::one() << num_bits);
    let p = rational_to_f64(&theory);
    let estimate = nonzero as f64 / trials as f64;
    let sigma = binomial_sigma(p, trials);
    let tol = 3.0 * sigma;

    let mut r = ExperimentReport::new("zero-prob", Some(seed));
    r.param("bits", num_bits).param("lambda", "1/1").param("trials", trials);
    r.metric("nonzero_count", nonzero, None)
        .metric("estimate", estimate, Some(format_rational(&theory)))
        .metric("sigma", sigma, None);
    r.check("nonzero_probability", estimate, p, format!("3sigma={tol}"), (estimate - p).abs() <= tol);
    if p - tol <= 0.0 {
        r.note(format!("{trials} trials are too few: the 3-sigma interval around {p} includes 0"));
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeMode {
    /// All `2^(2N)` sign patterns; requires `N ≤ 6`.
    Exhaustive,
    MonteCarlo {
        trials: u64,
        seed: u64,
    },
}

/// Observed min/max of `|Π_r (A_r + λB_r)|` against `(1−λ)^N` and `(1+λ)^N`.
pub fn amplitude_range_experiment(num_bits: usize, lambda: &Lambda, mode: RangeMode) -> Result<ExperimentReport> {
    let f = uniform_superposition(num_bits)?;
    let lo = pow(&(Rational::one() - lambda.value()), num_bits);
    let hi = pow(&(Rational::one() + lambda.value()), num_bits);

    let (name, seed, samples) = match mode {
        RangeMode::Exhaustive => {
            if num_bits > EXHAUSTIVE_MAX_BITS {
                return Err(Error::ExpansionCap { num_bits, cap: EXHAUSTIVE_MAX_BITS });
            }
            ("exhaustive", None, 1u64 << (2 * num_bits))
        }
        RangeMode::MonteCarlo { trials, seed } => ("monte-carlo", Some(seed), trials),
    };

    let magnitudes: Vec<Rational> = match mode {
        RangeMode::Exhaustive => {
            let mask = (1u64 << num_bits) - 1;
            (0..samples)
                .into_par_iter()
                .map(|p| {
                    let signs = SignAssignment::from_masks(num_bits, p & mask, p >> num_bits);
                    f.evaluate(&signs, lambda).map(|v| v.abs())
                })
                .collect::<Result<_>>()?
        }
        RangeMode::MonteCarlo { trials, seed } => {
            let refs = build_reference_system(seed, num_bits, trials.max(1), lambda.clone())?;
            let wave = SuperpositionWave::new(&refs, &f, false)?;
            wave.readouts().into_iter().map(|v| v.abs()).collect()
        }
    };
    let min = magnitudes.iter().min().cloned().unwrap_or_else(Rational::zero);
    let max = magnitudes.iter().max().cloned().unwrap_or_else(Rational::zero);
    let outside = magnitudes.iter().filter(|m| **m < lo || **m > hi).count();

    let mut r = ExperimentReport::new("range", seed);
    r.param("bits", num_bits).param("lambda", lambda).param("mode", name).param("samples", samples);
    r.metric("min_abs", format_rational(&min), Some(format_rational(&lo))).metric(
        "max_abs",
        format_rational(&max),
        Some(format_rational(&hi)),
    );
    r.check("within_bounds", outside, 0, "exact", outside == 0);
    if mode == RangeMode::Exhaustive {
        r.check("min_attained", format_rational(&min), format_rational(&lo), "exact", min == lo);
        r.check("max_attained", format_rational(&max), format_rational(&hi), "exact", max == hi);
    }
    Ok(r)
}

/// Bits needed to span the dynamic range `((1+λ)/(1−λ))^N`:
/// the smallest `M` with `2^M ≥ ((1+λ)/(1−λ))^N`, i.e. `ceil(N·log₂((1+λ)/(1−λ)))`.
///
/// At `λ = 1/2` this is `ceil(N + N·log₂1.5)`.
pub fn resolution_bits(num_bits: usize, lambda: &Lambda) -> Result<u64> {
    if num_bits == 0 {
        return Err(Error::ZeroBits);
    }
    lambda.strict()?;
    let (p, q) = (lambda.value().numer(), lambda.value().denom());
    let top = num_traits::pow(q + p, num_bits);
    let bottom = num_traits::pow(q - p, num_bits);
    let ratio = rational_to_f64(&Rational::new(q + p, q - p));
    let guess = (num_bits as f64 * ratio.log2()).floor() as i64 - 2;
    let mut m = guess.max(0) as u64;
    while (&bottom << m) < top {
        m += 1;
    }
    Ok(m)
}

pub fn resolution_report(num_bits: usize, lambda: &Lambda) -> Result<ExperimentReport> {
    let bits = resolution_bits(num_bits, lambda)?;
    let ratio = rational_to_f64(&((Rational::one() + lambda.value()) / (Rational::one() - lambda.value())));
    let real = num_bits as f64 * ratio.log2();
    let mut r = ExperimentReport::new("resolution", None);
    r.param("bits", num_bits).param("lambda", lambda);
    r.metric("resolution_bits", bits, None).metric("dynamic_range_log2", real, None);
    if *lambda == Lambda::half() {
        let closed = (num_bits as f64 + num_bits as f64 * 1.5f64.log2()).ceil() as u64;
        r.check("matches_n_plus_n_log2_1.5", bits, closed, "exact", bits == closed);
        r.check("below_2n", bits, format!("< {}", 2 * num_bits), "strict", bits < 2 * num_bits as u64);
    } else {
        r.note("general-lambda formula ceil(N*log2((1+lambda)/(1-lambda))); the closed form N+N*log2(1.5) holds at lambda=1/2 only");
    }
    Ok(r)
}

/// Monte Carlo of the shifted identifier at `M = required_periods(N, ε)`,
/// optionally followed by the baseline scan.
pub fn identification_experiment(
    num_bits: usize,
    epsilon: f64,
    trials: u64,
    seed: u64,
    with_baseline: bool,
) -> Result<ExperimentReport> {
    let m = required_periods(num_bits, epsilon)?;
    let stats = tsinbl_monte_carlo(num_bits, m, trials, seed, &Lambda::half())?;
    let bound = rational_to_f64(&error_bound_capped(num_bits, m)?);
    let tol = 3.0 * binomial_sigma(bound, trials);
    let rate = stats.undecided_rate();

    let mut r = ExperimentReport::new("identify", Some(seed));
    r.param("bits", num_bits).param("epsilon", epsilon).param("trials", trials).param("max_periods", m);
    r.metric("mean_ticks", stats.mean_ticks(), None)
        .metric("mean_periods", stats.mean_periods(), None)
        .metric("budget_ticks", 2 * num_bits as u64 * m, None)
        .metric("complete_trials", stats.complete_trials, None);
    r.check("undecided_rate", rate, format!("<= {bound}"), format!("3sigma={tol}"), rate <= bound + tol);
    r.check("sound", stats.wrong_bits, 0, "exact", stats.sound());

    if with_baseline {
        if num_bits > DEFAULT_SEARCH_CAP {
            return Err(Error::ExpansionCap { num_bits, cap: DEFAULT_SEARCH_CAP });
        }
        let b = baseline_monte_carlo(num_bits, epsilon, trials, derive_seed(seed, u64::MAX))?;
        let count = (1u64 << num_bits) as f64;
        let expected = (count + 1.0) / 2.0;
        let sd = ((count * count - 1.0) / 12.0 / trials as f64).sqrt();
        r.metric("baseline_periods_per_test", b.periods_per_test, None)
            .metric("baseline_cost_periods", b.mean_cost_periods(), None)
            .metric("baseline_correct", b.correct, None);
        // The uniform-position mean ignores early stops on a false match.
        let false_accepts = count * 0.5f64.powi(b.periods_per_test as i32);
        if false_accepts <= 0.01 {
            r.check(
                "baseline_mean_tests",
                b.mean_tests(),
                expected,
                format!("3sigma={}", 3.0 * sd),
                (b.mean_tests() - expected).abs() <= 3.0 * sd,
            );
        } else {
            r.metric("baseline_mean_tests", b.mean_tests(), Some(expected.to_string()));
            r.note(format!("baseline mean not checked: 2^N * 0.5^P = {false_accepts} expected false matches per scan"));
        }
    }
    Ok(r)
}

/// Multiplies the uniform superposition by `H_r L_r` symbolically and as
/// waveforms, and checks both routes agree.
pub fn not_gate_demo(
    num_bits: usize,
    lambda: &Lambda,
    bit: usize,
    periods: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    if num_bits > DEFAULT_EXPANSION_CAP {
        return Err(Error::ExpansionCap { num_bits, cap: DEFAULT_EXPANSION_CAP });
    }
    let factored = uniform_superposition(num_bits)?;
    let expanded = factored.expand()?;
    let result = expanded.apply_not(bit, lambda)?;
    let lambda_sq = lambda.squared();

    let mut bad_terms = 0u64;
    for (s, _) in expanded.terms() {
        let target = s.flipped(bit);
        let want = if s.is_high(bit) { Rational::one() } else { lambda_sq.clone() };
        if result.coefficient(&target) != want {
            bad_terms += 1;
        }
    }
    let all_high = ProductString::all_high(num_bits)?;
    let image = all_high.with_level(bit, Level::L);
    let twice = result.apply_not(bit, lambda)?;
    let involution = twice == expanded.scaled(&lambda_sq);

    let refs = build_reference_system(seed, num_bits, periods, lambda.clone())?;
    let sup = SuperpositionWave::new(&refs, &factored, false)?;
    let gate = MonomialWave::new(&refs, &[StreamId::high(bit), StreamId::low(bit)], false)?;
    let grid = *refs.grid();
    let disagreements = (0..periods)
        .into_par_iter()
        .map(|k| {
            let t = grid.readout_tick(k);
            let wave = sup.sample(t) * gate.sample(t);
            let symbolic = result.evaluate(&refs.period_signs(k), lambda)?;
            Ok(u64::from(wave != symbolic))
        })
        .sum::<Result<u64>>()?;

    let mut r = ExperimentReport::new("not-demo", Some(seed));
    r.param("bits", num_bits).param("lambda", lambda).param("target", bit).param("periods", periods);
    r.metric("terms", result.len(), Some((1u64 << num_bits).to_string()))
        .metric("former_l_coeff", format_rational(&lambda_sq), None)
        .metric(
            "all_high_maps_to",
            format!("{}:{}", image, format_rational(&result.coefficient(&image))),
            Some(format!("{image}:1/1")),
        );
    r.check("coefficient_map", bad_terms, 0, "exact", bad_terms == 0 && result.len() == expanded.len());
    r.check("not_twice_scales_lambda_sq", involution, true, "exact", involution);
    if lambda.is_unit() {
        let unchanged = result == expanded;
        r.check("uniform_unchanged", unchanged, true, "exact", unchanged);
    }
    r.check("waveform_matches_symbolic", disagreements, 0, "exact", disagreements == 0);
    Ok(r)
}
