//! Acceptance suite. One test per criterion; each prints a `PASS`/`FAIL`
//! line per sub-check and then asserts all of them.
//!
//! Run with `cargo test -p inbl-tools --test acceptance -- --nocapture`.

use std::process::Command;
use std::time::{Duration, Instant};

use inbl_core::algebra::{ProductString, Symbolic};
use inbl_core::amplitude::rational_to_f64;
use inbl_core::analysis::stats::{binomial_sigma, linear_fit, max_relative_spread};
use inbl_core::analysis::{
    amplitude_range_experiment, baseline_monte_carlo, mismatch_rate, resolution_bits, tsinbl_monte_carlo,
    zero_probability_experiment, RangeMode,
};
use inbl_core::identify::error_bound_capped;
use inbl_core::rtw::StreamId;
use inbl_core::signal::{trace_monomial, SuperpositionWave, Waveform};
use inbl_core::{
    baseline_periods, build_reference_system, readout, required_periods, trace_superposition, uniform_superposition,
    Lambda,
};

struct Criterion {
    id: u32,
    results: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u32) -> Self {
        Self { id, results: Vec::new() }
    }

    fn record(&mut self, name: impl Into<String>, pass: bool) {
        let name = name.into();
        println!("{} C{} {}", if pass { "PASS" } else { "FAIL" }, self.id, name);
        self.results.push((name, pass));
    }

    fn finish(self) {
        let failed: Vec<&str> = self.results.iter().filter(|(_, p)| !p).map(|(n, _)| n.as_str()).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {} ({} checks)", self.id, self.results.len());
        assert!(failed.is_empty(), "criterion {} failed: {failed:?}", self.id);
    }
}

const SEED: u64 = 20_240_601;

#[test]
fn c1_zero_probability_of_uniform_superposition() {
    let mut c = Criterion::new(1);
    for n in [1usize, 2, 3, 5, 8, 10] {
        let trials = if n == 10 { 1_000_000 } else { 100_000 };
        let started = Instant::now();
        let r = zero_probability_experiment(n, trials, SEED + n as u64).unwrap();
        let elapsed = started.elapsed();
        let chk = r.find_check("nonzero_probability").unwrap();
        c.record(
            format!("N={n} trials={trials} estimate={} p={} {}", chk.observed, chk.expected, chk.tolerance),
            chk.pass,
        );
        c.record(format!("N={n} runtime {elapsed:?} < 60s"), elapsed < Duration::from_secs(60));
    }
    c.finish();
}

#[test]
fn c2_exhaustive_amplitude_bounds() {
    let mut c = Criterion::new(2);
    for n in 1..=6 {
        let started = Instant::now();
        let r = amplitude_range_experiment(n, &Lambda::half(), RangeMode::Exhaustive).unwrap();
        for name in ["within_bounds", "min_attained", "max_attained"] {
            let chk = r.find_check(name).unwrap();
            c.record(format!("N={n} {name} observed={} expected={}", chk.observed, chk.expected), chk.pass);
        }
        let elapsed = started.elapsed();
        c.record(format!("N={n} runtime {elapsed:?} < 10s"), elapsed < Duration::from_secs(10));
    }
    c.finish();
}

#[test]
fn c3_resolution_bits() {
    let mut c = Criterion::new(3);
    let half = Lambda::half();
    let m200 = resolution_bits(200, &half).unwrap();
    c.record(format!("resolution_bits(200, 1/2) = {m200}, expected 317"), m200 == 317);

    let real_ok = (1..=1000).all(|n| n as f64 * 3f64.log2() < 2.0 * n as f64);
    c.record("real-valued N + N*log2(1.5) < 2N for N in 1..=1000", real_ok);

    let violations: Vec<(usize, u64)> =
        (1..=1000).map(|n| (n, resolution_bits(n, &half).unwrap())).filter(|&(n, m)| m >= 2 * n as u64).collect();
    c.record(
        format!("resolution_bits(N, 1/2) < 2N for N in 1..=1000; violations (N, bits) = {violations:?}"),
        violations.is_empty(),
    );
    c.finish();
}

#[test]
fn c4_tsinbl_error_bound_and_soundness() {
    let mut c = Criterion::new(4);
    let trials = 100_000;
    for (n, m) in [(4usize, 3u64), (8, 5), (16, 6)] {
        let stats = tsinbl_monte_carlo(n, m, trials, SEED ^ ((n as u64) << 8), &Lambda::half()).unwrap();
        let bound = rational_to_f64(&error_bound_capped(n, m).unwrap());
        let tol = 3.0 * binomial_sigma(bound, trials);
        let rate = stats.undecided_rate();
        c.record(
            format!("N={n} M={m} undecided rate {rate} <= min(1, N*0.25^M)={bound} + 3sigma={tol}"),
            rate <= bound + tol,
        );
        c.record(
            format!(
                "N={n} M={m} recovered == hidden in {}/{} complete trials, wrong bits {}",
                stats.correct_complete, stats.complete_trials, stats.wrong_bits
            ),
            stats.sound(),
        );
    }
    c.finish();
}

#[test]
fn c5_scaling_separation() {
    let mut c = Criterion::new(5);
    let started = Instant::now();
    let epsilon = 1e-9;

    let mut ns = Vec::new();
    let mut log_tests = Vec::new();
    for n in 4..=14usize {
        let s = baseline_monte_carlo(n, epsilon, 400, SEED + 100 + n as u64).unwrap();
        println!(
            "      baseline N={n} mean tests {} (uniform-position mean {})",
            s.mean_tests(),
            ((1u64 << n) as f64 + 1.0) / 2.0
        );
        ns.push(n as f64);
        log_tests.push(s.mean_tests().log2());
    }
    let (slope, _) = linear_fit(&ns, &log_tests).unwrap();
    c.record(
        format!("baseline slope of log2(mean tests) vs N over 4..=14 = {slope:.4}, want 1.0 +- 0.1"),
        (slope - 1.0).abs() <= 0.1,
    );

    let mut per_bit = Vec::new();
    let mut budget_per_bit = Vec::new();
    for n in [8usize, 16, 32, 64] {
        let m = required_periods(n, epsilon).unwrap();
        let s = tsinbl_monte_carlo(n, m, 10_000, SEED + 200 + n as u64, &Lambda::half()).unwrap();
        println!(
            "      tsinbl N={n} M={m} mean ticks {} per bit {} budget 2NM={}",
            s.mean_ticks(),
            s.mean_ticks() / n as f64,
            2 * n as u64 * m
        );
        per_bit.push(s.mean_ticks() / n as f64);
        budget_per_bit.push(2.0 * m as f64);
    }
    let spread = max_relative_spread(&per_bit).unwrap();
    let budget_spread = max_relative_spread(&budget_per_bit).unwrap();
    println!("      (info) budgeted cost 2N*M per bit spread = {budget_spread:.4}");
    c.record(
        format!("TSINBL mean ticks / N constant within 15% over N in {{8,16,32,64}}: spread = {spread:.4}, per-bit = {per_bit:.3?}"),
        spread <= 0.15,
    );
    let elapsed = started.elapsed();
    c.record(format!("runtime {elapsed:?} < 10 min"), elapsed < Duration::from_secs(600));
    c.finish();
}

#[test]
fn c6_baseline_verification_rate() {
    let mut c = Criterion::new(6);
    let m = mismatch_rate(8, 100_000, SEED).unwrap();
    c.record(
        format!("per-period mismatch {} vs {} over 1e5 periods = {}, want 0.5 +- 0.005", m.first, m.second, m.rate()),
        (m.rate() - 0.5).abs() <= 0.005,
    );
    let p83 = 0.5f64.powi(83);
    c.record(format!("0.5^83 = {p83:e} rounds to 1e-25 at one significant figure"), format!("{p83:.0e}") == "1e-25");
    let inverted = baseline_periods(1e-25).unwrap();
    c.record(format!("required periods for per-test eps = 1e-25: {inverted}, expected 83"), inverted == 83);
    c.finish();
}

#[test]
fn c7_waveform_equals_symbolic() {
    let mut c = Criterion::new(7);
    let mut mismatches = 0u64;
    let mut compared = 0u64;
    for n in 1..=8 {
        let f = uniform_superposition(n).unwrap();
        for seed in 0..100u64 {
            for lam in [Lambda::unit(), Lambda::half()] {
                let refs = build_reference_system(SEED + seed, n, 16, lam.clone()).unwrap();
                for shifted in [false, true] {
                    let wave = SuperpositionWave::new(&refs, &f, shifted).unwrap();
                    for k in 0..16 {
                        compared += 1;
                        if wave.readout_at(k) != f.evaluate(&refs.period_signs(k), &lam).unwrap() {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    c.record(
        format!("{mismatches} mismatches in {compared} readouts (N<=8, 100 seeds, both modes, lambda in {{1, 1/2}})"),
        mismatches == 0,
    );
    c.finish();
}

#[test]
fn c8_not_gate() {
    let mut c = Criterion::new(8);
    let unit = Lambda::unit();
    for n in 1..=5 {
        let e = uniform_superposition(n).unwrap().expand().unwrap();
        for r in 1..=n {
            let out = e.apply_not(r, &unit).unwrap();
            let swap_ok = e.terms().all(|(s, cf)| out.coefficient(&s.flipped(r)) == *cf) && out.len() == e.len();
            let involution = out.apply_not(r, &unit).unwrap() == e;
            c.record(format!("lambda=1 N={n} r={r} H<->L swap at bit r, involution"), swap_ok && involution);
        }
    }
    let single = inbl_core::algebra::Superposition::single("HHH".parse().unwrap(), unit.value().clone());
    let mapped = single.apply_not(2, &unit).unwrap();
    let want: ProductString = "HLH".parse().unwrap();
    c.record("lambda=1 HHH -> HLH", mapped.terms().map(|(s, _)| *s).collect::<Vec<_>>() == vec![want]);

    let half = Lambda::half();
    for n in 1..=4 {
        let factored = uniform_superposition(n).unwrap();
        let expanded = factored.expand().unwrap();
        for r in 1..=n {
            let symbolic = expanded.apply_not(r, &half).unwrap();
            let scale_ok = expanded.terms().all(|(s, _)| {
                let want = if s.is_high(r) { Lambda::unit().value().clone() } else { half.squared() };
                symbolic.coefficient(&s.flipped(r)) == want
            });
            let refs = build_reference_system(SEED + r as u64, n, 1000, half.clone()).unwrap();
            let sup = trace_superposition(&refs, &factored, false).unwrap();
            let gate = trace_monomial(&refs, &[StreamId::high(r), StreamId::low(r)], false).unwrap();
            let product = readout(&sup.mul(&gate).unwrap());
            let agree = product
                .iter()
                .enumerate()
                .all(|(k, v)| *v == symbolic.evaluate(&refs.period_signs(k as u64), &half).unwrap());
            c.record(
                format!(
                    "lambda=1/2 N={n} r={r} former-L terms carry 1/4; waveform x H_rL_r == symbolic over 1000 periods"
                ),
                scale_ok && agree,
            );
        }
    }
    c.finish();
}

#[test]
fn c9_cli_runs_are_byte_identical() {
    let mut c = Criterion::new(9);
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["zero-prob", "--bits", "3", "--trials", "20000", "--seed", "5"],
        &["range", "--bits", "4", "--lambda", "1/2", "--exhaustive"],
        &["range", "--bits", "9", "--lambda", "1/3", "--trials", "500", "--seed", "2"],
        &["resolution", "--bits", "200", "--lambda", "1/2"],
        &["identify", "--bits", "8", "--epsilon", "0.01", "--trials", "2000", "--seed", "3", "--baseline"],
        &["bench", "--bits", "4,8,16", "--epsilon", "0.001", "--trials", "200", "--seed", "4"],
        &["not-demo", "--bits", "3", "--lambda", "1/2", "--target", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        for format in ["csv", "json"] {
            let mut outputs = Vec::new();
            let mut codes = Vec::new();
            for rep in 0..2 {
                let path = dir.path().join(format!("run{i}_{format}_{rep}"));
                let status = Command::new(env!("CARGO_BIN_EXE_inbl"))
                    .args(*args)
                    .args(["--format", format, "--out"])
                    .arg(&path)
                    .output()
                    .unwrap();
                codes.push(status.status.code());
                outputs.push(std::fs::read(&path).unwrap());
            }
            let same = outputs[0] == outputs[1] && !outputs[0].is_empty();
            c.record(
                format!("{} --format {format}: identical bytes, exit codes {codes:?}", args.join(" ")),
                same && codes[0] == codes[1],
            );
        }
    }
    c.finish();
}
