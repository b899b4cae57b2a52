//! Decoding an unknown product-string from its waveform.
//!
//! [`tsinbl_identify`] watches the time-shifted waveform: every reference
//! switches at its own SCP, so a sign change of the unknown at that exact
//! tick attributes the change to one reference. The classic alternative,
//! [`baseline_search`], verifies candidates one at a time against the
//! per-period readouts and needs `O(2^N)` tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::algebra::{Level, ProductString};
use crate::amplitude::Rational;
use crate::error::{Error, Result};
use crate::rtw::{check_bits, ReferenceSystem, Role};
use crate::signal::Waveform;

/// Largest `N` for which [`baseline_search`] will scan all candidates.
pub const DEFAULT_SEARCH_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentificationResult {
    num_bits: usize,
    decided: BTreeMap<usize, Level>,
    periods_used: u64,
    ticks_observed: u64,
}

impl IdentificationResult {
    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn decided(&self) -> &BTreeMap<usize, Level> {
        &self.decided
    }

    /// Noise-bits without a decision, ascending.
    pub fn undecided(&self) -> Vec<usize> {
        (1..=self.num_bits).filter(|r| !self.decided.contains_key(r)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.decided.len() == self.num_bits
    }

    pub fn periods_used(&self) -> u64 {
        self.periods_used
    }

    pub fn ticks_observed(&self) -> u64 {
        self.ticks_observed
    }

    /// The identified string, once every bit is decided.
    pub fn product_string(&self) -> Option<ProductString> {
        if !self.is_complete() {
            return None;
        }
        let levels: Vec<Level> = self.decided.values().copied().collect();
        ProductString::from_levels(&levels).ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

impl Serialize for IdentificationResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // String keys must stay in numeric bit order, not lexicographic.
        struct Ordered<'a>(&'a BTreeMap<usize, Level>);
        impl Serialize for Ordered<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (r, l) in self.0 {
                    m.serialize_entry(&r.to_string(), &l.letter().to_string())?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("decided", &Ordered(&self.decided))?;
        m.serialize_entry("undecided", &self.undecided())?;
        m.serialize_entry("periods_used", &self.periods_used)?;
        m.serialize_entry("ticks", &self.ticks_observed)?;
        m.end()
    }
}

/// Observes the shifted waveform for up to `max_periods` periods, starting at
/// period 1, and decides each noise-bit from the first switch of either of its
/// references. Stops as soon as every bit is decided.
///
/// The unknown must be a shifted waveform on the same grid as `refs`, with
/// at least `max_periods + 1` periods.
pub fn tsinbl_identify<W: Waveform + ?Sized>(
    unknown: &W,
    refs: &ReferenceSystem,
    max_periods: u64,
) -> Result<IdentificationResult> {
    if !unknown.shifted() {
        return Err(Error::WrongMode("unshifted"));
    }
    if unknown.grid() != refs.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *refs.grid();
    let n = grid.num_bits();
    if grid.num_periods() < max_periods + 1 {
        return Err(Error::TraceTooShort { available: grid.num_periods(), required: max_periods + 1 });
    }
    let spp = grid.subclocks_per_period();
    let mut decided = BTreeMap::new();
    let start = spp;
    let end = (max_periods + 1) * spp;
    let mut prev_unknown = unknown.signum(start - 1);
    for tick in start..end {
        let cur_unknown = unknown.signum(tick);
        let stream = refs.stream_at_scp(grid.scp_of(tick));
        if stream.value_unchecked(tick, &grid, true) != stream.value_unchecked(tick - 1, &grid, true) {
            let id = stream.id();
            let level = match id.role {
                Role::A => Level::H,
                Role::B => Level::L,
            };
            let verdict = if cur_unknown != prev_unknown { level } else { level.inverse() };
            match decided.get(&id.bit) {
                Some(existing) if *existing != verdict => {
                    return Err(Error::Contradiction { bit: id.bit, tick });
                }
                Some(_) => {}
                None => {
                    decided.insert(id.bit, verdict);
                    if decided.len() == n {
                        return Ok(IdentificationResult {
                            num_bits: n,
                            decided,
                            periods_used: grid.period_of(tick),
                            ticks_observed: tick - start + 1,
                        });
                    }
                }
            }
        }
        prev_unknown = cur_unknown;
    }
    Ok(IdentificationResult { num_bits: n, decided, periods_used: max_periods, ticks_observed: end - start })
}

/// Observation budget of the shifted identifier.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBudget {
    pub epsilon: f64,
    pub num_bits: usize,
    pub max_periods: u64,
}

impl ErrorBudget {
    pub fn from_periods(num_bits: usize, max_periods: u64) -> Result<Self> {
        let bound = error_bound(num_bits, max_periods)?;
        Ok(Self { epsilon: crate::amplitude::rational_to_f64(&bound), num_bits, max_periods })
    }

    pub fn from_epsilon(num_bits: usize, epsilon: f64) -> Result<Self> {
        let max_periods = required_periods(num_bits, epsilon)?;
        Ok(Self { epsilon, num_bits, max_periods })
    }

    /// Sampling cost `2N·M` in sub-clock ticks.
    pub fn ticks(&self) -> u64 {
        2 * self.num_bits as u64 * self.max_periods
    }
}

/// Union bound `N·0.25^M` on the probability that some bit stays undecided.
pub fn error_bound(num_bits: usize, max_periods: u64) -> Result<Rational> {
    check_bits(num_bits)?;
    let denom = num_traits::pow(BigInt::from(4), max_periods as usize);
    Ok(Rational::new(BigInt::from(num_bits), denom))
}

/// `min(1, N·0.25^M)`.
pub fn error_bound_capped(num_bits: usize, max_periods: u64) -> Result<Rational> {
    let b = error_bound(num_bits, max_periods)?;
    Ok(if b > Rational::one() { Rational::one() } else { b })
}

fn epsilon_rational(epsilon: f64) -> Result<Rational> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    BigRational::from_float(epsilon).ok_or(Error::EpsilonOutOfRange(epsilon))
}

/// Smallest `M` with `N·0.25^M ≤ ε`, compared exactly.
pub fn required_periods(num_bits: usize, epsilon: f64) -> Result<u64> {
    check_bits(num_bits)?;
    let eps = epsilon_rational(epsilon)?;
    let lhs = BigInt::from(num_bits) * eps.denom();
    let mut scaled = eps.numer().clone();
    let mut m = 0u64;
    while scaled < lhs {
        scaled *= 4;
        m += 1;
    }
    Ok(m)
}

/// Smallest `P ≥ 1` with `0.5^P ≤ ε`: the per-candidate budget of the baseline scan.
pub fn baseline_periods(epsilon: f64) -> Result<u64> {
    let eps = epsilon_rational(epsilon)?;
    let mut scaled = eps.numer().clone();
    let mut p = 0u64;
    while &scaled < eps.denom() {
        scaled *= 2;
        p += 1;
    }
    Ok(p.max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    Match,
    MismatchAtPeriod(u64),
}

fn first_period<W: Waveform + ?Sized>(unknown: &W) -> u64 {
    u64::from(unknown.shifted())
}

/// Per-period readouts of the unknown over the comparison window.
struct Readouts {
    first: u64,
    values: Vec<(bool, Rational)>,
}

impl Readouts {
    fn collect<W: Waveform + ?Sized>(unknown: &W, refs: &ReferenceSystem, max_periods: u64) -> Result<Self> {
        if unknown.grid() != refs.grid() {
            return Err(Error::GridMismatch);
        }
        let first = first_period(unknown);
        let required = first + max_periods;
        if refs.grid().num_periods() < required {
            return Err(Error::TraceTooShort { available: refs.grid().num_periods(), required });
        }
        let values = (first..required)
            .map(|k| {
                let v = unknown.readout_at(k);
                (v.is_negative(), v.abs())
            })
            .collect();
        Ok(Self { first, values })
    }

    fn verify(&self, candidate: &ProductString, refs: &ReferenceSystem, magnitude: &Rational) -> Verification {
        for (i, (neg, mag)) in self.values.iter().enumerate() {
            let k = self.first + i as u64;
            let (a, b) = refs.period_neg_masks(k);
            if candidate.sign_negative(a, b) != *neg || mag != magnitude {
                return Verification::MismatchAtPeriod(k);
            }
        }
        Verification::Match
    }
}

/// Compares the unknown's per-period readouts with those of `candidate`.
///
/// Unshifted waveforms are compared from period 0, shifted ones from period 1.
pub fn baseline_verify<W: Waveform + ?Sized>(
    unknown: &W,
    candidate: &ProductString,
    refs: &ReferenceSystem,
    max_periods: u64,
) -> Result<Verification> {
    if candidate.num_bits() != refs.num_bits() {
        return Err(Error::BitCountMismatch { expected: refs.num_bits(), actual: candidate.num_bits() });
    }
    let readouts = Readouts::collect(unknown, refs, max_periods)?;
    let magnitude = refs.lambda().powers(candidate.low_count()).pop().expect("non-empty");
    Ok(readouts.verify(candidate, refs, &magnitude))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub string: ProductString,
    pub tests_performed: u64,
    pub periods_per_test: u64,
}

/// Scans candidates in enumeration order, `baseline_periods(ε)` periods each,
/// returning the first one that never mismatched.
pub fn baseline_search<W: Waveform + ?Sized>(
    unknown: &W,
    refs: &ReferenceSystem,
    epsilon: f64,
) -> Result<SearchOutcome> {
    let n = refs.num_bits();
    if n > DEFAULT_SEARCH_CAP {
        return Err(Error::ExpansionCap { num_bits: n, cap: DEFAULT_SEARCH_CAP });
    }
    let periods = baseline_periods(epsilon)?;
    let readouts = Readouts::collect(unknown, refs, periods)?;
    let powers = refs.lambda().powers(n);
    let mut tests = 0u64;
    for candidate in ProductString::all(n)? {
        tests += 1;
        if readouts.verify(&candidate, refs, &powers[candidate.low_count()]) == Verification::Match {
            return Ok(SearchOutcome { string: candidate, tests_performed: tests, periods_per_test: periods });
        }
    }
    Err(Error::SearchExhausted(tests))
}
