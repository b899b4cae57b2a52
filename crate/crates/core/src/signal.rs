//! Product-strings and superpositions as waveforms on the sub-clock grid.
//!
//! A [`Waveform`] yields an exact amplitude per tick. The streaming
//! implementations ([`ProductWave`], [`MonomialWave`], [`SuperpositionWave`])
//! compute samples on demand from the reference masks; [`SignalTrace`] is the
//! materialized form.

use std::io::{self, Write};

use num_traits::{One, Signed, Zero};

use crate::algebra::{FactoredSuperposition, ProductString, Symbolic};
use crate::amplitude::{format_rational, Rational};
use crate::error::{Error, Result};
use crate::rtw::{ClockGrid, ReferenceSystem, Role, StreamId};

pub trait Waveform {
    fn grid(&self) -> &ClockGrid;

    fn shifted(&self) -> bool;

    /// Exact amplitude at `tick`. Panics if `tick >= len()`.
    fn sample(&self, tick: u64) -> Rational;

    /// `-1`, `0` or `+1`.
    fn signum(&self, tick: u64) -> i8 {
        let s = self.sample(tick);
        if s.is_zero() {
            0
        } else if s.is_negative() {
            -1
        } else {
            1
        }
    }

    fn len(&self) -> u64 {
        self.grid().total_ticks()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn readout_at(&self, period: u64) -> Rational {
        self.sample(self.grid().readout_tick(period))
    }

    /// One value per period, taken at the period's last SCP.
    fn readouts(&self) -> Vec<Rational> {
        (0..self.grid().num_periods()).map(|k| self.readout_at(k)).collect()
    }

    fn materialize(&self) -> SignalTrace {
        SignalTrace {
            grid: *self.grid(),
            shifted: self.shifted(),
            samples: (0..self.len()).map(|t| self.sample(t)).collect(),
        }
    }
}

/// A product of reference values, `±λ^k` at every tick.
///
/// Repeated factors reduce through `A_r² = B_r² = 1`; each `L` factor still
/// contributes one power of λ.
#[derive(Clone, Debug)]
pub struct MonomialWave<'a> {
    refs: &'a ReferenceSystem,
    shifted: bool,
    a_mask: u64,
    b_mask: u64,
    magnitude: Rational,
}

impl<'a> MonomialWave<'a> {
    pub fn new(refs: &'a ReferenceSystem, factors: &[StreamId], shifted: bool) -> Result<Self> {
        let mut a_mask = 0u64;
        let mut b_mask = 0u64;
        let mut low_factors = 0usize;
        for id in factors {
            refs.stream(*id)?;
            let bit = 1u64 << (id.bit - 1);
            match id.role {
                Role::A => a_mask ^= bit,
                Role::B => {
                    b_mask ^= bit;
                    low_factors += 1;
                }
            }
        }
        let magnitude = num_traits::pow(refs.lambda().value().clone(), low_factors);
        Ok(Self { refs, shifted, a_mask, b_mask, magnitude })
    }

    pub fn magnitude(&self) -> &Rational {
        &self.magnitude
    }

    #[inline]
    fn negative(&self, tick: u64) -> bool {
        let (a, b) = self.refs.neg_masks_at(tick, self.shifted);
        ((a & self.a_mask).count_ones() + (b & self.b_mask).count_ones()) & 1 == 1
    }
}

impl Waveform for MonomialWave<'_> {
    fn grid(&self) -> &ClockGrid {
        self.refs.grid()
    }

    fn shifted(&self) -> bool {
        self.shifted
    }

    fn sample(&self, tick: u64) -> Rational {
        assert!(tick < self.len(), "tick {tick} out of range");
        if self.negative(tick) {
            -self.magnitude.clone()
        } else {
            self.magnitude.clone()
        }
    }

    fn signum(&self, tick: u64) -> i8 {
        assert!(tick < self.len(), "tick {tick} out of range");
        if self.negative(tick) {
            -1
        } else {
            1
        }
    }
}

/// The waveform `W(t) = Π_r X_r(t)` of a product-string.
#[derive(Clone, Debug)]
pub struct ProductWave<'a> {
    inner: MonomialWave<'a>,
    string: ProductString,
}

impl<'a> ProductWave<'a> {
    pub fn new(refs: &'a ReferenceSystem, string: ProductString, shifted: bool) -> Result<Self> {
        if string.num_bits() != refs.num_bits() {
            return Err(Error::BitCountMismatch { expected: refs.num_bits(), actual: string.num_bits() });
        }
        let factors: Vec<StreamId> = (1..=string.num_bits())
            .map(|r| if string.is_high(r) { StreamId::high(r) } else { StreamId::low(r) })
            .collect();
        Ok(Self { inner: MonomialWave::new(refs, &factors, shifted)?, string })
    }

    pub fn string(&self) -> &ProductString {
        &self.string
    }
}

impl Waveform for ProductWave<'_> {
    fn grid(&self) -> &ClockGrid {
        self.inner.grid()
    }

    fn shifted(&self) -> bool {
        self.inner.shifted
    }

    fn sample(&self, tick: u64) -> Rational {
        self.inner.sample(tick)
    }

    fn signum(&self, tick: u64) -> i8 {
        self.inner.signum(tick)
    }
}

/// `Π_r (c_H[r]·A_r(t) + c_L[r]·λ·B_r(t))`, `O(N)` per tick from the factored form.
#[derive(Clone, Debug)]
pub struct SuperpositionWave<'a> {
    refs: &'a ReferenceSystem,
    shifted: bool,
    /// Per bit, the factor value indexed by `a_negative | b_negative << 1`.
    table: Vec<[Rational; 4]>,
}

impl<'a> SuperpositionWave<'a> {
    pub fn new(refs: &'a ReferenceSystem, f: &FactoredSuperposition, shifted: bool) -> Result<Self> {
        if f.num_bits() != refs.num_bits() {
            return Err(Error::BitCountMismatch { expected: refs.num_bits(), actual: f.num_bits() });
        }
        let lambda = refs.lambda().value();
        let table = (1..=f.num_bits())
            .map(|r| {
                let (ch, cl) = f.pair(r);
                let l = cl * lambda;
                [ch + &l, -ch + &l, ch - &l, -ch - &l]
            })
            .collect();
        Ok(Self { refs, shifted, table })
    }
}

impl Waveform for SuperpositionWave<'_> {
    fn grid(&self) -> &ClockGrid {
        self.refs.grid()
    }

    fn shifted(&self) -> bool {
        self.shifted
    }

    fn sample(&self, tick: u64) -> Rational {
        assert!(tick < self.len(), "tick {tick} out of range");
        let (a, b) = self.refs.neg_masks_at(tick, self.shifted);
        let mut acc = Rational::one();
        for (i, row) in self.table.iter().enumerate() {
            let idx = (a >> i & 1) | (b >> i & 1) << 1;
            let factor = &row[idx as usize];
            if factor.is_zero() {
                return Rational::zero();
            }
            acc *= factor;
        }
        acc
    }
}

/// Materialized waveform: one exact amplitude per sub-clock tick.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalTrace {
    grid: ClockGrid,
    shifted: bool,
    samples: Vec<Rational>,
}

impl SignalTrace {
    pub fn new(grid: ClockGrid, shifted: bool, samples: Vec<Rational>) -> Result<Self> {
        if samples.len() as u64 != grid.total_ticks() {
            return Err(Error::TraceTooShort {
                available: samples.len() as u64 / grid.subclocks_per_period(),
                required: grid.num_periods(),
            });
        }
        Ok(Self { grid, shifted, samples })
    }

    pub fn samples(&self) -> &[Rational] {
        &self.samples
    }

    /// Pointwise product of two traces on the same grid and timing mode.
    pub fn mul(&self, other: &SignalTrace) -> Result<SignalTrace> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.shifted != other.shifted {
            return Err(Error::WrongMode(if other.shifted { "shifted" } else { "unshifted" }));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        Ok(SignalTrace { grid: self.grid, shifted: self.shifted, samples })
    }

    /// CSV with header `tick,period,scp,amplitude`; amplitudes as `p/q`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "tick,period,scp,amplitude")?;
        for (t, s) in self.samples.iter().enumerate() {
            let t = t as u64;
            writeln!(out, "{},{},{},{}", t, self.grid.period_of(t), self.grid.scp_of(t), format_rational(s))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }
}

impl Waveform for SignalTrace {
    fn grid(&self) -> &ClockGrid {
        &self.grid
    }

    fn shifted(&self) -> bool {
        self.shifted
    }

    fn sample(&self, tick: u64) -> Rational {
        self.samples[tick as usize].clone()
    }

    fn signum(&self, tick: u64) -> i8 {
        let s = &self.samples[tick as usize];
        if s.is_zero() {
            0
        } else if s.is_negative() {
            -1
        } else {
            1
        }
    }
}

pub fn trace_product(refs: &ReferenceSystem, w: &ProductString, shifted: bool) -> Result<SignalTrace> {
    Ok(ProductWave::new(refs, *w, shifted)?.materialize())
}

pub fn trace_superposition(refs: &ReferenceSystem, f: &FactoredSuperposition, shifted: bool) -> Result<SignalTrace> {
    Ok(SuperpositionWave::new(refs, f, shifted)?.materialize())
}

/// Trace of an arbitrary product of references, e.g. `H_r L_r`.
pub fn trace_monomial(refs: &ReferenceSystem, factors: &[StreamId], shifted: bool) -> Result<SignalTrace> {
    Ok(MonomialWave::new(refs, factors, shifted)?.materialize())
}

pub fn readout(trace: &SignalTrace) -> Vec<Rational> {
    trace.readouts()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::uniform_superposition;
    use crate::amplitude::Lambda;
    use crate::rtw::{build_reference_system, value_at};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn single_factor_matches_stream() {
        let refs = build_reference_system(3, 1, 20, Lambda::half()).unwrap();
        let grid = *refs.grid();
        let h1 = refs.stream(StreamId::high(1)).unwrap();
        for shifted in [false, true] {
            let tr = trace_product(&refs, &"H".parse().unwrap(), shifted).unwrap();
            for t in 0..grid.total_ticks() {
                assert_eq!(tr.sample(t), value_at(h1, t, &grid, shifted).unwrap().to_rational());
            }
        }
    }

    #[test]
    fn unit_amplitudes() {
        let refs = build_reference_system(4, 3, 30, Lambda::unit()).unwrap();
        for w in crate::algebra::ProductString::all(3).unwrap() {
            let tr = trace_product(&refs, &w, true).unwrap();
            assert!(tr.samples().iter().all(|s| s.abs().is_one()));
        }
    }

    #[test]
    fn magnitude_is_lambda_to_low_count() {
        let refs = build_reference_system(4, 3, 30, Lambda::half()).unwrap();
        let tr = trace_product(&refs, &"LHL".parse().unwrap(), true).unwrap();
        assert!(tr.samples().iter().all(|s| s.abs() == q(1, 4)));
    }

    #[test]
    fn degenerate_superposition_is_product() {
        let refs = build_reference_system(4, 1, 30, Lambda::half()).unwrap();
        let f = FactoredSuperposition::new(vec![Rational::one()], vec![Rational::zero()]).unwrap();
        for shifted in [false, true] {
            assert_eq!(
                trace_superposition(&refs, &f, shifted).unwrap(),
                trace_product(&refs, &"H".parse().unwrap(), shifted).unwrap()
            );
        }
    }

    #[test]
    fn superposition_readouts_within_bounds() {
        let refs = build_reference_system(21, 3, 2000, Lambda::half()).unwrap();
        let wave = SuperpositionWave::new(&refs, &uniform_superposition(3).unwrap(), true).unwrap();
        for v in wave.readouts() {
            let m = v.abs();
            assert!(m >= q(1, 8) && m <= q(27, 8), "{m}");
        }
    }

    #[test]
    fn unshifted_constant_within_period() {
        let refs = build_reference_system(5, 3, 40, Lambda::half()).unwrap();
        let tr = trace_superposition(&refs, &uniform_superposition(3).unwrap(), false).unwrap();
        for (k, chunk) in tr.samples().chunks(6).enumerate() {
            assert!(chunk.iter().all(|s| s == &chunk[0]));
            assert_eq!(tr.readout_at(k as u64), chunk[0]);
        }
    }

    #[test]
    fn readout_index_arithmetic() {
        let refs = build_reference_system(5, 2, 1, Lambda::unit()).unwrap();
        let tr = trace_product(&refs, &"LH".parse().unwrap(), true).unwrap();
        assert_eq!(readout(&tr), vec![tr.sample(3)]);
    }

    #[test]
    fn shifted_readout_matches_unshifted() {
        let refs = build_reference_system(8, 4, 60, Lambda::half()).unwrap();
        let w = "HLLH".parse().unwrap();
        let a = readout(&trace_product(&refs, &w, true).unwrap());
        let b = readout(&trace_product(&refs, &w, false).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn bit_count_mismatch() {
        let refs = build_reference_system(5, 2, 1, Lambda::unit()).unwrap();
        assert!(trace_product(&refs, &"LHH".parse().unwrap(), true).is_err());
        assert!(trace_superposition(&refs, &uniform_superposition(3).unwrap(), true).is_err());
    }

    #[test]
    fn csv_layout() {
        let refs = build_reference_system(5, 1, 2, Lambda::half()).unwrap();
        let tr = trace_product(&refs, &"L".parse().unwrap(), false).unwrap();
        let csv = tr.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "tick,period,scp,amplitude");
        assert_eq!(lines.len(), 5);
        assert!(lines[3].starts_with("2,1,0,"));
        assert!(lines[3].ends_with("1/2"));
    }

    #[test]
    fn pointwise_mul_checks_grid() {
        let a = build_reference_system(5, 2, 3, Lambda::unit()).unwrap();
        let b = build_reference_system(5, 2, 4, Lambda::unit()).unwrap();
        let ta = trace_product(&a, &"LL".parse().unwrap(), true).unwrap();
        let tb = trace_product(&b, &"LL".parse().unwrap(), true).unwrap();
        assert_eq!(ta.mul(&tb).unwrap_err(), Error::GridMismatch);
        let tu = trace_product(&a, &"LL".parse().unwrap(), false).unwrap();
        assert!(ta.mul(&tu).is_err());
    }
}
