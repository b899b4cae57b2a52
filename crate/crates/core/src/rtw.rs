//! Random-telegraph-wave reference signals on the sub-clock grid.
//!
//! Every noise-bit `r` owns two independent streams: role `A` carries the
//! High value `H_r = A_r` and role `B` carries the Low value `L_r = λ·B_r`.
//! Each stream draws a fair ±1 sign per clock period from a counter-based
//! hash of `(master seed, stream, period)`, so any sample is reproducible
//! without replaying history.
//!
//! A clock period is divided into `2N` sub-clock periods (SCPs). In the
//! time-shifted layout the `L_r` stream switches at SCP `2(r-1)` and the
//! `H_r` stream at SCP `2(r-1)+1`; in the classic layout all streams switch
//! at SCP 0.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::amplitude::{Lambda, Rational};
use crate::error::{Error, Result};

pub const MAX_BITS: usize = 64;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed, e.g. one per Monte Carlo trial.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum Sign {
    Minus = -1,
    Plus = 1,
}

impl Sign {
    #[inline]
    pub fn from_negative(neg: bool) -> Self {
        if neg {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    #[inline]
    pub fn as_i8(self) -> i8 {
        self as i8
    }

    pub fn to_rational(self) -> Rational {
        Rational::from_integer((self as i8).into())
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_negative(self.is_negative() != rhs.is_negative())
    }
}

/// Which physical stream of a noise-bit: `A` carries H, `B` carries L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StreamId {
    /// 1-based noise-bit index.
    pub bit: usize,
    pub role: Role,
}

impl StreamId {
    pub fn new(bit: usize, role: Role) -> Self {
        Self { bit, role }
    }

    pub fn high(bit: usize) -> Self {
        Self::new(bit, Role::A)
    }

    pub fn low(bit: usize) -> Self {
        Self::new(bit, Role::B)
    }

    /// SCP at which this stream switches in the time-shifted layout.
    pub fn shift_index(self) -> usize {
        let base = 2 * (self.bit - 1);
        match self.role {
            Role::B => base,
            Role::A => base + 1,
        }
    }

    /// Inverse of [`shift_index`](Self::shift_index).
    pub fn from_shift_index(shift: usize) -> Self {
        let bit = shift / 2 + 1;
        if shift % 2 == 0 {
            Self::low(bit)
        } else {
            Self::high(bit)
        }
    }

    fn tag(self) -> u64 {
        self.shift_index() as u64 + 1
    }
}

impl fmt::Display for StreamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.role {
            Role::A => write!(f, "H{}", self.bit),
            Role::B => write!(f, "L{}", self.bit),
        }
    }
}

/// Integer sub-clock time base: `2N` ticks per period, `τ = T / 2N`, `T = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClockGrid {
    num_bits: usize,
    num_periods: u64,
}

impl ClockGrid {
    pub fn new(num_bits: usize, num_periods: u64) -> Result<Self> {
        check_bits(num_bits)?;
        if num_periods == 0 {
            return Err(Error::ZeroPeriods);
        }
        Ok(Self { num_bits, num_periods })
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn num_periods(&self) -> u64 {
        self.num_periods
    }

    #[inline]
    pub fn subclocks_per_period(&self) -> u64 {
        2 * self.num_bits as u64
    }

    pub fn period_duration(&self) -> Rational {
        Rational::from_integer(1.into())
    }

    pub fn subclock_duration(&self) -> Rational {
        Rational::new(1.into(), self.subclocks_per_period().into())
    }

    #[inline]
    pub fn total_ticks(&self) -> u64 {
        self.num_periods * self.subclocks_per_period()
    }

    #[inline]
    pub fn period_of(&self, tick: u64) -> u64 {
        tick / self.subclocks_per_period()
    }

    #[inline]
    pub fn scp_of(&self, tick: u64) -> usize {
        (tick % self.subclocks_per_period()) as usize
    }

    /// Last SCP of period `k`, where every shifted stream holds its period-`k` sign.
    #[inline]
    pub fn readout_tick(&self, period: u64) -> u64 {
        period * self.subclocks_per_period() + self.subclocks_per_period() - 1
    }

    pub fn check_tick(&self, tick: u64) -> Result<()> {
        if tick < self.total_ticks() {
            Ok(())
        } else {
            Err(Error::TickOutOfRange { tick, len: self.total_ticks() })
        }
    }
}

pub(crate) fn check_bits(num_bits: usize) -> Result<()> {
    if num_bits == 0 {
        Err(Error::ZeroBits)
    } else if num_bits > MAX_BITS {
        Err(Error::TooManyBits(num_bits))
    } else {
        Ok(())
    }
}

/// One reference stream: a fair ±1 sign per clock period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RtwProcess {
    id: StreamId,
    seed: u64,
    signs: Vec<Sign>,
}

impl RtwProcess {
    pub fn id(&self) -> StreamId {
        self.id
    }

    pub fn shift_index(&self) -> usize {
        self.id.shift_index()
    }

    /// Per-stream seed derived from the master seed.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn num_periods(&self) -> u64 {
        self.signs.len() as u64
    }

    /// Sign held during period `k`.
    #[inline]
    pub fn sign(&self, period: u64) -> Sign {
        self.signs[period as usize]
    }

    /// Period whose sign is visible at `tick`, honoring the warm-up convention.
    #[inline]
    fn period_at(&self, tick: u64, grid: &ClockGrid, shifted: bool) -> u64 {
        let spp = grid.subclocks_per_period();
        if !shifted {
            return tick / spp;
        }
        let shift = self.shift_index() as u64;
        if tick < shift {
            0
        } else {
            (tick - shift) / spp
        }
    }

    #[inline]
    pub(crate) fn value_unchecked(&self, tick: u64, grid: &ClockGrid, shifted: bool) -> Sign {
        self.sign(self.period_at(tick, grid, shifted))
    }
}

fn stream_seed(master_seed: u64, id: StreamId) -> u64 {
    mix64(master_seed ^ id.tag().wrapping_mul(GOLDEN))
}

#[inline]
fn draw_sign(stream_seed: u64, period: u64) -> Sign {
    let h = mix64(stream_seed ^ mix64(period.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)));
    Sign::from_negative(h >> 63 == 1)
}

/// Generates `num_periods` signs of one stream.
pub fn gen_rtw(master_seed: u64, id: StreamId, num_periods: u64) -> Result<RtwProcess> {
    if num_periods == 0 {
        return Err(Error::ZeroPeriods);
    }
    if id.bit == 0 || id.bit > MAX_BITS {
        return Err(Error::BitOutOfRange { bit: id.bit, num_bits: MAX_BITS });
    }
    let seed = stream_seed(master_seed, id);
    let signs = (0..num_periods).map(|k| draw_sign(seed, k)).collect();
    Ok(RtwProcess { id, seed, signs })
}

/// Value of a stream at a sub-clock tick.
///
/// Classic mode holds `signs[tick / 2N]`. Shifted mode switches to the
/// period-`k` sign at tick `k·2N + shift_index` and holds it for `2N` ticks;
/// before the first switch it holds `signs[0]`.
pub fn value_at(rtw: &RtwProcess, tick: u64, grid: &ClockGrid, shifted: bool) -> Result<Sign> {
    grid.check_tick(tick)?;
    if rtw.num_periods() < grid.num_periods() {
        return Err(Error::TraceTooShort { available: rtw.num_periods(), required: grid.num_periods() });
    }
    Ok(rtw.value_unchecked(tick, grid, shifted))
}

/// Signs of every stream for one period, indexed by noise-bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignAssignment {
    a: Vec<Sign>,
    b: Vec<Sign>,
}

impl SignAssignment {
    pub fn new(a: Vec<Sign>, b: Vec<Sign>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::BitCountMismatch { expected: a.len(), actual: b.len() });
        }
        Ok(Self { a, b })
    }

    pub fn all(num_bits: usize, a: Sign, b: Sign) -> Self {
        Self { a: vec![a; num_bits], b: vec![b; num_bits] }
    }

    /// Bit `r-1` of `a_neg` set means `A_r = -1`; same for `b_neg`.
    pub fn from_masks(num_bits: usize, a_neg: u64, b_neg: u64) -> Self {
        let unpack = |m: u64| (0..num_bits).map(|i| Sign::from_negative(m >> i & 1 == 1)).collect();
        Self { a: unpack(a_neg), b: unpack(b_neg) }
    }

    pub fn num_bits(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, id: StreamId) -> Sign {
        match id.role {
            Role::A => self.a[id.bit - 1],
            Role::B => self.b[id.bit - 1],
        }
    }

    pub fn a(&self) -> &[Sign] {
        &self.a
    }

    pub fn b(&self) -> &[Sign] {
        &self.b
    }

    pub fn masks(&self) -> (u64, u64) {
        let pack = |v: &[Sign]| v.iter().enumerate().fold(0u64, |m, (i, s)| m | (u64::from(s.is_negative()) << i));
        (pack(&self.a), pack(&self.b))
    }
}

/// The `2N` reference streams of an `N`-bit system and the amplitude scale λ.
#[derive(Clone, Debug)]
pub struct ReferenceSystem {
    grid: ClockGrid,
    lambda: Lambda,
    master_seed: u64,
    /// Ordered by shift index: `streams[s].shift_index() == s`.
    streams: Vec<RtwProcess>,
    /// Per period, bitmasks of negative `A` and `B` signs.
    neg_masks: Vec<(u64, u64)>,
}

pub fn build_reference_system(
    master_seed: u64,
    num_bits: usize,
    num_periods: u64,
    lambda: Lambda,
) -> Result<ReferenceSystem> {
    ReferenceSystem::new(master_seed, num_bits, num_periods, lambda)
}

impl ReferenceSystem {
    pub fn new(master_seed: u64, num_bits: usize, num_periods: u64, lambda: Lambda) -> Result<Self> {
        let grid = ClockGrid::new(num_bits, num_periods)?;
        let streams = (0..2 * num_bits)
            .map(|s| gen_rtw(master_seed, StreamId::from_shift_index(s), num_periods))
            .collect::<Result<Vec<_>>>()?;
        let neg_masks = (0..num_periods)
            .map(|k| {
                let mut a = 0u64;
                let mut b = 0u64;
                for r in 0..num_bits {
                    b |= u64::from(streams[2 * r].sign(k).is_negative()) << r;
                    a |= u64::from(streams[2 * r + 1].sign(k).is_negative()) << r;
                }
                (a, b)
            })
            .collect();
        Ok(Self { grid, lambda, master_seed, streams, neg_masks })
    }

    pub fn grid(&self) -> &ClockGrid {
        &self.grid
    }

    pub fn num_bits(&self) -> usize {
        self.grid.num_bits()
    }

    pub fn lambda(&self) -> &Lambda {
        &self.lambda
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn streams(&self) -> &[RtwProcess] {
        &self.streams
    }

    pub fn stream(&self, id: StreamId) -> Result<&RtwProcess> {
        if id.bit == 0 || id.bit > self.num_bits() {
            return Err(Error::BitOutOfRange { bit: id.bit, num_bits: self.num_bits() });
        }
        Ok(&self.streams[id.shift_index()])
    }

    /// Stream that switches at SCP `s` in the shifted layout.
    pub fn stream_at_scp(&self, scp: usize) -> &RtwProcess {
        &self.streams[scp]
    }

    /// Logical value of a reference: `H_r = A_r`, `L_r = λ·B_r`.
    pub fn logical_value(&self, id: StreamId, tick: u64, shifted: bool) -> Result<Rational> {
        let sign = value_at(self.stream(id)?, tick, &self.grid, shifted)?.to_rational();
        Ok(match id.role {
            Role::A => sign,
            Role::B => sign * self.lambda.value(),
        })
    }

    /// Signs of all streams during period `k`.
    pub fn period_signs(&self, period: u64) -> SignAssignment {
        let (a, b) = self.neg_masks[period as usize];
        SignAssignment::from_masks(self.num_bits(), a, b)
    }

    /// Negative-sign masks `(A, B)` visible at a tick.
    ///
    /// In shifted mode, streams whose SCP has not yet come up in the current
    /// period still show the previous period's sign.
    #[inline]
    pub fn neg_masks_at(&self, tick: u64, shifted: bool) -> (u64, u64) {
        let k = self.grid.period_of(tick);
        let cur = self.neg_masks[k as usize];
        if !shifted || k == 0 {
            // Period 0 before a stream's switch shows signs[0] anyway.
            return cur;
        }
        let scp = self.grid.scp_of(tick);
        let prev = self.neg_masks[k as usize - 1];
        // L_r switched iff 2(r-1) <= scp; H_r switched iff 2(r-1)+1 <= scp.
        let b_switched = low_mask(scp / 2 + 1);
        let a_switched = low_mask((scp + 1) / 2);
        ((cur.0 & a_switched) | (prev.0 & !a_switched), (cur.1 & b_switched) | (prev.1 & !b_switched))
    }

    pub fn period_neg_masks(&self, period: u64) -> (u64, u64) {
        self.neg_masks[period as usize]
    }

    pub fn bit_mask(&self) -> u64 {
        low_mask(self.num_bits())
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
