//! Exact symbolic algebra of product-strings and superpositions.
//!
//! This is the ground truth the waveform engine is checked against. Values
//! are substituted as `H_r = A_r` and `L_r = λ·B_r`, and the identities
//! `A_r² = B_r² = 1` reduce products of references at the same bit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::amplitude::{format_rational, parse_rational, Lambda, Rational};
use crate::error::{Error, Result};
use crate::rtw::{check_bits, low_mask, SignAssignment};

/// Largest `N` that [`expand`] will distribute without an explicit cap.
pub const DEFAULT_EXPANSION_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    L,
    H,
}

impl Level {
    pub fn inverse(self) -> Self {
        match self {
            Level::L => Level::H,
            Level::H => Level::L,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Level::L => 'L',
            Level::H => 'H',
        }
    }
}

/// A hyperspace vector `W = X_1 X_2 … X_N`, one of `H_r` / `L_r` per bit.
///
/// Storage: bit `r-1` of `bits` set means noise-bit `r` is `H_r`.
/// The enumeration index runs the other way: index `i` (1-based) is `i-1`
/// written with noise-bit 1 as the most significant digit, so `W_1 = LLL`
/// and `W_8 = HHH` for `N = 3`. [`code`](Self::code) returns `i-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProductString {
    num_bits: usize,
    bits: u64,
}

impl ProductString {
    pub fn new(num_bits: usize, bits: u64) -> Result<Self> {
        check_bits(num_bits)?;
        if bits & !low_mask(num_bits) != 0 {
            return Err(Error::BitsOutOfRange { bits, num_bits });
        }
        Ok(Self { num_bits, bits })
    }

    pub fn all_low(num_bits: usize) -> Result<Self> {
        Self::new(num_bits, 0)
    }

    pub fn all_high(num_bits: usize) -> Result<Self> {
        Self::new(num_bits, low_mask(num_bits))
    }

    /// Build from the MSB-first binary code (`H = 1`), i.e. enumeration index minus one.
    pub fn from_code(num_bits: usize, code: u64) -> Result<Self> {
        check_bits(num_bits)?;
        if code & !low_mask(num_bits) != 0 {
            return Err(Error::BitsOutOfRange { bits: code, num_bits });
        }
        Ok(Self { num_bits, bits: reverse_low(code, num_bits) })
    }

    /// Build from the 1-based enumeration index `1..=2^N`.
    pub fn from_index(num_bits: usize, index: u64) -> Result<Self> {
        check_bits(num_bits)?;
        let count = low_mask(num_bits);
        if index == 0 || index - 1 > count {
            return Err(Error::IndexOutOfRange { index, num_bits });
        }
        Self::from_code(num_bits, index - 1)
    }

    pub fn from_levels(levels: &[Level]) -> Result<Self> {
        check_bits(levels.len())?;
        let bits = levels.iter().enumerate().fold(0u64, |m, (i, l)| m | (u64::from(*l == Level::H) << i));
        Ok(Self { num_bits: levels.len(), bits })
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    /// Raw storage: bit `r-1` set ⇔ noise-bit `r` is H.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn code(&self) -> u64 {
        reverse_low(self.bits, self.num_bits)
    }

    pub fn index(&self) -> u64 {
        self.code() + 1
    }

    pub fn level(&self, bit: usize) -> Level {
        if self.bits >> (bit - 1) & 1 == 1 {
            Level::H
        } else {
            Level::L
        }
    }

    pub fn is_high(&self, bit: usize) -> bool {
        self.level(bit) == Level::H
    }

    pub fn with_level(&self, bit: usize, level: Level) -> Self {
        let m = 1u64 << (bit - 1);
        let bits = match level {
            Level::H => self.bits | m,
            Level::L => self.bits & !m,
        };
        Self { num_bits: self.num_bits, bits }
    }

    pub fn flipped(&self, bit: usize) -> Self {
        Self { num_bits: self.num_bits, bits: self.bits ^ (1u64 << (bit - 1)) }
    }

    /// Number of `L` factors, i.e. the power of λ in the amplitude.
    pub fn low_count(&self) -> usize {
        self.num_bits - self.bits.count_ones() as usize
    }

    pub fn levels(&self) -> Vec<Level> {
        (1..=self.num_bits).map(|r| self.level(r)).collect()
    }

    /// The sign of this product under a sign pattern given as negative masks.
    #[inline]
    pub fn sign_negative(&self, a_neg: u64, b_neg: u64) -> bool {
        let negatives = (self.bits & a_neg) | (!self.bits & low_mask(self.num_bits) & b_neg);
        negatives.count_ones() & 1 == 1
    }

    /// Every product-string of `num_bits` bits in enumeration-index order.
    pub fn all(num_bits: usize) -> Result<impl Iterator<Item = ProductString>> {
        check_bits(num_bits)?;
        if num_bits > DEFAULT_EXPANSION_CAP {
            return Err(Error::ExpansionCap { num_bits, cap: DEFAULT_EXPANSION_CAP });
        }
        Ok((0..1u64 << num_bits).map(move |c| ProductString::from_code(num_bits, c).unwrap()))
    }

    pub fn check_bit(&self, bit: usize) -> Result<()> {
        if bit == 0 || bit > self.num_bits {
            Err(Error::BitOutOfRange { bit, num_bits: self.num_bits })
        } else {
            Ok(())
        }
    }
}

fn reverse_low(x: u64, n: usize) -> u64 {
    x.reverse_bits() >> (64 - n)
}

impl PartialOrd for ProductString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProductString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num_bits, self.code()).cmp(&(other.num_bits, other.code()))
    }
}

impl fmt::Display for ProductString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (1..=self.num_bits).map(|r| self.level(r).letter()).collect();
        f.write_str(&s)
    }
}

impl FromStr for ProductString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let levels = s
            .trim()
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'H' => Ok(Level::H),
                'L' => Ok(Level::L),
                _ => Err(Error::BadProductString(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if levels.is_empty() {
            return Err(Error::BadProductString(s.to_string()));
        }
        Self::from_levels(&levels)
    }
}

impl Serialize for ProductString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProductString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Operations shared by the expanded and factored forms.
pub trait Symbolic: Sized {
    fn num_bits(&self) -> usize;

    /// Multiply by `H_r L_r = λ A_r B_r`.
    fn apply_not(&self, bit: usize, lambda: &Lambda) -> Result<Self>;

    /// Substitute `H_r = A_r`, `L_r = λ B_r` and evaluate exactly.
    fn evaluate(&self, signs: &SignAssignment, lambda: &Lambda) -> Result<Rational>;

    fn check_bit(&self, bit: usize) -> Result<()> {
        if bit == 0 || bit > self.num_bits() {
            Err(Error::BitOutOfRange { bit, num_bits: self.num_bits() })
        } else {
            Ok(())
        }
    }

    fn check_signs(&self, signs: &SignAssignment) -> Result<()> {
        if signs.num_bits() != self.num_bits() {
            Err(Error::MissingSigns { expected: self.num_bits(), actual: signs.num_bits() })
        } else {
            Ok(())
        }
    }
}

pub fn apply_not<S: Symbolic>(s: &S, bit: usize, lambda: &Lambda) -> Result<S> {
    s.apply_not(bit, lambda)
}

pub fn evaluate_symbolic<S: Symbolic>(s: &S, signs: &SignAssignment, lambda: &Lambda) -> Result<Rational> {
    s.evaluate(signs, lambda)
}

/// Expanded superposition: exact coefficient per product-string, no zeros stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superposition {
    num_bits: usize,
    terms: BTreeMap<ProductString, Rational>,
}

impl Superposition {
    pub fn new(num_bits: usize) -> Result<Self> {
        check_bits(num_bits)?;
        Ok(Self { num_bits, terms: BTreeMap::new() })
    }

    pub fn single(string: ProductString, coeff: Rational) -> Self {
        let mut s = Self { num_bits: string.num_bits(), terms: BTreeMap::new() };
        s.add_term(string, coeff).expect("bit count matches");
        s
    }

    /// Adds `coeff` to the coefficient of `string`, dropping it if the sum is zero.
    pub fn add_term(&mut self, string: ProductString, coeff: Rational) -> Result<()> {
        if string.num_bits() != self.num_bits {
            return Err(Error::BitCountMismatch { expected: self.num_bits, actual: string.num_bits() });
        }
        let entry = self.terms.entry(string).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&string);
        }
        Ok(())
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, string: &ProductString) -> Rational {
        self.terms.get(string).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in enumeration-index order.
    pub fn terms(&self) -> impl Iterator<Item = (&ProductString, &Rational)> {
        self.terms.iter()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self { num_bits: self.num_bits, terms: BTreeMap::new() };
        }
        let terms = self.terms.iter().map(|(s, c)| (*s, c * factor)).collect();
        Self { num_bits: self.num_bits, terms }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SuperpositionJson::from(self)).expect("plain data serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&SuperpositionJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SuperpositionJson = serde_json::from_str(text).map_err(|e| Error::BadJson(e.to_string()))?;
        let mut out = Self::new(raw.bits)?;
        for t in raw.terms {
            let string: ProductString = t.string.parse()?;
            out.add_term(string, parse_rational(&t.coeff)?)?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SuperpositionJson {
    bits: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    string: String,
    coeff: String,
}

impl From<&Superposition> for SuperpositionJson {
    fn from(s: &Superposition) -> Self {
        let terms = s.terms().map(|(p, c)| TermJson { string: p.to_string(), coeff: format_rational(c) }).collect();
        Self { bits: s.num_bits, terms }
    }
}

impl Symbolic for Superposition {
    fn num_bits(&self) -> usize {
        self.num_bits
    }

    fn apply_not(&self, bit: usize, lambda: &Lambda) -> Result<Self> {
        self.check_bit(bit)?;
        let lambda_sq = lambda.squared();
        let terms = self
            .terms
            .iter()
            .map(|(s, c)| {
                if s.is_high(bit) {
                    (s.with_level(bit, Level::L), c.clone())
                } else {
                    (s.with_level(bit, Level::H), c * &lambda_sq)
                }
            })
            .collect();
        Ok(Self { num_bits: self.num_bits, terms })
    }

    fn evaluate(&self, signs: &SignAssignment, lambda: &Lambda) -> Result<Rational> {
        self.check_signs(signs)?;
        let (a_neg, b_neg) = signs.masks();
        let powers = lambda.powers(self.num_bits);
        let mut total = Rational::zero();
        for (s, c) in &self.terms {
            let term = c * &powers[s.low_count()];
            if s.sign_negative(a_neg, b_neg) {
                total -= term;
            } else {
                total += term;
            }
        }
        Ok(total)
    }
}

/// `Π_r (c_H[r]·H_r + c_L[r]·L_r)`, stored as per-bit coefficient pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredSuperposition {
    high: Vec<Rational>,
    low: Vec<Rational>,
}

impl FactoredSuperposition {
    pub fn new(high: Vec<Rational>, low: Vec<Rational>) -> Result<Self> {
        check_bits(high.len())?;
        if high.len() != low.len() {
            return Err(Error::BitCountMismatch { expected: high.len(), actual: low.len() });
        }
        Ok(Self { high, low })
    }

    pub fn uniform(num_bits: usize) -> Result<Self> {
        check_bits(num_bits)?;
        Ok(Self { high: vec![Rational::one(); num_bits], low: vec![Rational::one(); num_bits] })
    }

    /// The single product-string `w` with unit coefficient.
    pub fn from_product(w: &ProductString) -> Self {
        let (high, low) =
            (1..=w.num_bits())
                .map(|r| {
                    if w.is_high(r) {
                        (Rational::one(), Rational::zero())
                    } else {
                        (Rational::zero(), Rational::one())
                    }
                })
                .unzip();
        Self { high, low }
    }

    pub fn high(&self) -> &[Rational] {
        &self.high
    }

    pub fn low(&self) -> &[Rational] {
        &self.low
    }

    /// `(c_H[r], c_L[r])` for 1-based `r`.
    pub fn pair(&self, bit: usize) -> (&Rational, &Rational) {
        (&self.high[bit - 1], &self.low[bit - 1])
    }

    pub fn set_pair(&mut self, bit: usize, high: Rational, low: Rational) -> Result<()> {
        self.check_bit(bit)?;
        self.high[bit - 1] = high;
        self.low[bit - 1] = low;
        Ok(())
    }

    pub fn expand(&self) -> Result<Superposition> {
        self.expand_with_cap(DEFAULT_EXPANSION_CAP)
    }

    /// Distributes the product over all product-strings, refusing `N > cap`.
    pub fn expand_with_cap(&self, cap: usize) -> Result<Superposition> {
        let n = self.num_bits();
        if n > cap {
            return Err(Error::ExpansionCap { num_bits: n, cap });
        }
        let mut partial: Vec<(u64, Rational)> = vec![(0, Rational::one())];
        for (i, (ch, cl)) in self.high.iter().zip(&self.low).enumerate() {
            let mut next = Vec::with_capacity(partial.len() * 2);
            for (bits, c) in &partial {
                if !ch.is_zero() {
                    next.push((bits | 1u64 << i, c * ch));
                }
                if !cl.is_zero() {
                    next.push((*bits, c * cl));
                }
            }
            partial = next;
        }
        let terms = partial.into_iter().map(|(bits, c)| (ProductString { num_bits: n, bits }, c)).collect();
        Ok(Superposition { num_bits: n, terms })
    }
}

impl Symbolic for FactoredSuperposition {
    fn num_bits(&self) -> usize {
        self.high.len()
    }

    fn apply_not(&self, bit: usize, lambda: &Lambda) -> Result<Self> {
        self.check_bit(bit)?;
        let mut out = self.clone();
        let i = bit - 1;
        out.high[i] = lambda.squared() * &self.low[i];
        out.low[i] = self.high[i].clone();
        Ok(out)
    }

    fn evaluate(&self, signs: &SignAssignment, lambda: &Lambda) -> Result<Rational> {
        self.check_signs(signs)?;
        let mut acc = Rational::one();
        for i in 0..self.num_bits() {
            let h = signed(&self.high[i], signs.a()[i].is_negative());
            let l = signed(&(&self.low[i] * lambda.value()), signs.b()[i].is_negative());
            acc *= h + l;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }
}

fn signed(x: &Rational, negative: bool) -> Rational {
    if negative {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Complete uniform superposition `Π_r (H_r + L_r)`.
pub fn uniform_superposition(num_bits: usize) -> Result<FactoredSuperposition> {
    FactoredSuperposition::uniform(num_bits)
}

pub fn expand(f: &FactoredSuperposition) -> Result<Superposition> {
    f.expand()
}
