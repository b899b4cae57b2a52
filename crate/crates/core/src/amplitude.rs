//! Exact amplitudes and the L-reference scale factor.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p/q"` or a bare integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => t.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

/// Always renders `p/q`, including integers (`1/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Amplitude of the L reference relative to the H reference, `0 < λ ≤ 1`.
///
/// `λ = 1` is the original unit-amplitude representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lambda(Rational);

impl Lambda {
    pub fn new(value: Rational) -> Result<Self> {
        if !value.is_positive() || value > Rational::one() {
            return Err(Error::LambdaOutOfRange(format_rational(&value)));
        }
        Ok(Self(value))
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::BadRational(format!("{p}/{q}")));
        }
        Self::new(Rational::new(p.into(), q.into()))
    }

    pub fn unit() -> Self {
        Self(Rational::one())
    }

    pub fn half() -> Self {
        Self(Rational::new(1.into(), 2.into()))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_one()
    }

    /// Rejects `λ = 1` for operations that need a strictly positive minimum amplitude.
    pub fn strict(&self) -> Result<&Self> {
        if self.is_unit() {
            Err(Error::LambdaNotStrict(self.to_string()))
        } else {
            Ok(self)
        }
    }

    pub fn squared(&self) -> Rational {
        &self.0 * &self.0
    }

    /// `λ^0 ..= λ^n`.
    pub fn powers(&self, n: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(n + 1);
        let mut acc = Rational::one();
        for _ in 0..=n {
            out.push(acc.clone());
            acc = &acc * &self.0;
        }
        out
    }
}

impl Default for Lambda {
    fn default() -> Self {
        Self::half()
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}
