use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of noise-bits must be at least 1")]
    ZeroBits,
    #[error("number of noise-bits {0} exceeds the supported maximum of 64")]
    TooManyBits(usize),
    #[error("number of clock periods must be at least 1")]
    ZeroPeriods,
    #[error("noise-bit index {bit} out of range 1..={num_bits}")]
    BitOutOfRange { bit: usize, num_bits: usize },
    #[error("lambda must satisfy 0 < lambda <= 1, got {0}")]
    LambdaOutOfRange(String),
    #[error("lambda must satisfy 0 < lambda < 1 for this operation, got {0}")]
    LambdaNotStrict(String),
    #[error("cannot parse rational {0:?}; expected \"p/q\" or an integer")]
    BadRational(String),
    #[error("tick {tick} out of range 0..{len}")]
    TickOutOfRange { tick: u64, len: u64 },
    #[error("bit-count mismatch: expected {expected}, got {actual}")]
    BitCountMismatch { expected: usize, actual: usize },
    #[error("value {bits:#b} does not fit in {num_bits} bits")]
    BitsOutOfRange { bits: u64, num_bits: usize },
    #[error("product-string index {index} out of range 1..=2^{num_bits}")]
    IndexOutOfRange { index: u64, num_bits: usize },
    #[error("cannot parse product-string {0:?}; expected letters H/L")]
    BadProductString(String),
    #[error("expansion of {num_bits} noise-bits refused: cap is {cap}")]
    ExpansionCap { num_bits: usize, cap: usize },
    #[error("sign assignment covers {actual} noise-bits, superposition has {expected}")]
    MissingSigns { expected: usize, actual: usize },
    #[error("epsilon must satisfy 0 < epsilon < 1, got {0}")]
    EpsilonOutOfRange(f64),
    #[error("trace is {0}; this operation requires the other mode")]
    WrongMode(&'static str),
    #[error("trace holds {available} periods, {required} required")]
    TraceTooShort { available: u64, required: u64 },
    #[error("trace grid does not match the reference system")]
    GridMismatch,
    #[error("contradictory decision for noise-bit {bit} at tick {tick}")]
    Contradiction { bit: usize, tick: u64 },
    #[error("all {0} candidates mismatched; the unknown is not a product-string of these references")]
    SearchExhausted(u64),
    #[error("invalid superposition JSON: {0}")]
    BadJson(String),
}
