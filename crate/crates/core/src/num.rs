//! Numeric foundations: the `Real` scalar abstraction and exact fractions.
//!
//! Mining thresholds are kept as exact rationals so that a support count
//! sitting precisely on a threshold compares the same way on every platform.
//! Scores and metrics are ordinary floating point, generic over [`Real`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type for scores, weights, and metrics.
///
/// Implemented by `f32` and `f64`; the crate-root aliases fix `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + FromStr + fmt::Display + fmt::Debug + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + fmt::Display
        + fmt::Debug
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Error produced when a fraction cannot be parsed or constructed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FractionError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid fraction `{0}`")]
    Invalid(String),
}

/// A non-negative rational number with exact comparison semantics.
///
/// Stored in lowest terms. Threshold checks against `count / total` ratios
/// cross-multiply in 128-bit integers, so no rounding is ever involved.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    numer: u64,
    denom: u64,
}

const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Fraction {
    /// Builds `numer / denom`, reduced to lowest terms.
    pub fn new(numer: u64, denom: u64) -> Result<Self, FractionError> {
        if denom == 0 {
            return Err(FractionError::ZeroDenominator);
        }
        Ok(Self::reduce(numer, denom))
    }

    const fn reduce(numer: u64, denom: u64) -> Self {
        if numer == 0 {
            return Fraction { numer: 0, denom: 1 };
        }
        let g = gcd(numer, denom);
        Fraction { numer: numer / g, denom: denom / g }
    }

    /// Compile-time constructor for known-good constants.
    pub(crate) const fn constant(numer: u64, denom: u64) -> Self {
        assert!(denom != 0);
        Self::reduce(numer, denom)
    }

    pub const fn zero() -> Self {
        Fraction { numer: 0, denom: 1 }
    }

    pub const fn one() -> Self {
        Fraction { numer: 1, denom: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer == 0
    }

    /// True when `count / total >= self`, computed exactly.
    pub fn is_met_by(&self, count: usize, total: usize) -> bool {
        count as u128 * self.denom as u128 >= self.numer as u128 * total as u128
    }

    /// True when `self * scale <= bound`, computed exactly.
    pub fn scaled_le(&self, scale: usize, bound: usize) -> bool {
        self.numer as u128 * scale as u128 <= bound as u128 * self.denom as u128
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    pub fn to_real<R: Real>(&self) -> R {
        R::from_f64(self.to_f64()).unwrap_or_else(R::zero)
    }

    /// Parses either a decimal (`0.05`) or an explicit ratio (`1/20`).
    pub fn parse(s: &str) -> Result<Self, FractionError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(FractionError::Invalid(s.to_string()));
        }
        if let Some((n, d)) = s.split_once('/') {
            let numer: u64 = n.trim().parse().map_err(|_| FractionError::Invalid(s.to_string()))?;
            let denom: u64 = d.trim().parse().map_err(|_| FractionError::Invalid(s.to_string()))?;
            return Self::new(numer, denom);
        }
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(FractionError::Invalid(s.to_string()));
        }
        let digits_ok = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if !digits_ok(int_part) || !digits_ok(frac_part) || frac_part.len() > 18 {
            return Err(FractionError::Invalid(s.to_string()));
        }
        let int_val: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| FractionError::Invalid(s.to_string()))?
        };
        let scale = 10u64.pow(frac_part.len() as u32);
        let frac_val: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| FractionError::Invalid(s.to_string()))?
        };
        let numer = int_val
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(|| FractionError::Invalid(s.to_string()))?;
        Self::new(numer, scale)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numer as u128 * other.denom as u128;
        let rhs = other.numer as u128 * self.denom as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl FromStr for Fraction {
    type Err = FractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Converts an arbitrary-precision ratio to `f64`, tolerating huge terms.
pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Both terms overflowed f64; scale the quotient into range instead.
    let scaled: BigInt = (r.numer() << 64u32) / r.denom();
    scaled.to_f64().unwrap_or(0.0) / 2f64.powi(64)
}
