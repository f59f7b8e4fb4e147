//! The two value semirings shipped with the crate: booleans under `or`/`and`
//! (possibility tables) and exact rationals (probability tables).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for building a rational from small integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or an integer string. Decimal literals are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::RationalLiteral(text.to_string());
    let trimmed = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    match trimmed.split_once('/') {
        Some((n, d)) => {
            let denom = parse_int(d)?;
            if denom.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(parse_int(n)?, denom))
        }
        None => Ok(Rational::from_integer(parse_int(trimmed)?)),
    }
}

/// Canonical text form: `"p/q"` in lowest terms, or a bare integer.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Which semiring a table is valued in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiringKind {
    /// Boolean semiring: a table is a non-empty set of possible sections.
    Possibility,
    /// Nonnegative rationals: a table is a probability distribution.
    Probability,
}

/// A commutative semiring in which distributions take values.
pub trait Semiring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const KIND: SemiringKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;

    /// Whether a weight is allowed inside a distribution of this kind.
    fn admissible(&self) -> bool {
        true
    }

    fn render(&self) -> String;
}

impl Semiring for bool {
    const KIND: SemiringKind = SemiringKind::Possibility;

    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
    fn is_zero(&self) -> bool {
        !*self
    }
    fn render(&self) -> String {
        if *self { "1" } else { "0" }.to_string()
    }
}

impl Semiring for Rational {
    const KIND: SemiringKind = SemiringKind::Probability;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn admissible(&self) -> bool {
        !self.is_negative()
    }
    fn render(&self) -> String {
        format_rational(self)
    }
}
