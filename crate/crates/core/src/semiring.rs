//! The two semirings quantitative models need: Booleans for
//! nondeterminism and exact nonnegative rationals for rates and
//! probabilities.
//!
//! Values are compared exactly. Partition refinement splits blocks on
//! value equality, so a floating-point carrier would make the induced
//! block relation non-transitive.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Identifies one of the registered semirings.
///
/// Further instances would be added here; each needs a zero, a one and the
/// two operations in [`SemiringValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemiringId {
    Boolean,
    NonNegRational,
}

impl SemiringId {
    pub fn zero(self) -> SemiringValue {
        match self {
            SemiringId::Boolean => SemiringValue::Bool(false),
            SemiringId::NonNegRational => SemiringValue::Rat(NonNegRational::zero()),
        }
    }

    pub fn one(self) -> SemiringValue {
        match self {
            SemiringId::Boolean => SemiringValue::Bool(true),
            SemiringId::NonNegRational => SemiringValue::Rat(NonNegRational::one()),
        }
    }

    /// Keyword used by the text formats.
    pub fn keyword(self) -> &'static str {
        match self {
            SemiringId::Boolean => "bool",
            SemiringId::NonNegRational => "real",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "bool" => Some(SemiringId::Boolean),
            "real" => Some(SemiringId::NonNegRational),
            _ => None,
        }
    }
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("mixed semirings: {0} and {1}")]
    MixedSemiring(SemiringId, SemiringId),
    #[error("empty sum needs an explicit semiring")]
    MissingSemiringId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("negative value `{0}`")]
    Negative(String),
}

/// An exact rational number `>= 0`, always stored in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonNegRational(BigRational);

impl NonNegRational {
    /// Returns `None` for negative inputs.
    pub fn new(value: BigRational) -> Option<Self> {
        if value.is_negative() {
            None
        } else {
            Some(NonNegRational(value))
        }
    }

    /// `numer / denom`; `None` if `denom == 0`.
    pub fn from_ratio(numer: u64, denom: u64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(NonNegRational(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_integer(n: u64) -> Self {
        NonNegRational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        NonNegRational(BigRational::zero())
    }

    pub fn one() -> Self {
        NonNegRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(NonNegRational(&self.0 / &other.0))
        }
    }
}

impl std::ops::Add for &NonNegRational {
    type Output = NonNegRational;
    fn add(self, rhs: Self) -> NonNegRational {
        NonNegRational(&self.0 + &rhs.0)
    }
}

impl std::ops::Mul for &NonNegRational {
    type Output = NonNegRational;
    fn mul(self, rhs: Self) -> NonNegRational {
        NonNegRational(&self.0 * &rhs.0)
    }
}

impl std::ops::AddAssign<&NonNegRational> for NonNegRational {
    fn add_assign(&mut self, rhs: &NonNegRational) {
        self.0 += &rhs.0;
    }
}

impl std::iter::Sum for NonNegRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(NonNegRational::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> std::iter::Sum<&'a NonNegRational> for NonNegRational {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(NonNegRational::zero(), |acc, x| &acc + x)
    }
}

/// Prints `n` for integers and `n/d` otherwise.
impl fmt::Display for NonNegRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for NonNegRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `3`, `3/4` and `0.25`. Decimals are converted exactly.
impl FromStr for NonNegRational {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || RationalParseError::Malformed(s.to_string());
        if s.is_empty() {
            return Err(RationalParseError::Empty);
        }
        if s.starts_with('-') {
            return Err(RationalParseError::Negative(s.to_string()));
        }
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if let Some((num, den)) = s.split_once('/') {
            if !digits(num) || !digits(den) {
                return Err(malformed());
            }
            let num: BigInt = num.parse().map_err(|_| malformed())?;
            let den: BigInt = den.parse().map_err(|_| malformed())?;
            if den.is_zero() {
                return Err(RationalParseError::ZeroDenominator(s.to_string()));
            }
            return Ok(NonNegRational(BigRational::new(num, den)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if !digits(int) || !digits(frac) {
                return Err(malformed());
            }
            let num: BigInt = format!("{int}{frac}").parse().map_err(|_| malformed())?;
            let den = num_traits::pow(BigInt::from(10u32), frac.len());
            return Ok(NonNegRational(BigRational::new(num, den)));
        }
        if !digits(s) {
            return Err(malformed());
        }
        let n: BigInt = s.parse().map_err(|_| malformed())?;
        Ok(NonNegRational(BigRational::from_integer(n)))
    }
}

/// An element of one of the registered semirings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemiringValue {
    Bool(bool),
    Rat(NonNegRational),
}

impl SemiringValue {
    pub fn semiring(&self) -> SemiringId {
        match self {
            SemiringValue::Bool(_) => SemiringId::Boolean,
            SemiringValue::Rat(_) => SemiringId::NonNegRational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SemiringValue::Bool(b) => !b,
            SemiringValue::Rat(r) => r.is_zero(),
        }
    }

    pub fn rat(numer: u64, denom: u64) -> Self {
        SemiringValue::Rat(NonNegRational::from_ratio(numer, denom).expect("nonzero denominator"))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SemiringError> {
        match (self, other) {
            (SemiringValue::Bool(a), SemiringValue::Bool(b)) => Ok(SemiringValue::Bool(*a || *b)),
            (SemiringValue::Rat(a), SemiringValue::Rat(b)) => Ok(SemiringValue::Rat(a + b)),
            _ => Err(SemiringError::MixedSemiring(self.semiring(), other.semiring())),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SemiringError> {
        match (self, other) {
            (SemiringValue::Bool(a), SemiringValue::Bool(b)) => Ok(SemiringValue::Bool(*a && *b)),
            (SemiringValue::Rat(a), SemiringValue::Rat(b)) => Ok(SemiringValue::Rat(a * b)),
            _ => Err(SemiringError::MixedSemiring(self.semiring(), other.semiring())),
        }
    }

    /// In-place `self += other`.
    pub fn accumulate(&mut self, other: &Self) -> Result<(), SemiringError> {
        match (self, other) {
            (SemiringValue::Bool(a), SemiringValue::Bool(b)) => {
                *a |= *b;
                Ok(())
            }
            (SemiringValue::Rat(a), SemiringValue::Rat(b)) => {
                *a += b;
                Ok(())
            }
            (this, _) => Err(SemiringError::MixedSemiring(this.semiring(), other.semiring())),
        }
    }
}

impl fmt::Display for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringValue::Bool(b) => write!(f, "{b}"),
            SemiringValue::Rat(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<bool> for SemiringValue {
    fn from(b: bool) -> Self {
        SemiringValue::Bool(b)
    }
}

impl From<NonNegRational> for SemiringValue {
    fn from(r: NonNegRational) -> Self {
        SemiringValue::Rat(r)
    }
}

/// Folds `add` over `values`. An empty input needs `semiring` to pick the zero.
pub fn sum<'a, I>(values: I, semiring: Option<SemiringId>) -> Result<SemiringValue, SemiringError>
where
    I: IntoIterator<Item = &'a SemiringValue>,
{
    let mut iter = values.into_iter();
    let mut acc = match (iter.next(), semiring) {
        (Some(first), Some(id)) if first.semiring() != id => {
            return Err(SemiringError::MixedSemiring(id, first.semiring()))
        }
        (Some(first), _) => first.clone(),
        (None, Some(id)) => return Ok(id.zero()),
        (None, None) => return Err(SemiringError::MissingSemiringId),
    };
    for v in iter {
        acc.accumulate(v)?;
    }
    Ok(acc)
}
