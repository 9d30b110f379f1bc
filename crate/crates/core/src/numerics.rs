//! Exact rationals and rational-endpoint intervals.
//!
//! Nothing in here goes through floating point. Square roots only appear as
//! certified enclosures, and comparisons of the form `|a|` vs `|b|^{1/2}` are
//! decided by squaring.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision fraction, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for `num / den` with machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-bits`
pub fn dyadic_unit(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Compares `a^2` with `|b|`, i.e. `|a|` with `|b|^{1/2}`, exactly.
pub fn cmp_abs_sq(a: &Rational, b: &Rational) -> Ordering {
    (a * a).cmp(&b.abs())
}

/// Returns `Some(r)` with `r >= 0` and `r^2 = x` when `x` is the square of a
/// rational.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Smallest `bits` with `2^-bits <= width`.
fn bits_for_width(width: &Rational) -> u32 {
    let mut bits = 0;
    let mut unit = Rational::one();
    while &unit > width {
        unit /= int(2);
        bits += 1;
    }
    bits
}

/// Encloses `sqrt(x)` in an interval of width at most `width`. Perfect
/// squares come back as a point interval.
pub fn sqrt_enclose(x: &Rational, width: &Rational) -> Result<IntervalR> {
    if x.is_negative() {
        return Err(Error::NegativeInput(x.clone()));
    }
    if !width.is_positive() {
        return Err(Error::InvalidWidth(width.clone()));
    }
    if let Some(r) = exact_sqrt(x) {
        return Ok(IntervalR::point(r));
    }
    let bits = bits_for_width(width);
    // floor(sqrt(floor(y))) == floor(sqrt(y)) for y >= 0
    let scaled = (x.numer() << (2 * bits as usize)).div_floor(x.denom());
    let root = scaled.sqrt();
    let lo = Rational::new(root.clone(), BigInt::one() << bits);
    let hi = Rational::new(root + 1, BigInt::one() << bits);
    Ok(IntervalR { lo, hi })
}

/// Encloses `num / sqrt(denom_sq)`.
pub fn quotient_enclose(
    num: &Rational,
    denom_sq: &Rational,
    width: &Rational,
) -> Result<IntervalR> {
    if denom_sq.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if denom_sq.is_negative() {
        return Err(Error::NegativeInput(denom_sq.clone()));
    }
    let magnitude = sqrt_enclose(&(num * num / denom_sq), width)?;
    Ok(if num.is_negative() {
        -magnitude
    } else {
        magnitude
    })
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalR {
    lo: Rational,
    hi: Rational,
}

impl IntervalR {
    pub fn new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    /// Hull of two possibly unordered endpoints.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_point(&self) -> Option<&Rational> {
        self.is_point().then_some(&self.lo)
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::spanning(&self.lo * k, &self.hi * k)
    }

    pub fn shift(&self, k: &Rational) -> Self {
        Self {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            Self {
                lo: Rational::zero(),
                hi: self.hi.clone().max(-self.lo.clone()),
            }
        }
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        Self {
            lo: &a.lo * &a.lo,
            hi: &a.hi * &a.hi,
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// Square root of a non-negative interval, each endpoint enclosed to
    /// `width`.
    pub fn sqrt(&self, width: &Rational) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::NegativeInput(self.lo.clone()));
        }
        let lo = sqrt_enclose(&self.lo, width)?.lo;
        let hi = sqrt_enclose(&self.hi, width)?.hi;
        Ok(Self { lo, hi })
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Rounds the endpoints outward onto the grid `2^-bits Z`.
    pub fn round_outward(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let snap = |x: &Rational, up: bool| {
            let scaled = x * Rational::from_integer(scale.clone());
            let n = if up { scaled.ceil() } else { scaled.floor() };
            Rational::new(n.to_integer(), scale.clone())
        };
        Self {
            lo: snap(&self.lo, false),
            hi: snap(&self.hi, true),
        }
    }

    /// Decides `self > x`, `self < x`, or neither.
    pub fn cmp_rational(&self, x: &Rational) -> Option<Ordering> {
        if &self.lo > x {
            Some(Ordering::Greater)
        } else if &self.hi < x {
            Some(Ordering::Less)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl Neg for IntervalR {
    type Output = IntervalR;
    fn neg(self) -> IntervalR {
        IntervalR {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for &IntervalR {
    type Output = IntervalR;
    fn add(self, rhs: &IntervalR) -> IntervalR {
        IntervalR {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &IntervalR {
    type Output = IntervalR;
    fn sub(self, rhs: &IntervalR) -> IntervalR {
        IntervalR {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &IntervalR {
    type Output = IntervalR;
    fn mul(self, rhs: &IntervalR) -> IntervalR {
        if let Some(k) = rhs.as_point() {
            return self.scale(k);
        }
        if let Some(k) = self.as_point() {
            return rhs.scale(k);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        IntervalR { lo, hi }
    }
}

impl From<Rational> for IntervalR {
    fn from(x: Rational) -> Self {
        IntervalR::point(x)
    }
}

impl fmt::Debug for IntervalR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for IntervalR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for IntervalR {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("IntervalR", 2)?;
        s.serialize_field("lo", &self.lo.to_string())?;
        s.serialize_field("hi", &self.hi.to_string())?;
        s.end()
    }
}

/// Parses `p/q`, integers and plain decimals (`-0.125`, `3.`) into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a rational literal: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if (whole.is_empty() && frac.is_empty())
        || !whole
            .chars()
            .chain(frac.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let n = BigInt::from_str(&digits).map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
/// Display only.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let a = x.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let (whole, frac) = scaled.div_rem(&scale);
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    let frac = frac.to_str_radix(10);
    format!("{sign}{whole}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Nearest `f64`, for plotting only.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn sign_of(x: &Rational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
