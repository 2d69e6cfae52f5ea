//! Dyadic rationals `m * 2^-e` and interval enclosures with dyadic
//! endpoints.
//!
//! Dyadic numbers are closed under addition, multiplication, and halving,
//! which is exactly what endpoint arithmetic and bisection need. The
//! canonical form keeps `e >= 0` minimal, so equality and hashing are
//! structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;
use super::ExactError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exp: i64,
}

impl Dyadic {
    fn normalized(mut m: BigInt, mut e: i64) -> Self {
        if m.is_zero() {
            return Self { mantissa: m, exp: 0 };
        }
        if e > 0 {
            if let Some(tz) = m.trailing_zeros() {
                let red = tz.min(e as u64);
                if red > 0 {
                    m >>= red;
                    e -= red as i64;
                }
            }
        }
        if e < 0 {
            m <<= (-e) as u64;
            e = 0;
        }
        Self { mantissa: m, exp: e }
    }

    /// Value `m * 2^-e`.
    pub fn new(m: impl Into<BigInt>, e: i64) -> Self {
        Self::normalized(m.into(), e)
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::new(v, 0)
    }

    /// 2^k for any integer k.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            Self::new(BigInt::one() << k as u64, 0)
        } else {
            Self { mantissa: BigInt::one(), exp: -k }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn halve(&self) -> Self {
        Self::normalized(self.mantissa.clone(), self.exp + 1)
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), exp: self.exp }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), BigInt::one() << self.exp as u64)
            .expect("power of two denominator")
    }

    /// Exact conversion; `None` unless the denominator is a power of two.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz).is_one() {
            Some(Self::new(r.numer().clone(), tz as i64))
        } else {
            None
        }
    }

    /// Largest multiple of 2^-p that is <= r.
    pub fn floor_from_rational(r: &Rational, p: i64) -> Self {
        Self::new(r.floor_shift(p), p)
    }

    /// Smallest multiple of 2^-p that is >= r.
    pub fn ceil_from_rational(r: &Rational, p: i64) -> Self {
        let neg = -r;
        Self::new(-neg.floor_shift(p), p)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.mantissa << (e - self.exp) as u64;
        let b = &other.mantissa << (e - other.exp) as u64;
        a.cmp(&b)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.mantissa << (e - self.exp) as u64;
        let b = &rhs.mantissa << (e - rhs.exp) as u64;
        Dyadic::normalized(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.mantissa << (e - self.exp) as u64;
        let b = &rhs.mantissa << (e - rhs.exp) as u64;
        Dyadic::normalized(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::normalized(&self.mantissa * &rhs.mantissa, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa.clone(), exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^-{}", self.mantissa, self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Dyadic {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, ExactError> {
        let (m, e) = s
            .trim()
            .split_once("*2^-")
            .ok_or_else(|| ExactError::Parse(format!("expected m*2^-e, got {s:?}")))?;
        let mantissa: BigInt =
            m.trim().parse().map_err(|e| ExactError::Parse(format!("bad mantissa: {e}")))?;
        let exp: i64 =
            e.trim().parse().map_err(|e| ExactError::Parse(format!("bad exponent: {e}")))?;
        if exp < 0 {
            return Err(ExactError::Parse("negative exponent field".into()));
        }
        Ok(Self::new(mantissa, exp))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sentinel precision reported for exact (zero-width) intervals.
pub const EXACT_PRECISION: i64 = i64::MAX / 4;

/// Closed interval with dyadic endpoints. `precision` records the width
/// guarantee the producing operation was asked for: width <= 2^-precision.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
    #[serde(rename = "p")]
    precision: i64,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision: i64) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::InvalidInterval);
        }
        Ok(Self { lo, hi, precision })
    }

    pub fn point(d: Dyadic, precision: i64) -> Self {
        Self { lo: d.clone(), hi: d, precision }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn requested_precision(&self) -> i64 {
        self.precision
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// width <= 2^-p, decided exactly.
    pub fn width_within(&self, p: i64) -> bool {
        self.width() <= Dyadic::pow2(-p)
    }

    /// Largest p with width <= 2^-p (capped for exact points).
    pub fn fit_precision(&self) -> i64 {
        let w = self.width();
        if w.is_zero() {
            return EXACT_PRECISION;
        }
        // w = m * 2^-e with m >= 1: w <= 2^-p iff m <= 2^(e-p).
        let bits = w.mantissa().bits() as i64;
        let single_bit = w.mantissa().trailing_zeros().unwrap_or(0) as i64 == bits - 1;
        if single_bit {
            w.exp() - bits + 1
        } else {
            w.exp() - bits
        }
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).halve()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Endpointwise sum; the stated precision is the caller's claim.
    pub fn add(&self, other: &Self, precision: i64) -> Self {
        Self { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, precision }
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.midpoint().to_f64()
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]@{}", self.lo, self.hi, self.precision)
    }
}

/// Certified square root: returns an interval of width <= 2^-p containing
/// sqrt(y). Exact dyadic roots come back as zero-width points.
///
/// Bisection with exact rational comparison of midpoint squares against y;
/// the invariant lo^2 <= y <= hi^2 holds throughout.
pub fn sqrt_enclosure(y: &Rational, p: i64) -> DyadicInterval {
    assert!(!y.is_negative(), "sqrt of negative rational");
    if y.is_zero() {
        return DyadicInterval::point(Dyadic::zero(), p);
    }
    // Bracket by powers of two: find e with 4^e <= y < 4^(e+1).
    let mut e: i64 = 0;
    if *y >= Rational::one() {
        while Rational::pow2(2 * (e + 1)) <= *y {
            e += 1;
        }
    } else {
        while *y < Rational::pow2(2 * e) {
            e -= 1;
        }
    }
    let mut lo = Dyadic::pow2(e);
    let mut hi = Dyadic::pow2(e + 1);
    if lo.to_rational().square() == *y {
        return DyadicInterval::point(lo, p);
    }
    let target = Dyadic::pow2(-p);
    while &hi - &lo > target {
        let mid = (&lo + &hi).halve();
        match mid.to_rational().square().cmp_value(y) {
            Ordering::Equal => return DyadicInterval::point(mid, p),
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
        }
    }
    DyadicInterval::new(lo, hi, p).expect("bisection keeps lo <= hi")
}
