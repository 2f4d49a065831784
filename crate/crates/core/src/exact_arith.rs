//! Exact positive rationals and integer-only `log_3` comparisons.
//!
//! Nothing here takes a floating-point logarithm to reach a decision. The
//! `ln` helpers exist for display columns only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A strictly positive rational number, always stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosRational(BigRational);

impl PosRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let (numer, denom) = (numer.into(), denom.into());
        if denom.is_zero() {
            return Err(Error::RationalParse {
                literal: format!("{numer}/{denom}"),
                reason: "zero denominator".into(),
            });
        }
        Self::try_from_rational(BigRational::new(numer, denom))
    }

    pub fn try_from_rational(q: BigRational) -> Result<Self> {
        if q.is_positive() {
            Ok(PosRational(q))
        } else {
            Err(Error::NonPositive(q.to_string()))
        }
    }

    /// Panics on zero; meant for literals.
    pub fn from_integer(n: u64) -> Self {
        assert!(n > 0, "PosRational::from_integer(0)");
        PosRational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn one() -> Self {
        PosRational(BigRational::one())
    }

    /// `3^k` for any signed exponent.
    pub fn pow3(k: i64) -> Self {
        let p = BigInt::from(pow3(k.unsigned_abs() as u32));
        if k >= 0 {
            PosRational(BigRational::from_integer(p))
        } else {
            PosRational(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Self {
        PosRational(self.0.recip())
    }

    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.0.recip() } else { self.0.clone() };
        let e = u32::try_from(e.unsigned_abs()).expect("exponent out of range");
        PosRational(num_traits::pow::Pow::pow(&base, e))
    }

    pub fn scale(&self, n: u64) -> Self {
        assert!(n > 0);
        PosRational(&self.0 * BigRational::from_integer(BigInt::from(n)))
    }

    /// Natural logarithm as a float, for display.
    pub fn ln(&self) -> f64 {
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.0)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Canonical `p/q` (or `p`) rendering of any rational.
pub fn format_rational(q: &BigRational) -> String {
    struct D<'a>(&'a BigRational);
    impl fmt::Display for D<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_rational(f, self.0)
        }
    }
    D(q).to_string()
}

impl FromStr for PosRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('-') {
            return Err(Error::RationalParse {
                literal: s.to_string(),
                reason: "a positive rational cannot carry a sign".into(),
            });
        }
        Self::try_from_rational(parse_rational(s)?)
    }
}

impl serde::Serialize for PosRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn serialize_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// Serializes a list of rationals as canonical strings.
pub fn serialize_rationals<S: serde::Serializer>(
    qs: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(format_rational))
}

impl TryFrom<BigRational> for PosRational {
    type Error = Error;

    fn try_from(q: BigRational) -> Result<Self> {
        Self::try_from_rational(q)
    }
}

impl<'a> Mul<&'a PosRational> for &'a PosRational {
    type Output = PosRational;
    fn mul(self, rhs: &PosRational) -> PosRational {
        PosRational(&self.0 * &rhs.0)
    }
}

impl Mul for PosRational {
    type Output = PosRational;
    fn mul(self, rhs: PosRational) -> PosRational {
        PosRational(self.0 * rhs.0)
    }
}

impl<'a> Div<&'a PosRational> for &'a PosRational {
    type Output = PosRational;
    fn div(self, rhs: &PosRational) -> PosRational {
        PosRational(&self.0 / &rhs.0)
    }
}

impl Div for PosRational {
    type Output = PosRational;
    fn div(self, rhs: PosRational) -> PosRational {
        PosRational(self.0 / rhs.0)
    }
}

/// Parses `"p/q"`, `"p"`, optionally with a leading `-`. Digits only.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = |reason: &str| Error::RationalParse {
        literal: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (p, q) = match body.split_once('/') {
        Some((p, q)) => (p, q),
        None => (body, "1"),
    };
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    if !digits(p) || !digits(q) {
        return Err(err("expected decimal digits in the form p or p/q"));
    }
    let p = BigInt::parse_bytes(p.as_bytes(), 10).ok_or_else(|| err("bad numerator"))?;
    let q = BigInt::parse_bytes(q.as_bytes(), 10).ok_or_else(|| err("bad denominator"))?;
    if q.is_zero() {
        return Err(err("zero denominator"));
    }
    let r = BigRational::new(p, q);
    Ok(if negative { -r } else { r })
}

pub fn pow3(k: u32) -> BigUint {
    num_traits::pow::Pow::pow(BigUint::from(3u32), k)
}

/// Smallest `k >= 0` with `3^k >= n`. `n = 0` gives 0.
pub fn ceil_log3_uint(n: &BigUint) -> u32 {
    let mut k = 0;
    let mut p = BigUint::one();
    while &p < n {
        p *= 3u32;
        k += 1;
    }
    k
}

/// Largest `j >= 0` with `3^j <= n`, for `n >= 1`.
pub fn floor_log3_uint(n: &BigUint) -> u32 {
    assert!(!n.is_zero(), "floor_log3 of zero");
    let mut j = 0;
    let mut p = BigUint::from(3u32);
    while &p <= n {
        p *= 3u32;
        j += 1;
    }
    j
}

/// The unique `k` with `3^(k-1) < q <= 3^k`.
pub fn ceil_log3(q: &PosRational) -> i64 {
    if q.numer() >= q.denom() {
        // 3^k is an integer, so 3^k >= q iff 3^k >= ceil(q).
        let c = q.numer().div_ceil(q.denom());
        i64::from(ceil_log3_uint(&to_uint(&c)))
    } else {
        // 3^-j >= q iff 3^j <= 1/q iff 3^j <= floor(1/q).
        let f = q.denom() / q.numer();
        -i64::from(floor_log3_uint(&to_uint(&f)))
    }
}

/// Compares `3^k` with `q` exactly.
pub fn cmp_pow3(k: i64, q: &PosRational) -> Ordering {
    let p = BigInt::from(pow3(k.unsigned_abs() as u32));
    if k >= 0 {
        (p * q.denom()).cmp(q.numer())
    } else {
        q.denom().cmp(&(p * q.numer()))
    }
}

pub fn floor_rat(q: &PosRational) -> BigUint {
    to_uint(&(q.numer() / q.denom()))
}

fn to_uint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("non-negative integer")
}

pub(crate) fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::NAN).abs().ln();
    }
    let shift = bits - 64;
    let top = (x.magnitude() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
