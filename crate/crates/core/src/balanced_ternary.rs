//! Balanced ternary numerals.
//!
//! Every integer is uniquely a finite sum `sum a_i 3^i` with digits
//! `a_i in {-1, 0, 1}`. Digits are stored least-significant first and the
//! representation never carries a trailing zero, so value equality is
//! representation equality.
//!
//! Addition is plain carry propagation. On integers this agrees with Witt
//! vector addition over `F_3` with Teichmuller digits, which is why the digit
//! set is `{-1, 0, 1}` and not `{0, 1, 2}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trit {
    Neg,
    Zero,
    Pos,
}

impl Trit {
    pub fn value(self) -> i8 {
        match self {
            Trit::Neg => -1,
            Trit::Zero => 0,
            Trit::Pos => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Trit> {
        match v {
            -1 => Some(Trit::Neg),
            0 => Some(Trit::Zero),
            1 => Some(Trit::Pos),
            _ => None,
        }
    }

    /// `T`, `0`, `1`.
    pub fn symbol(self) -> char {
        match self {
            Trit::Neg => 'T',
            Trit::Zero => '0',
            Trit::Pos => '1',
        }
    }

    fn negate(self) -> Trit {
        match self {
            Trit::Neg => Trit::Pos,
            Trit::Zero => Trit::Zero,
            Trit::Pos => Trit::Neg,
        }
    }
}

/// A canonical balanced ternary numeral. The empty digit vector is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BalancedTernary {
    digits: Vec<Trit>,
}

/// Splits a sum in `-4..=4` into a balanced digit and a carry.
fn balance(s: i64) -> (Trit, i64) {
    let d = (s + 1).rem_euclid(3) - 1;
    (Trit::from_value(d).unwrap(), (s - d) / 3)
}

impl BalancedTernary {
    pub fn zero() -> Self {
        Self::default()
    }

    fn from_trits(mut digits: Vec<Trit>) -> Self {
        while digits.last() == Some(&Trit::Zero) {
            digits.pop();
        }
        BalancedTernary { digits }
    }

    /// Builds a numeral from raw least-significant-first digits, rejecting
    /// anything outside `{-1, 0, 1}`.
    pub fn from_digits(digits: &[i64]) -> Result<Self> {
        let trits = digits
            .iter()
            .enumerate()
            .map(|(index, &digit)| {
                Trit::from_value(digit).ok_or(Error::InvalidDigit { index, digit })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_trits(trits))
    }

    pub fn encode(n: &BigInt) -> Self {
        if let Some(small) = n.to_i128() {
            return Self::encode_i128(small);
        }
        let three = BigInt::from(3);
        let mut n = n.clone();
        let mut digits = Vec::new();
        while !n.is_zero() {
            let (q, r) = n.div_mod_floor(&three);
            let (d, carry) = balance(r.to_i64().unwrap());
            digits.push(d);
            n = q + carry;
        }
        Self::from_trits(digits)
    }

    fn encode_i128(mut n: i128) -> Self {
        let mut digits = Vec::new();
        while n != 0 {
            let (d, carry) = balance(n.rem_euclid(3) as i64);
            digits.push(d);
            n = n.div_euclid(3) + carry as i128;
        }
        Self::from_trits(digits)
    }

    pub fn decode(&self) -> BigInt {
        if self.digits.len() <= 70 {
            // 3^70 < 2^111, so the fold stays within i128.
            let v = self
                .digits
                .iter()
                .rev()
                .fold(0i128, |acc, d| acc * 3 + d.value() as i128);
            return BigInt::from(v);
        }
        self.digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, d| acc * 3 + d.value())
    }

    pub fn digits(&self) -> &[Trit] {
        &self.digits
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        let mut out = Vec::with_capacity(len + 1);
        let mut carry = 0i64;
        for i in 0..len {
            let a = self.digits.get(i).map_or(0, |d| d.value() as i64);
            let b = other.digits.get(i).map_or(0, |d| d.value() as i64);
            let (d, c) = balance(a + b + carry);
            debug_assert!((-1..=1).contains(&c));
            out.push(d);
            carry = c;
        }
        if carry != 0 {
            out.push(Trit::from_value(carry).unwrap());
        }
        Self::from_trits(out)
    }

    pub fn negate(&self) -> Self {
        BalancedTernary {
            digits: self.digits.iter().map(|d| d.negate()).collect(),
        }
    }

    /// Compares at the highest index where the zero-padded digit vectors
    /// differ. This agrees with integer order.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let len = self.len().max(other.len());
        for i in (0..len).rev() {
            let a = self.digits.get(i).copied().unwrap_or(Trit::Zero);
            let b = other.digits.get(i).copied().unwrap_or(Trit::Zero);
            match a.value().cmp(&b.value()) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// `sum |a_i| 3^i`, the mass of the signed sum the digits describe.
    pub fn mass(&self) -> BigInt {
        self.digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, d| acc * 3 + d.value().abs())
    }
}

/// Decodes raw digits, rejecting values outside `{-1, 0, 1}`.
pub fn decode_digits(digits: &[i64]) -> Result<BigInt> {
    BalancedTernary::from_digits(digits).map(|b| b.decode())
}

impl From<i64> for BalancedTernary {
    fn from(n: i64) -> Self {
        Self::encode_i128(n as i128)
    }
}

impl fmt::Display for BalancedTernary {
    /// Most-significant digit first, `T` for -1; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        let s: String = self.digits.iter().rev().map(|d| d.symbol()).collect();
        f.write_str(&s)
    }
}

impl FromStr for BalancedTernary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::NumeralParse(s.to_string()));
        }
        let digits = s
            .chars()
            .rev()
            .map(|c| match c {
                'T' | 't' => Ok(Trit::Neg),
                '0' => Ok(Trit::Zero),
                '1' => Ok(Trit::Pos),
                _ => Err(Error::NumeralParse(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_trits(digits))
    }
}

/// Integer part plus the first `m` fractional digits of a rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryExpansion {
    pub integer: BalancedTernary,
    /// `fraction[j - 1]` is the coefficient of `3^-j`.
    pub fraction: Vec<Trit>,
}

impl TernaryExpansion {
    pub fn value(&self) -> BigRational {
        let mut v = BigRational::from_integer(self.integer.decode());
        let mut unit = BigRational::one();
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        for d in &self.fraction {
            unit *= &third;
            v += &unit * BigRational::from_integer(BigInt::from(d.value()));
        }
        v
    }
}

/// Balanced ternary expansion of `x` through digit index `-m`.
///
/// After choosing the digit of `3^-j` the remainder lies in
/// `(-3^-j / 2, 3^-j / 2]`. Each step therefore has exactly one admissible
/// digit, and truncation is rounding: the remainder never exceeds half a
/// unit of the last kept digit.
pub fn expand(x: &BigRational, m: u32) -> TernaryExpansion {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let integer = (x - &half).ceil().to_integer();
    let mut rem = x - BigRational::from_integer(integer.clone());
    let mut h = half;
    let mut fraction = Vec::with_capacity(m as usize);
    for _ in 0..m {
        h /= BigInt::from(3);
        let unit = &h + &h;
        let d = if rem > h {
            rem -= &unit;
            Trit::Pos
        } else if rem <= -&h {
            rem += &unit;
            Trit::Neg
        } else {
            Trit::Zero
        };
        fraction.push(d);
    }
    debug_assert!(rem.abs() <= h);
    TernaryExpansion {
        integer: BalancedTernary::encode(&integer),
        fraction,
    }
}

/// The partial sum of [`expand`], a multiple of `3^-m` within `3^-m / 2`
/// of `x`.
pub fn truncate_expand(x: &BigRational, m: u32) -> BigRational {
    expand(x, m).value()
}
