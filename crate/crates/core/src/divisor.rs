//! Arakelov divisors `D = sum a_p {p} + a {inf}` on the compactified `Spec Z`.
//!
//! The archimedean coefficient is carried as `lambda = e^a`, restricted to
//! positive rationals. With that restriction the degree is an exact rational
//! `exp(deg D) = lambda * prod p^(a_p)`, and every quantity that decides a
//! dimension is an exact comparison.
//!
//! The adelic set `O(D)` is never built. It is represented by its two
//! computable shadows: the lattice `L = m Z` of rationals allowed by the
//! finite places, and the archimedean bound `lambda`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{floor_rat, PosRational};
use crate::primes::is_prime;

/// Largest `exp(deg D)` for which [`h0_elements`] enumerates.
pub const H0_ENUMERATION_LIMIT: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArakelovDivisor {
    finite: BTreeMap<u64, i64>,
    lambda: PosRational,
}

/// A logarithmic quantity kept as its exponential.
#[derive(Clone, Debug, PartialEq)]
pub struct LogValue {
    pub multiplicative: PosRational,
    /// `ln(multiplicative)`; display only.
    pub approx: f64,
}

impl LogValue {
    pub fn new(multiplicative: PosRational) -> Self {
        let approx = multiplicative.ln();
        LogValue {
            multiplicative,
            approx,
        }
    }

    /// The value divided by `log 3`, as a float.
    pub fn over_log3(&self) -> f64 {
        self.approx / 3f64.ln()
    }
}

impl ArakelovDivisor {
    /// Validates that every key is prime and rejects repeated primes. Zero
    /// exponents are dropped.
    pub fn new(
        finite: impl IntoIterator<Item = (u64, i64)>,
        lambda: PosRational,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, e) in finite {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if map.insert(p, e).is_some() {
                return Err(Error::DuplicatePrime(p));
            }
        }
        map.retain(|_, e| *e != 0);
        Ok(ArakelovDivisor {
            finite: map,
            lambda,
        })
    }

    pub fn zero() -> Self {
        Self::archimedean(PosRational::one())
    }

    /// `a {inf}` with `e^a = lambda`.
    pub fn archimedean(lambda: PosRational) -> Self {
        ArakelovDivisor {
            finite: BTreeMap::new(),
            lambda,
        }
    }

    /// `K = -2 {2}`.
    pub fn canonical() -> Self {
        ArakelovDivisor {
            finite: BTreeMap::from([(2, -2)]),
            lambda: PosRational::one(),
        }
    }

    /// `div(q)`: `a_p = -v_p(q)` and `lambda = |q|`, so that the degree is
    /// zero and `O(D + div q) = q O(D)`.
    pub fn principal(q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroPrincipal);
        }
        let abs = q.abs();
        let mut finite = BTreeMap::new();
        for (p, e) in factor(abs.numer())? {
            finite.insert(p, -(e as i64));
        }
        for (p, e) in factor(abs.denom())? {
            finite.insert(p, e as i64);
        }
        Ok(ArakelovDivisor {
            finite,
            lambda: PosRational::try_from_rational(abs)?,
        })
    }

    pub fn finite_part(&self) -> &BTreeMap<u64, i64> {
        &self.finite
    }

    pub fn lambda(&self) -> &PosRational {
        &self.lambda
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.finite.get(&p).copied().unwrap_or(0)
    }

    pub fn is_archimedean(&self) -> bool {
        self.finite.is_empty()
    }

    /// `prod p^(a_p)`.
    fn finite_norm(&self) -> PosRational {
        self.finite
            .iter()
            .fold(PosRational::one(), |acc, (&p, &e)| {
                &acc * &PosRational::from_integer(p).powi(e)
            })
    }

    /// `exp(deg D) = lambda * prod p^(a_p)`.
    pub fn exp_degree(&self) -> PosRational {
        &self.lambda * &self.finite_norm()
    }

    pub fn degree(&self) -> LogValue {
        LogValue::new(self.exp_degree())
    }

    /// `D1 + D2` or `D1 - D2`.
    pub fn combine(&self, other: &Self, sign: Sign) -> Self {
        let mut finite = self.finite.clone();
        for (&p, &e) in &other.finite {
            let e = match sign {
                Sign::Plus => e,
                Sign::Minus => -e,
            };
            let slot = finite.entry(p).or_insert(0);
            *slot = slot.checked_add(e).expect("divisor exponent overflow");
        }
        finite.retain(|_, e| *e != 0);
        let lambda = match sign {
            Sign::Plus => &self.lambda * &other.lambda,
            Sign::Minus => &self.lambda / &other.lambda,
        };
        ArakelovDivisor { finite, lambda }
    }

    pub fn negate(&self) -> Self {
        Self::zero().combine(self, Sign::Minus)
    }

    /// The archimedean divisor linearly equivalent to `self`; it differs by
    /// `div(prod p^(-a_p))`.
    pub fn reduce(&self) -> Self {
        Self::archimedean(self.exp_degree())
    }

    /// `m` with `L = { q : |q|_p <= p^(a_p) for all p } = m Z`, i.e.
    /// `m = prod p^(-a_p)`.
    pub fn lattice_generator(&self) -> PosRational {
        self.finite_norm().recip()
    }

    /// The underlying set of `H^0(D)`: `{ q in m Z : |q| <= lambda }`, sorted.
    pub fn h0_elements(&self) -> Result<Vec<BigRational>> {
        let exp_deg = self.exp_degree();
        if exp_deg > PosRational::from_integer(H0_ENUMERATION_LIMIT) {
            return Err(Error::EnumerationTooLarge {
                count: self.h0_cardinality().to_string(),
                limit: 2 * H0_ENUMERATION_LIMIT + 1,
            });
        }
        let n = floor_rat(&exp_deg).to_i64().unwrap();
        let m = self.lattice_generator().into_rational();
        Ok((-n..=n)
            .map(|j| &m * BigRational::from_integer(BigInt::from(j)))
            .collect())
    }

    pub fn h0_cardinality(&self) -> BigInt {
        BigInt::from(floor_rat(&self.exp_degree())) * 2 + 1
    }
}

/// Trial division; numerator and denominator of a principal divisor must
/// fit in 64 bits.
fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut n = n.to_u64().ok_or(Error::GuardExceeded {
        what: "principal divisor numerator/denominator bits",
        value: n.bits(),
        limit: 64,
    })?;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let (e, rest) = crate::primes::split_power(n, p);
            out.push((p, e));
            n = rest;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

impl fmt::Display for ArakelovDivisor {
    /// `p1:e1,p2:e2;lambda=p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .finite
            .iter()
            .map(|(p, e)| format!("{p}:{e}"))
            .collect();
        write!(f, "{};lambda={}", parts.join(","), self.lambda)
    }
}

impl FromStr for ArakelovDivisor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::cli::parse_divisor(s)
    }
}

impl Serialize for ArakelovDivisor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Finite<'a>(&'a BTreeMap<u64, i64>);
        impl Serialize for Finite<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (p, e) in self.0 {
                    map.serialize_entry(&p.to_string(), e)?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("ArakelovDivisor", 2)?;
        st.serialize_field("finite", &Finite(&self.finite))?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ArakelovDivisor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(default)]
            finite: BTreeMap<String, i64>,
            lambda: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let lambda: PosRational = raw.lambda.parse().map_err(de::Error::custom)?;
        let finite = raw
            .finite
            .into_iter()
            .map(|(p, e)| {
                p.parse::<u64>()
                    .map(|p| (p, e))
                    .map_err(|_| de::Error::custom(format!("bad prime key {p:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ArakelovDivisor::new(finite, lambda).map_err(de::Error::custom)
    }
}
