//! The circle modules `U(1)_lambda` (the circle `R/Z` where two points are
//! related when their distance is at most `lambda`) and `dim H^1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::divisor::ArakelovDivisor;
use crate::error::{Error, Result};
use crate::exact_arith::{ceil_log3, serialize_rationals, PosRational};

pub const COVER_MAX_GENERATORS: usize = 16;

/// The generating set `F(m) = {1/3, ..., 1/3^m}` of `U(1)_lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleGenSet {
    pub lambda: PosRational,
    pub m: u32,
    #[serde(serialize_with = "serialize_rationals")]
    pub generators: Vec<BigRational>,
}

/// Outcome of [`check_circle_cover`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    /// Distinct generators are more than `lambda` apart.
    pub separated: bool,
    /// The closed `lambda`-balls around all signed sums cover the circle.
    pub covers: bool,
    /// Number of distinct signed sums mod 1.
    pub points: usize,
    /// Largest circular gap between consecutive points.
    #[serde(serialize_with = "crate::exact_arith::serialize_rational")]
    pub max_gap: BigRational,
}

impl CoverReport {
    pub fn verified(&self) -> bool {
        self.separated && self.covers
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

pub fn dim_u1(lambda: &PosRational) -> u32 {
    if lambda.as_rational() >= &half() {
        return 0;
    }
    let inv = (lambda.scale(2)).recip();
    ceil_log3(&inv) as u32
}

pub fn circle_genset(lambda: &PosRational) -> CircleGenSet {
    let m = dim_u1(lambda);
    let generators = (1..=m)
        .map(|i| PosRational::pow3(-i64::from(i)).into_rational())
        .collect();
    CircleGenSet {
        lambda: lambda.clone(),
        m,
        generators,
    }
}

/// `dim H^1(D) = dim U(1)_lambda` with `lambda = exp(deg D)`.
pub fn dim_h1(d: &ArakelovDivisor) -> u32 {
    dim_u1(&d.exp_degree())
}

/// Fractional part in `[0, 1)`.
fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Circle distance `min(|x - y| mod 1, 1 - ...)`.
pub fn circle_distance(x: &BigRational, y: &BigRational) -> BigRational {
    let d = frac(&(x - y));
    let other = BigRational::one() - &d;
    d.min(other)
}

pub fn verify_circle_cover(lambda: &PosRational, gens: &[BigRational]) -> Result<bool> {
    Ok(check_circle_cover(lambda, gens)?.verified())
}

/// Decides whether `gens` generates `U(1)_lambda`: generators pairwise more
/// than `lambda` apart, and every consecutive gap between the sorted points
/// `sum a_f f mod 1` (`a` in `{-1, 0, 1}^F`) at most `2 lambda`.
pub fn check_circle_cover(lambda: &PosRational, gens: &[BigRational]) -> Result<CoverReport> {
    if gens.len() > COVER_MAX_GENERATORS {
        return Err(Error::TooManyGenerators {
            size: gens.len(),
            limit: COVER_MAX_GENERATORS,
        });
    }
    let reduced: Vec<BigRational> = gens.iter().map(frac).collect();
    let lam = lambda.as_rational();
    let mut separated = true;
    for (i, x) in reduced.iter().enumerate() {
        for y in &reduced[i + 1..] {
            if x == y {
                return Err(Error::InvalidGenerator {
                    value: crate::exact_arith::format_rational(y),
                    reason: "generators must be distinct mod 1".into(),
                });
            }
            if &circle_distance(x, y) <= lam {
                separated = false;
            }
        }
    }

    // Work with integer residues over a common denominator.
    let denom = reduced
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let modulus = denom
        .to_u64()
        .filter(|&d| d < 1 << 62)
        .ok_or(Error::GuardExceeded {
            what: "common denominator of circle generators",
            value: u64::MAX,
            limit: 1 << 62,
        })?;
    let residues: Vec<u64> = reduced
        .iter()
        .map(|q| (q.numer() * (&denom / q.denom())).to_u64().unwrap())
        .collect();

    let mut points = vec![0u64];
    for &r in &residues {
        let mut next = Vec::with_capacity(points.len() * 3);
        for &p in &points {
            next.push(p);
            next.push((p + r) % modulus);
            next.push((p + modulus - r) % modulus);
        }
        next.sort_unstable();
        next.dedup();
        points = next;
    }

    let wrap = points[0] + modulus - points[points.len() - 1];
    let max_gap_int = points
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(wrap))
        .max()
        .unwrap();
    let max_gap = BigRational::new(BigInt::from(max_gap_int), denom);
    let covers = max_gap <= lam * BigInt::from(2);

    Ok(CoverReport {
        separated,
        covers,
        points: points.len(),
        max_gap,
    })
}

/// `2 lambda 3^k >= 1`, the counting bound any cover of size `k` satisfies.
pub fn counting_bound_holds(lambda: &PosRational, k: u32) -> bool {
    let lhs = lambda.scale(2) * PosRational::pow3(i64::from(k));
    lhs.as_rational() >= &BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::parse_rational;

    fn q(s: &str) -> PosRational {
        s.parse().unwrap()
    }

    fn qs(items: &[&str]) -> Vec<BigRational> {
        items.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn dim_u1_examples() {
        assert_eq!(dim_u1(&q("1/2")), 0);
        assert_eq!(dim_u1(&q("3")), 0);
        assert_eq!(dim_u1(&q("1/6")), 1);
        assert_eq!(dim_u1(&q("1/4")), 1);
        assert_eq!(dim_u1(&q("1/18")), 2);
        assert_eq!(dim_u1(&q("1/12")), 2);
    }

    #[test]
    fn genset_examples() {
        assert_eq!(circle_genset(&q("1/6")).generators, qs(&["1/3"]));
        assert_eq!(circle_genset(&q("1/18")).generators, qs(&["1/3", "1/9"]));
        let g = circle_genset(&q("1/4"));
        assert_eq!((g.m, g.generators.clone()), (1, qs(&["1/3"])));
        let g = circle_genset(&q("1/2"));
        assert!(g.generators.is_empty() && g.m == 0);
    }

    #[test]
    fn cover_examples() {
        assert!(verify_circle_cover(&q("1/6"), &qs(&["1/3"])).unwrap());
        assert!(!verify_circle_cover(&q("1/6"), &qs(&["1/2"])).unwrap());
        assert!(verify_circle_cover(&q("1/2"), &[]).unwrap());
        assert!(!verify_circle_cover(&q("1/7"), &qs(&["1/3"])).unwrap());
        let r = check_circle_cover(&q("1/6"), &qs(&["1/3"])).unwrap();
        assert_eq!((r.points, r.max_gap.clone()), (3, parse_rational("1/3").unwrap()));
    }

    #[test]
    fn separation_is_enforced() {
        // {1/3, 1/9} covers at 1/18 but 1/3 and 1/9 are 2/9 apart.
        let r = check_circle_cover(&q("1/4"), &qs(&["1/3", "1/9"])).unwrap();
        assert!(r.covers && !r.separated);
    }

    #[test]
    fn cover_rejects_bad_input() {
        let many: Vec<BigRational> = (1..=17)
            .map(|i| BigRational::new(BigInt::one(), BigInt::from(i + 1)))
            .collect();
        assert!(matches!(
            verify_circle_cover(&q("1/100"), &many),
            Err(Error::TooManyGenerators { .. })
        ));
        assert!(verify_circle_cover(&q("1/10"), &qs(&["1/3", "4/3"])).is_err());
    }

    #[test]
    fn dim_h1_examples() {
        assert_eq!(dim_h1(&ArakelovDivisor::zero()), 0);
        assert_eq!(dim_h1(&ArakelovDivisor::canonical()), 1);
        assert_eq!(dim_h1(&ArakelovDivisor::archimedean(q("1/12"))), 2);
    }

    #[test]
    fn counting_bound() {
        assert!(counting_bound_holds(&q("1/6"), 1));
        assert!(!counting_bound_holds(&q("1/7"), 1));
    }
}
