//! The module `||HZ||_n` of integers in `[-n, n]` whose signed sums exist
//! only while their total mass stays within `n`.
//!
//! [`dim_hzn`] is the closed form `ceil(log(2n + 1) / log 3)`. [`genset`]
//! builds an explicit generating set of that size whose elements sum to `n`
//! and certifies it with [`verify_genset`], an exhaustive walk over all
//! `3^|F|` sign vectors.

use num_bigint::BigUint;
use serde::Serialize;

use crate::divisor::ArakelovDivisor;
use crate::error::{Error, Result};
use crate::exact_arith::{ceil_log3_uint, floor_log3_uint, floor_rat};

pub const VERIFY_MAX_GENERATORS: usize = 24;
/// Largest `n` whose `2n + 1` coverage table the verifier will allocate.
pub const VERIFY_MAX_RANGE: u64 = 100_000_000;

/// Which branch of the construction produced a generating set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    /// `n` outside `E`: powers of three, plus `n - (3^m - 1)/2` if needed.
    Regular,
    /// `n = 1 + (3^m - 1)/2` with `m > 2`.
    EEllZero,
    /// `n = 3^l + (3^m - 1)/2` with `0 < l < m`.
    EEllPositive,
    /// `n = 2`: `{1, 2}` generates but sums to 3.
    SpecialN2,
    /// `n = 5`: `{1, 2, 3}` generates but sums to 6.
    SpecialN5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenSetReport {
    pub n: u64,
    /// Sorted, distinct.
    pub generators: Vec<i64>,
    pub cardinality: usize,
    pub sum: i64,
    /// Every `x` in `[-n, n]` is a signed sum of mass at most `n`.
    pub surjective: bool,
    /// No sign vector exceeded the mass bound, i.e. every signed sum exists.
    pub mass_ok: bool,
    /// Every `x` in `[-n, n]` has exactly one admissible representation.
    pub unique: bool,
    pub special_case: SpecialCase,
}

pub fn dim_hzn(n: u64) -> u32 {
    dim_hzn_big(&BigUint::from(n))
}

pub fn dim_hzn_big(n: &BigUint) -> u32 {
    ceil_log3_uint(&(n * 2u32 + 1u32))
}

fn pow3(k: u32) -> u64 {
    3u64.pow(k)
}

/// `Some((l, m))` when `n = 3^l + (3^m - 1)/2` with `0 <= l < m`.
pub fn in_e(n: u64) -> Option<(u32, u32)> {
    let mut m = 1u32;
    loop {
        let base = (3u128.pow(m) - 1) / 2;
        if base >= n as u128 {
            return None;
        }
        let rest = n as u128 - base;
        // 3^l < 3^m forces rest < 3^m.
        if rest < 3u128.pow(m) {
            let rest = rest as u64;
            let l = floor_log3_uint(&BigUint::from(rest));
            return (pow3(l) == rest).then_some((l, m));
        }
        m += 1;
    }
}

pub fn classify(n: u64) -> SpecialCase {
    match (n, in_e(n)) {
        (2, _) => SpecialCase::SpecialN2,
        (5, _) => SpecialCase::SpecialN5,
        (_, Some((0, _))) => SpecialCase::EEllZero,
        (_, Some(_)) => SpecialCase::EEllPositive,
        (_, None) => SpecialCase::Regular,
    }
}

/// `{3^i : 0 <= i < k}`.
fn powers_of_three(k: u32) -> Vec<u64> {
    (0..k).map(pow3).collect()
}

/// The explicit generating set for `n`, without verification.
pub fn construct_genset(n: u64) -> (Vec<u64>, SpecialCase) {
    assert!(n <= u64::MAX / 4, "n too large for the construction");
    let case = classify(n);
    let mut gens = match case {
        SpecialCase::SpecialN2 => vec![1, 2],
        SpecialCase::SpecialN5 => vec![1, 2, 3],
        SpecialCase::EEllZero => {
            let (_, m) = in_e(n).unwrap();
            let mut g = powers_of_three(m - 1);
            g.extend([2, pow3(m - 1) - 1]);
            g
        }
        SpecialCase::EEllPositive => {
            let (l, m) = in_e(n).unwrap();
            let mut g: Vec<u64> = powers_of_three(m)
                .into_iter()
                .filter(|&x| x != pow3(l))
                .collect();
            g.extend([pow3(l) - 1, pow3(l) + 1]);
            g
        }
        SpecialCase::Regular => {
            let m = floor_log3_uint(&BigUint::from(2 * n + 1));
            let mut g = powers_of_three(m);
            if pow3(m) < 2 * n + 1 {
                g.push(n - (pow3(m) - 1) / 2);
            }
            g
        }
    };
    gens.sort_unstable();
    (gens, case)
}

/// Builds the generating set for `n` and checks it exhaustively.
pub fn genset(n: u64) -> Result<GenSetReport> {
    let (gens, case) = construct_genset(n);
    let signed: Vec<i64> = gens.iter().map(|&g| g as i64).collect();
    let mut report = verify_genset(n, &signed)?;
    report.special_case = case;
    Ok(report)
}

struct Walk<'a> {
    gens: &'a [i64],
    n: i64,
    hits: Vec<u8>,
    pruned: u64,
}

impl Walk<'_> {
    fn run(&mut self, i: usize, sum: i64, mass: i64) {
        if i == self.gens.len() {
            let slot = &mut self.hits[(sum + self.n) as usize];
            *slot = slot.saturating_add(1);
            return;
        }
        let g = self.gens[i];
        self.run(i + 1, sum, mass);
        let remaining = (self.gens.len() - i - 1) as u32;
        for signed in [g, -g] {
            let mass = mass + g.abs();
            if mass > self.n {
                self.pruned += 3u64.pow(remaining);
            } else {
                self.run(i + 1, sum + signed, mass);
            }
        }
    }
}

/// Checks whether `gens` generates `||HZ||_n`: every `x` in `[-n, n]` must
/// be `sum a_f f` with `a in {-1, 0, 1}^F` and `sum |a_f f| <= n`. Negative
/// generators are allowed.
pub fn verify_genset(n: u64, gens: &[i64]) -> Result<GenSetReport> {
    if gens.len() > VERIFY_MAX_GENERATORS {
        return Err(Error::TooManyGenerators {
            size: gens.len(),
            limit: VERIFY_MAX_GENERATORS,
        });
    }
    if n > VERIFY_MAX_RANGE {
        return Err(Error::RangeTooLarge {
            n,
            limit: VERIFY_MAX_RANGE,
        });
    }
    let mut sorted = gens.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidGenerator {
                value: w[0].to_string(),
                reason: "repeated".into(),
            });
        }
    }
    for &g in &sorted {
        if g == 0 || g.unsigned_abs() > n {
            return Err(Error::InvalidGenerator {
                value: g.to_string(),
                reason: format!("must be nonzero with |f| <= {n}"),
            });
        }
    }

    let mut walk = Walk {
        gens: &sorted,
        n: n as i64,
        hits: vec![0; 2 * n as usize + 1],
        pruned: 0,
    };
    walk.run(0, 0, 0);
    let surjective = walk.hits.iter().all(|&h| h > 0);
    let unique = walk.hits.iter().all(|&h| h == 1);
    let mass_ok = walk.pruned == 0;

    Ok(GenSetReport {
        n,
        cardinality: sorted.len(),
        sum: sorted.iter().sum(),
        generators: sorted,
        surjective,
        mass_ok,
        unique,
        special_case: classify(n),
    })
}

/// `dim H^0(D) = dim ||HZ||_n` with `n = floor(exp(deg D))`.
pub fn dim_h0(d: &ArakelovDivisor) -> u32 {
    dim_hzn_big(&floor_rat(&d.exp_degree()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::PosRational;

    #[test]
    fn dim_hzn_examples() {
        assert_eq!(dim_hzn(0), 0);
        assert_eq!(dim_hzn(1), 1);
        assert_eq!(dim_hzn(4), 2);
        assert_eq!(dim_hzn(13), 3);
        assert_eq!(dim_hzn(40), 4);
        assert_eq!(dim_hzn(7), 3);
    }

    #[test]
    fn in_e_examples() {
        assert_eq!(in_e(7), Some((1, 2)));
        assert_eq!(in_e(3), None);
        assert_eq!(in_e(122), Some((0, 5)));
        assert_eq!(in_e(2), Some((0, 1)));
        assert_eq!(in_e(1), None);
        assert_eq!(in_e(607), Some((5, 6)));
    }

    #[test]
    fn genset_examples() {
        let r = genset(4).unwrap();
        assert_eq!(r.generators, vec![1, 3]);
        assert_eq!((r.sum, r.cardinality), (4, 2));
        assert!(r.surjective && r.mass_ok && r.unique);

        let r = genset(6).unwrap();
        assert_eq!(r.generators, vec![1, 2, 3]);
        assert_eq!((r.sum, r.cardinality), (6, 3));
        assert!(r.surjective && r.mass_ok);

        let r = genset(7).unwrap();
        assert_eq!(r.generators, vec![1, 2, 4]);
        assert_eq!(r.special_case, SpecialCase::EEllPositive);
        assert!(r.surjective && r.mass_ok);

        let r = genset(0).unwrap();
        assert!(r.generators.is_empty() && r.surjective);
    }

    #[test]
    fn genset_special_cases() {
        let r = genset(2).unwrap();
        assert_eq!(r.generators, vec![1, 2]);
        assert_eq!(r.special_case, SpecialCase::SpecialN2);
        assert!(r.surjective && r.sum > 2 && !r.mass_ok);

        let r = genset(5).unwrap();
        assert_eq!(r.generators, vec![1, 2, 3]);
        assert_eq!(r.special_case, SpecialCase::SpecialN5);
        assert!(r.surjective && r.sum > 5);
    }

    #[test]
    fn e_ell_zero_branch() {
        // 14 = 1 + 13, m = 3: {1, 3} plus {2, 8}.
        let r = genset(14).unwrap();
        assert_eq!(r.special_case, SpecialCase::EEllZero);
        assert_eq!(r.generators, vec![1, 2, 3, 8]);
        assert!(r.surjective && r.mass_ok && r.sum == 14);
    }

    #[test]
    fn verify_examples() {
        let r = verify_genset(4, &[1, 3]).unwrap();
        assert!(r.surjective && r.unique);

        let r = verify_genset(2, &[1, -1]).unwrap();
        assert!(r.surjective && r.mass_ok);

        let r = verify_genset(3, &[1]).unwrap();
        assert!(!r.surjective);
    }

    #[test]
    fn verify_rejects_bad_input() {
        let many: Vec<i64> = (1..=25).collect();
        assert!(matches!(
            verify_genset(1000, &many),
            Err(Error::TooManyGenerators { .. })
        ));
        assert!(verify_genset(3, &[0, 1]).is_err());
        assert!(verify_genset(3, &[4]).is_err());
        assert!(verify_genset(3, &[2, 2]).is_err());
        assert!(matches!(
            verify_genset(VERIFY_MAX_RANGE + 1, &[1]),
            Err(Error::RangeTooLarge { .. })
        ));
    }

    #[test]
    fn dim_h0_examples() {
        let q = |s: &str| s.parse::<PosRational>().unwrap();
        assert_eq!(dim_h0(&ArakelovDivisor::zero()), 1);
        assert_eq!(dim_h0(&ArakelovDivisor::archimedean(q("1/3"))), 0);
        assert_eq!(dim_h0(&ArakelovDivisor::archimedean(q("8/5"))), 1);
        assert_eq!(dim_h0(&ArakelovDivisor::canonical()), 0);
    }
}
