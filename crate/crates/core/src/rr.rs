//! The Riemann-Roch identity `dim H^0 - dim H^1 = ceil'(log_3(2 exp deg D)) - 1_L`
//! together with the duality `D <-> K - D`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::divisor::{ArakelovDivisor, Sign};
use crate::exact_arith::{ceil_log3, floor_rat, PosRational};
use crate::h0::{dim_h0, dim_hzn_big};
use crate::h1::dim_h1;

/// `ceil'(log_3 q)`: the ceiling for `q >= 1`, extended oddly below 1.
pub fn ceil_prime_log3(q: &PosRational) -> i64 {
    if q.numer() >= q.denom() {
        ceil_log3(q)
    } else {
        -ceil_log3(&q.recip())
    }
}

/// `1` when `3^k < t < 3^k + 1` for some `k >= 0`, with `t = 2 exp(deg D)`.
pub fn indicator_l(d: &ArakelovDivisor) -> u8 {
    indicator_l_value(&d.exp_degree().scale(2))
}

pub fn indicator_l_value(t: &PosRational) -> u8 {
    // Only k = ceil_log3(t) - 1 can satisfy 3^k < t <= 3^(k+1).
    let k = ceil_log3(t) - 1;
    if k < 0 {
        return 0;
    }
    let p = PosRational::pow3(k);
    let inside = p.as_rational() < t.as_rational()
        && t.as_rational() < &(p.as_rational() + BigRational::from_integer(BigInt::from(1)));
    u8::from(inside)
}

/// Float form of the same test: `log t` in `(k log 3, k log 3 + log(1 + 3^-k))`.
/// Returns `None` when `log t` lies within `margin` of an interval end.
pub fn in_l_additive(log_t: f64, margin: f64) -> Option<bool> {
    let ln3 = 3f64.ln();
    for k in 0..2000 {
        let lo = k as f64 * ln3;
        let hi = lo + (-(k as f64) * ln3).exp().ln_1p();
        if (log_t - lo).abs() < margin || (log_t - hi).abs() < margin {
            return None;
        }
        if log_t < lo {
            return Some(false);
        }
        if log_t < hi {
            return Some(true);
        }
    }
    Some(false)
}

pub fn euler_characteristic(d: &ArakelovDivisor) -> i64 {
    i64::from(dim_h0(d)) - i64::from(dim_h1(d))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RRReport {
    pub divisor: ArakelovDivisor,
    pub exp_deg: PosRational,
    pub deg_float: f64,
    pub h0: u32,
    pub h1: u32,
    pub euler: i64,
    pub rhs_ceil: i64,
    #[serde(rename = "in_L")]
    pub in_l: u8,
    #[serde(skip)]
    pub rhs: i64,
    pub consistent: bool,
}

/// Evaluates both sides of the identity by separate routes and compares.
pub fn rr_verify(d: &ArakelovDivisor) -> RRReport {
    let exp_deg = d.exp_degree();
    let h0 = dim_h0(d);
    let h1 = dim_h1(d);
    let euler = i64::from(h0) - i64::from(h1);
    let rhs_ceil = ceil_prime_log3(&exp_deg.scale(2));
    let in_l = indicator_l(d);
    let rhs = rhs_ceil - i64::from(in_l);
    RRReport {
        divisor: d.clone(),
        deg_float: exp_deg.ln(),
        exp_deg,
        h0,
        h1,
        euler,
        rhs_ceil,
        in_l,
        rhs,
        consistent: euler == rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SerreReport {
    pub divisor: ArakelovDivisor,
    pub exp_deg: PosRational,
    /// `exp(deg(K - D))`.
    pub dual_exp_deg: PosRational,
    /// `dim H^0(K - D)`.
    pub d1: u32,
    /// `dim ||HZ||_m` with `m = floor(1/(4 exp(deg D)))`.
    pub d2: u32,
    /// `exp(deg(K - D)) exp(deg D) = 1/4`.
    pub product_ok: bool,
    pub consistent: bool,
}

/// Compares `H^0(K - D)` with the characters of `H^1(D)` into `U(1)_{1/4}`.
pub fn serre_verify(d: &ArakelovDivisor) -> SerreReport {
    let lambda = d.exp_degree();
    let dual = ArakelovDivisor::canonical().combine(d, Sign::Minus);
    let dual_exp_deg = dual.exp_degree();
    let d1 = dim_h0(&dual);
    let d2 = dim_hzn_big(&floor_rat(&lambda.scale(4).recip()));
    let product_ok = (&dual_exp_deg * &lambda) == PosRational::new(1, 4).unwrap();
    SerreReport {
        divisor: d.clone(),
        exp_deg: lambda,
        dual_exp_deg,
        d1,
        d2,
        product_ok,
        consistent: product_ok && d1 == d2,
    }
}

/// Norm bound `mu / lambda` of the internal Hom from `||HR||_lambda` to
/// `||HR||_mu`.
pub fn hom_bound(lambda: &PosRational, mu: &PosRational) -> PosRational {
    mu / lambda
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LMeasure {
    pub terms: u32,
    pub sum: f64,
    /// Bound on the omitted terms, `sum_{k > K} 3^-k = 3^-K / 2`.
    pub tail_bound: f64,
}

/// Partial sum `sum_{k=0}^{K} ln(1 + 3^-k)` of the measure of `L`.
pub fn l_measure(k_max: u32) -> LMeasure {
    let sum = (0..=k_max)
        .map(|k| 3f64.powi(-(k as i32)).ln_1p())
        .sum();
    LMeasure {
        terms: k_max,
        sum,
        tail_bound: 3f64.powi(-(k_max as i32)) / 2.0,
    }
}
