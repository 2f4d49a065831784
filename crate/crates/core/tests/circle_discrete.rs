//! The circle `R/mZ` sampled on `N` points, checked against the closed
//! formula for `dim H^1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use absrr::h0::dim_hzn;
use absrr::h1::{dim_h1, dim_u1};
use absrr::tolerance::{Ambient, FiniteToleranceModule, Weight};
use absrr::{ArakelovDivisor, PosRational};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `Z/N` standing for `R/mZ`: the point `d` sits at `m d / N`.
fn sampled_circle(n: u64, m: &BigRational, lambda: BigRational) -> FiniteToleranceModule {
    let cost = (0..n as i64)
        .map(|d| Weight::Finite(m * rat(d.min(n as i64 - d), n as i64)))
        .collect();
    FiniteToleranceModule::new(
        Ambient::Cyclic(vec![n]),
        vec![Weight::zero(); n as usize],
        BigRational::zero(),
        cost,
        lambda,
    )
    .unwrap()
}

// Tolerances sit halfway between grid points, so a ball of radius lambda
// holds exactly 2 lambda N / m samples and the counting bounds of the
// continuous and sampled circles agree.
#[test]
fn unit_circle_matches_formula() {
    for n in [27u64, 54, 81] {
        for j in 0..n / 2 {
            let lambda = rat(2 * j as i64 + 1, 2 * n as i64);
            let module = FiniteToleranceModule::circle(n, lambda.clone()).unwrap();
            let expected = dim_u1(&PosRational::try_from_rational(lambda.clone()).unwrap());
            assert_eq!(module.dim_bruteforce(8).unwrap() as u32, expected, "N={n} lambda={lambda}");
        }
    }
}

#[test]
fn scaled_circle_matches_dim_h1() {
    let finite_parts: [&[(u64, i64)]; 4] = [&[], &[(2, 1)], &[(3, -1)], &[(2, -1), (5, 1)]];
    let n = 54u64;
    for finite in finite_parts {
        let probe = ArakelovDivisor::new(finite.iter().copied(), PosRational::one()).unwrap();
        let m = probe.lattice_generator().into_rational();
        for j in 0..n / 2 {
            // exp(deg D) = lambda / m lands halfway between samples.
            let lambda = &m * rat(2 * j as i64 + 1, 2 * n as i64);
            let d = ArakelovDivisor::new(
                finite.iter().copied(),
                PosRational::try_from_rational(lambda.clone()).unwrap(),
            )
            .unwrap();
            let module = sampled_circle(n, &m, lambda);
            assert_eq!(module.dim_bruteforce(8).unwrap() as u32, dim_h1(&d), "{d}");
        }
    }
}

#[test]
fn dim_hzn_is_monotone_with_jumps_at_half_powers() {
    let mut prev = dim_hzn(0);
    assert_eq!(prev, 0);
    for n in 1..=100_000u64 {
        let cur = dim_hzn(n);
        // Jumps happen exactly when 2n + 1 passes a power of 3.
        let jump = is_pow3(2 * n - 1);
        assert!(cur == prev || (cur == prev + 1 && jump), "n={n}");
        prev = cur;
    }
}

/// True when `x` is a power of three.
fn is_pow3(mut x: u64) -> bool {
    while x.is_multiple_of(3) && x > 1 {
        x /= 3;
    }
    x == 1
}
