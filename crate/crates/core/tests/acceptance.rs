//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use absrr::balanced_ternary::{truncate_expand, BalancedTernary};
use absrr::cli::{divisor_grid, exceptional_e, GridSpec};
use absrr::h0::{dim_hzn, genset};
use absrr::h1::{check_circle_cover, circle_genset, counting_bound_holds, dim_u1};
use absrr::rr::{l_measure, rr_verify, serre_verify};
use absrr::tolerance::{oracle_dim_hzn, pullback, pullback_family, MAX_CARD};
use absrr::{ArakelovDivisor, PosRational};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_h0() -> Check {
    for n in 0..=50u64 {
        let oracle = oracle_dim_hzn(n).map_err(|e| format!("n={n}: {e}"))?;
        ensure(oracle as u32 == dim_hzn(n), || {
            format!("n={n}: formula {} oracle {oracle}", dim_hzn(n))
        })?;
    }
    Ok("51 values agree".into())
}

fn genset_construction() -> Check {
    let bad: Vec<String> = (0..=10_000u64)
        .into_par_iter()
        .filter(|n| !matches!(n, 2 | 5))
        .filter_map(|n| match genset(n) {
            Ok(r) if r.surjective
                && r.sum == n as i64
                && r.cardinality as u32 == dim_hzn(n) => None,
            Ok(r) => Some(format!("n={n}: {:?}", r.generators)),
            Err(e) => Some(format!("n={n}: {e}")),
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} failures, first {}", bad.len(), bad[0]))?;
    Ok("9999 sets verified".into())
}

fn exceptional_set() -> Check {
    let expected = [
        2u64, 5, 7, 14, 16, 22, 41, 43, 49, 67, 122, 124, 130, 148, 202, 365, 367, 373, 391, 445,
        607,
    ];
    let got: Vec<u64> = exceptional_e(610).into_iter().map(|(n, _, _)| n).collect();
    ensure(got == expected, || format!("got {got:?}"))?;
    Ok(format!("{} values", got.len()))
}

/// Enumerates every sign vector on `1, 3, ..., 3^(k-1)` directly.
fn theta_bijection() -> Check {
    for k in 0..=10u32 {
        let n = (3i64.pow(k) - 1) / 2;
        let mut hit = vec![false; (2 * n + 1) as usize];
        for code in 0..3i64.pow(k) {
            let (mut c, mut value, mut mass) = (code, 0i64, 0i64);
            for j in 0..k {
                let alpha = c % 3 - 1;
                c /= 3;
                value += alpha * 3i64.pow(j);
                mass += alpha.abs() * 3i64.pow(j);
            }
            ensure(mass <= n, || format!("k={k}: mass {mass} > {n}"))?;
            let slot = &mut hit[(value + n) as usize];
            ensure(!*slot, || format!("k={k}: {value} hit twice"))?;
            *slot = true;
        }
        ensure(hit.iter().all(|&h| h), || format!("k={k}: not onto"))?;
    }
    Ok("k <= 10 bijective".into())
}

fn circle_dimension() -> Check {
    let r = |p, q| PosRational::new(p, q).unwrap();
    let mut refs = vec![(r(1, 2), 0), (r(1, 6), 1), (r(1, 4), 1)];
    for m in 0..=8u32 {
        refs.push((r(1, 2 * 3u64.pow(m)), m));
    }
    for (lambda, want) in &refs {
        ensure(dim_u1(lambda) == *want, || {
            format!("lambda={lambda}: {} != {want}", dim_u1(lambda))
        })?;
    }
    let mut lambdas: Vec<PosRational> = refs.into_iter().map(|(l, _)| l).collect();
    for q in 1..=400u64 {
        for p in 1..=q.min(12) {
            lambdas.push(r(p, q));
        }
    }
    let mut covers = 0;
    for lambda in &lambdas {
        let g = circle_genset(lambda);
        let report = check_circle_cover(lambda, &g.generators).map_err(|e| format!("{lambda}: {e}"))?;
        ensure(report.verified(), || format!("lambda={lambda}: cover rejected"))?;
        ensure(counting_bound_holds(lambda, g.m), || {
            format!("lambda={lambda}: counting bound fails")
        })?;
        covers += 1;
    }
    Ok(format!("reference points match, {covers} covers verified"))
}

fn grid() -> Result<Vec<ArakelovDivisor>, String> {
    let grid = divisor_grid(&GridSpec::default()).map_err(|e| e.to_string())?;
    ensure(grid.len() >= 100_000, || format!("grid has {} divisors", grid.len()))?;
    Ok(grid)
}

fn riemann_roch(grid: &[ArakelovDivisor]) -> Check {
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|d| {
            let r = rr_verify(d);
            (!r.consistent).then(|| d.to_string())
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} inconsistent, first {}", bad.len(), bad[0]))?;
    Ok(format!("{} divisors consistent", grid.len()))
}

fn serre_duality(grid: &[ArakelovDivisor]) -> Check {
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|d| {
            let s = serre_verify(d);
            let product = s.dual_exp_deg.as_rational() * s.exp_deg.as_rational();
            (!(s.consistent && s.d1 == s.d2 && product == quarter)).then(|| d.to_string())
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} failures, first {}", bad.len(), bad[0]))?;
    Ok(format!("{} divisors, d1 = d2 and product 1/4", grid.len()))
}

fn pullback_invariance() -> Check {
    let family = pullback_family();
    ensure(family.len() >= 20, || format!("only {} cases", family.len()))?;
    for case in &family {
        ensure(case.map.source().order() <= 27, || format!("{}: source too large", case.name))?;
        ensure(case.map.is_surjective(), || format!("{}: not surjective", case.name))?;
        let pulled = pullback(&case.module, &case.map).map_err(|e| format!("{}: {e}", case.name))?;
        let a = case.module.dim_bruteforce(MAX_CARD).map_err(|e| format!("{}: {e}", case.name))?;
        let b = pulled.dim_bruteforce(MAX_CARD).map_err(|e| format!("{}: {e}", case.name))?;
        ensure(a == b, || format!("{}: {a} != {b}", case.name))?;
    }
    Ok(format!("{} cases preserved", family.len()))
}

fn measure_of_l() -> Check {
    let s = l_measure(30).sum;
    ensure((1.14094..=1.14104).contains(&s), || format!("got {s}"))?;
    Ok(format!("{s:.10}"))
}

fn numerals() -> Check {
    for n in -1_000_000i64..=1_000_000 {
        let bt = BalancedTernary::from(n);
        ensure(bt.decode() == BigInt::from(n), || format!("roundtrip fails at {n}"))?;
    }
    let mut rng = StdRng::seed_from_u64(0x3a11);
    for _ in 0..100_000 {
        let (a, b): (i64, i64) = (rng.gen(), rng.gen());
        let sum = BalancedTernary::from(a).add(&BalancedTernary::from(b));
        ensure(sum.decode() == BigInt::from(a) + BigInt::from(b), || format!("{a} + {b}"))?;
    }
    // Every numeral of at most k digits, compared pairwise.
    for k in 0..=7u32 {
        let half = (3i64.pow(k) - 1) / 2;
        let nums: Vec<BalancedTernary> = (-half..=half).map(BalancedTernary::from).collect();
        for (i, x) in nums.iter().enumerate() {
            for (j, y) in nums.iter().enumerate() {
                ensure(x.lex_cmp(y) == i.cmp(&j), || format!("lex order at {x} vs {y}"))?;
            }
        }
    }
    for _ in 0..10_000 {
        let x = BigRational::new(
            BigInt::from(rng.gen_range(-10_000_000i64..=10_000_000)),
            BigInt::from(rng.gen_range(1i64..=1_000_000)),
        );
        let m = rng.gen_range(0..=15u32);
        let err = (&x - truncate_expand(&x, m)).abs();
        let bound = PosRational::pow3(-i64::from(m)).into_rational() / BigInt::from(2);
        ensure(err.cmp(&bound) != Ordering::Greater, || format!("x={x} m={m}"))?;
    }
    Ok("roundtrip, addition, lex order, truncation".into())
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut failed = 0;
    let mut report = |id: &str, name: &str, f: &dyn Fn() -> Check| {
        let t = Instant::now();
        let result = f();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] {id} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail} ({secs:.1}s)");
            }
        }
    };
    report("AC1", "dim H0 formula vs oracle, n <= 50", &oracle_h0);
    report("AC2", "generating set construction, n <= 10^4", &genset_construction);
    report("AC3", "exceptional set E up to 610", &exceptional_set);
    report("AC4", "sign-vector map onto [-n, n]", &theta_bijection);
    report("AC5", "circle dimension and covers", &circle_dimension);
    let grid = grid();
    report("AC6", "Riemann-Roch on the divisor grid", &|| riemann_roch(grid.as_ref()?));
    report("AC7", "duality on the divisor grid", &|| serre_duality(grid.as_ref()?));
    report("AC8", "pullback invariance", &pullback_invariance);
    report("AC9", "measure of L", &measure_of_l);
    report("AC10", "balanced ternary properties", &numerals);
    println!(
        "{} of 10 criteria passed in {:.1}s",
        10 - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
