//! Text formats, report writers and sweep drivers behind the `absrr` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::divisor::ArakelovDivisor;
use crate::error::{Error, Result};
use crate::exact_arith::PosRational;
use crate::h0::{dim_hzn, genset, in_e, SpecialCase};
use crate::primes::is_prime;
use crate::rr::{rr_verify, serre_verify};
use crate::tolerance::{oracle_dim_hzn, ORACLE_MAX_N};

pub const GENSET_SWEEP_MAX: u64 = 10_000;
pub const GRID_MAX: usize = 1_000_000;

/// Parses `p1:e1,p2:e2;lambda=p/q`. The finite part may be empty; primes
/// must be strictly increasing.
pub fn parse_divisor(spec: &str) -> Result<ArakelovDivisor> {
    let err = |position: usize, message: &str| Error::DivisorParse {
        position,
        message: message.to_string(),
    };
    let Some(semi) = spec.find(';') else {
        return Err(err(spec.len(), "expected ';' before lambda"));
    };
    let (finite, rest) = (&spec[..semi], &spec[semi + 1..]);
    let lam_at = semi + 1;
    let Some(lit) = rest.strip_prefix("lambda=") else {
        return Err(err(lam_at, "expected 'lambda='"));
    };
    let lambda: PosRational = lit.parse().map_err(|e: Error| match e {
        Error::NonPositive(_) => err(lam_at + 7, "lambda must be positive"),
        other => err(lam_at + 7, &other.to_string()),
    })?;

    let mut entries = Vec::new();
    if !finite.is_empty() {
        let mut offset = 0;
        for item in finite.split(',') {
            let Some((p, e)) = item.split_once(':') else {
                return Err(err(offset, "expected prime:exponent"));
            };
            let p: u64 = p
                .parse()
                .map_err(|_| err(offset, "prime must be a positive integer"))?;
            let e: i64 = e
                .parse()
                .map_err(|_| err(offset + item.find(':').unwrap() + 1, "bad exponent"))?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            match entries.last() {
                Some(&(q, _)) if q == p => return Err(Error::DuplicatePrime(p)),
                Some(&(q, _)) if q > p => {
                    return Err(err(offset, "primes must be strictly increasing"))
                }
                _ => {}
            }
            entries.push((p, e));
            offset += item.len() + 1;
        }
    }
    ArakelovDivisor::new(entries, lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

/// Rows of a report; keys stay sorted.
pub type Row = Map<String, Value>;

pub fn to_row<T: Serialize>(value: &T) -> Row {
    match serde_json::to_value(value).expect("report types serialize") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(_) => match serde_json::from_value::<ArakelovDivisor>(v.clone()) {
            Ok(d) => d.to_string(),
            Err(_) => v.to_string(),
        },
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

pub fn render_table(rows: &[Row], columns: &[&str]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| columns.iter().map(|c| r.get(*c).map(cell).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).fold(c.len(), usize::max))
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, items: &[String]| {
        let parts: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(&mut out, &columns.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    for r in &cells {
        line(&mut out, r);
    }
    out
}

pub fn render_json(rows: &[Row]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render_csv(rows: &[Row], columns: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidModule(format!("csv: {e}"));
    w.write_record(columns).map_err(io)?;
    for r in rows {
        w.write_record(columns.iter().map(|c| r.get(*c).map(cell).unwrap_or_default()))
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidModule(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(rows: &[Row], columns: &[&str], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Table => Ok(render_table(rows, columns)),
        OutputFormat::Json => Ok(render_json(rows)),
        OutputFormat::Csv => render_csv(rows, columns),
    }
}

/// Writes a report file; the extension `.csv` selects CSV, anything else JSON.
pub fn write_report(path: &Path, rows: &[Row], columns: &[&str]) -> std::io::Result<()> {
    let body = if path.extension().is_some_and(|e| e == "csv") {
        render_csv(rows, columns).map_err(std::io::Error::other)?
    } else {
        render_json(rows)
    };
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())
}

/// Rows plus human-readable descriptions of every failed check.
#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub rows: Vec<Row>,
    pub failures: Vec<String>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sizes the global rayon pool from `ABSRR_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("ABSRR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // A second call finds the pool already built; that is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub const RR_COLUMNS: &[&str] = &[
    "divisor", "exp_deg", "deg_float", "h0", "h1", "euler", "rhs_ceil", "in_L", "consistent",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    /// Numerators and denominators of lambda range over `1..=lambda_max`.
    pub lambda_max: u64,
    pub primes: Vec<u64>,
    pub exp_min: i64,
    pub exp_max: i64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            lambda_max: 300,
            primes: vec![2, 3, 5, 7, 11],
            exp_min: -3,
            exp_max: 3,
        }
    }
}

/// Parses `a..b` (inclusive).
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidModule(format!("expected a range like -3..3, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Every reduced `lambda = p/q` with `p, q <= lambda_max`, each paired with
/// the empty finite part and with one finite part taken in turn from the
/// full table of exponent vectors over `primes`.
pub fn divisor_grid(spec: &GridSpec) -> Result<Vec<ArakelovDivisor>> {
    for (i, &p) in spec.primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if spec.primes[..i].contains(&p) {
            return Err(Error::DuplicatePrime(p));
        }
    }
    let span = (spec.exp_max - spec.exp_min + 1) as u64;
    let combos = span
        .checked_pow(spec.primes.len() as u32)
        .ok_or(Error::GuardExceeded {
            what: "exponent vectors",
            value: u64::MAX,
            limit: GRID_MAX as u64,
        })?;
    let lm = spec.lambda_max;
    let estimate = lm.saturating_mul(lm).saturating_mul(2);
    if estimate > 2 * GRID_MAX as u64 {
        return Err(Error::GuardExceeded {
            what: "divisor grid size",
            value: estimate,
            limit: GRID_MAX as u64,
        });
    }
    let mut out = Vec::new();
    let mut next = 0u64;
    for p in 1..=lm {
        for q in 1..=lm {
            if p.gcd(&q) != 1 {
                continue;
            }
            let lambda = PosRational::new(p, q)?;
            out.push(ArakelovDivisor::archimedean(lambda.clone()));
            let mut idx = next % combos;
            next += 1;
            let mut finite = Vec::new();
            for &prime in &spec.primes {
                finite.push((prime, spec.exp_min + (idx % span) as i64));
                idx /= span;
            }
            out.push(ArakelovDivisor::new(finite, lambda)?);
        }
    }
    if out.len() > GRID_MAX {
        return Err(Error::GuardExceeded {
            what: "divisor grid size",
            value: out.len() as u64,
            limit: GRID_MAX as u64,
        });
    }
    Ok(out)
}

/// Riemann-Roch and duality checks over a list of divisors.
pub fn rr_sweep(divisors: &[ArakelovDivisor]) -> SweepOutcome {
    let results: Vec<(Row, Option<String>)> = divisors
        .par_iter()
        .map(|d| {
            let rr = rr_verify(d);
            let serre = serre_verify(d);
            let failure = match (rr.consistent, serre.consistent) {
                (true, true) => None,
                (false, _) => Some(format!(
                    "rr {d}: euler {} != {} - {}",
                    rr.euler, rr.rhs_ceil, rr.in_l
                )),
                (true, false) => Some(format!("duality {d}: d1 {} != d2 {}", serre.d1, serre.d2)),
            };
            (to_row(&rr), failure)
        })
        .collect();
    let mut out = SweepOutcome::default();
    for (row, failure) in results {
        out.rows.push(row);
        out.failures.extend(failure);
    }
    out
}

pub const GENSET_COLUMNS: &[&str] = &[
    "n", "generators", "cardinality", "sum", "surjective", "mass_ok", "special_case",
];

/// Constructs and verifies the generating set for every `n <= max`.
pub fn genset_sweep(max: u64) -> Result<SweepOutcome> {
    if max > GENSET_SWEEP_MAX {
        return Err(Error::RangeTooLarge {
            n: max,
            limit: GENSET_SWEEP_MAX,
        });
    }
    let reports = (0..=max)
        .into_par_iter()
        .map(genset)
        .collect::<Result<Vec<_>>>()?;
    let mut out = SweepOutcome::default();
    for r in reports {
        let special = matches!(r.special_case, SpecialCase::SpecialN2 | SpecialCase::SpecialN5);
        let ok = r.surjective
            && (special
                || (r.mass_ok
                    && r.sum == r.n as i64
                    && r.cardinality == dim_hzn(r.n) as usize));
        if !ok {
            out.failures.push(format!("genset {}: {:?}", r.n, r.generators));
        }
        out.rows.push(to_row(&r));
    }
    Ok(out)
}

pub const ORACLE_COLUMNS: &[&str] = &["n", "formula", "oracle", "agree"];

/// `dim_hzn(n)` against the brute-force oracle for every `n <= max`.
pub fn oracle_sweep(max: u64) -> Result<SweepOutcome> {
    if max > ORACLE_MAX_N {
        return Err(Error::RangeTooLarge {
            n: max,
            limit: ORACLE_MAX_N,
        });
    }
    let mut out = SweepOutcome::default();
    for n in 0..=max {
        let formula = dim_hzn(n) as usize;
        let oracle = oracle_dim_hzn(n)?;
        if formula != oracle {
            out.failures.push(format!("n = {n}: formula {formula}, oracle {oracle}"));
        }
        out.rows.push(to_row(&serde_json::json!({
            "n": n, "formula": formula, "oracle": oracle, "agree": formula == oracle,
        })));
    }
    Ok(out)
}

pub const E_COLUMNS: &[&str] = &["n", "l", "m"];

/// Elements `3^l + (3^m - 1)/2` of `E` up to `max`, ascending.
pub fn exceptional_e(max: u64) -> Vec<(u64, u32, u32)> {
    (1..=max).filter_map(|n| in_e(n).map(|(l, m)| (n, l, m))).collect()
}
