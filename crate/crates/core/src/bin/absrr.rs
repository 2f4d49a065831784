use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::json;

use absrr::balanced_ternary::{expand, truncate_expand, BalancedTernary};
use absrr::cli::{
    self, configure_threads, divisor_grid, exceptional_e, genset_sweep, oracle_sweep, parse_range,
    render, rr_sweep, to_row, write_report, GridSpec, OutputFormat, Row, SweepOutcome,
};
use absrr::exact_arith::{format_rational, parse_rational, PosRational};
use absrr::h0::{dim_h0, genset, verify_genset};
use absrr::h1::{check_circle_cover, circle_genset, dim_h1, dim_u1};
use absrr::rr::{l_measure, rr_verify, serre_verify};
use absrr::tolerance::{pullback, pullback_family, FiniteToleranceModule, ModuleSpec, MAX_CARD};
use absrr::ArakelovDivisor;

/// Exact Riemann-Roch computations for Arakelov divisors on Spec Z.
#[derive(Parser)]
#[command(name = "absrr", version)]
struct Cli {
    /// Output format for stdout.
    #[arg(long, value_enum, global = true, default_value = "table")]
    format: OutputFormat,
    /// Also write the full report here (`.csv` for CSV, otherwise JSON).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Balanced ternary numerals.
    #[command(subcommand)]
    Bt(BtCommand),
    /// Dimension of H^0 of a divisor.
    DimH0(DivisorArg),
    /// Dimension of H^1 of a divisor.
    DimH1(DivisorArg),
    /// Generating sets of ||HZ||_n.
    Genset(GensetArgs),
    /// Elements of the exceptional set E.
    ExceptionalE {
        #[arg(long, default_value_t = 610)]
        max: u64,
    },
    /// Circle generating sets and exact cover checks.
    CircleCover(CircleArgs),
    /// Riemann-Roch identity for one divisor.
    Rr(DivisorArg),
    /// Riemann-Roch and duality over a divisor grid.
    RrSweep(SweepArgs),
    /// Duality between D and K - D.
    Duality(DivisorArg),
    /// Brute-force dimension oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Partial sums of the measure of L.
    LMeasure {
        #[arg(long, default_value_t = 30)]
        terms: u32,
    },
}

#[derive(Args)]
struct DivisorArg {
    /// `p:e,...;lambda=p/q`
    #[arg(long, allow_hyphen_values = true)]
    divisor: String,
}

#[derive(Subcommand)]
enum BtCommand {
    Encode {
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
    /// Accepts a numeral such as `1T0` or comma-separated digits, least
    /// significant first.
    Decode {
        #[arg(allow_hyphen_values = true)]
        numeral: String,
    },
    Add {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Cmp {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Rounds a rational to `m` balanced ternary fraction digits.
    Truncate {
        #[arg(allow_hyphen_values = true)]
        x: String,
        m: u32,
    },
}

#[derive(Args)]
struct GensetArgs {
    n: Option<u64>,
    /// Sweep every n up to this bound.
    #[arg(long)]
    max: Option<u64>,
    /// Check a given set instead of the construction, e.g. `1,3`.
    #[arg(long, allow_hyphen_values = true)]
    gens: Option<String>,
    /// Fail unless every set is verified.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct CircleArgs {
    #[arg(long)]
    lambda: String,
    /// Generators such as `1/3,1/9`; defaults to the construction.
    #[arg(long)]
    gens: Option<String>,
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 300)]
    lambda_max: u64,
    #[arg(long, default_value = "2,3,5,7,11")]
    primes: String,
    #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
    exp_range: String,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Formula against brute force for one n or every n up to --max.
    DimH0 {
        n: Option<u64>,
        #[arg(long)]
        max: Option<u64>,
    },
    /// Dimensions before and after pulling back along surjections.
    PullbackDemo,
    /// Dimension of a module described by a JSON file or literal.
    Module {
        spec: String,
        #[arg(long, default_value_t = 8)]
        max_card: usize,
    },
}

struct Output {
    rows: Vec<Row>,
    columns: Vec<&'static str>,
    failures: Vec<String>,
}

impl Output {
    fn single(row: Row) -> Self {
        let columns = leak_columns(&row);
        Output {
            rows: vec![row],
            columns,
            failures: Vec::new(),
        }
    }

    fn sweep(out: SweepOutcome, columns: &[&'static str]) -> Self {
        Output {
            rows: out.rows,
            columns: columns.to_vec(),
            failures: out.failures,
        }
    }
}

fn leak_columns(row: &Row) -> Vec<&'static str> {
    row.keys()
        .map(|k| &*Box::leak(k.clone().into_boxed_str()))
        .collect()
}

fn divisor(spec: &str) -> anyhow::Result<ArakelovDivisor> {
    cli::parse_divisor(spec).with_context(|| format!("bad divisor {spec:?}"))
}

fn integer(s: &str) -> anyhow::Result<BigInt> {
    s.trim().parse().with_context(|| format!("bad integer {s:?}"))
}

fn numeral(s: &str) -> anyhow::Result<BalancedTernary> {
    if s.contains(',') {
        let digits = s
            .split(',')
            .map(|d| d.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(BalancedTernary::from_digits(&digits)?);
    }
    Ok(s.parse()?)
}

fn bt_row(b: &BalancedTernary) -> Row {
    to_row(&json!({
        "numeral": b.to_string(),
        "value": b.decode().to_string(),
        "digits": b.digits().iter().map(|t| t.value()).collect::<Vec<_>>(),
    }))
}

fn run_bt(cmd: BtCommand) -> anyhow::Result<Output> {
    let row = match cmd {
        BtCommand::Encode { n } => bt_row(&BalancedTernary::encode(&integer(&n)?)),
        BtCommand::Decode { numeral: s } => bt_row(&numeral(&s)?),
        BtCommand::Add { a, b } => {
            let (x, y) = (numeral(&a)?, numeral(&b)?);
            let sum = x.add(&y);
            let mut row = bt_row(&sum);
            row.insert("homomorphic".into(), json!(sum.decode() == x.decode() + y.decode()));
            row
        }
        BtCommand::Cmp { a, b } => {
            let (x, y) = (numeral(&a)?, numeral(&b)?);
            let ord = x.lex_cmp(&y);
            to_row(&json!({
                "a": x.to_string(),
                "b": y.to_string(),
                "order": format!("{ord:?}"),
                "agrees_with_value": ord == x.decode().cmp(&y.decode()),
            }))
        }
        BtCommand::Truncate { x, m } => {
            let q = parse_rational(&x)?;
            let e = expand(&q, m);
            let t = truncate_expand(&q, m);
            let err = (&q - &t).abs();
            let bound = PosRational::pow3(-i64::from(m)).into_rational() / BigInt::from(2);
            to_row(&json!({
                "x": format_rational(&q),
                "m": m,
                "integer": e.integer.to_string(),
                "fraction": e.fraction.iter().map(|t| t.value()).collect::<Vec<_>>(),
                "truncation": format_rational(&t),
                "error": format_rational(&err),
                "within_bound": err <= bound,
            }))
        }
    };
    let ok = !matches!(row.get("homomorphic"), Some(serde_json::Value::Bool(false)))
        && !matches!(row.get("within_bound"), Some(serde_json::Value::Bool(false)))
        && !matches!(row.get("agrees_with_value"), Some(serde_json::Value::Bool(false)));
    let mut out = Output::single(row);
    if !ok {
        out.failures.push("numeral check failed".into());
    }
    Ok(out)
}

fn run_genset(args: GensetArgs) -> anyhow::Result<Output> {
    if let Some(max) = args.max {
        let out = genset_sweep(max)?;
        return Ok(Output::sweep(out, cli::GENSET_COLUMNS));
    }
    let Some(n) = args.n else {
        bail!("give n or --max");
    };
    let report = match &args.gens {
        Some(g) => {
            let gens = g
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .context("generators must be integers")?;
            verify_genset(n, &gens)?
        }
        None => genset(n)?,
    };
    let verified = report.surjective;
    let mut out = Output::sweep(
        SweepOutcome {
            rows: vec![to_row(&report)],
            failures: Vec::new(),
        },
        cli::GENSET_COLUMNS,
    );
    if args.verify && !verified {
        out.failures.push(format!("{:?} does not generate ||HZ||_{n}", report.generators));
    }
    Ok(out)
}

fn run_circle(args: CircleArgs) -> anyhow::Result<Output> {
    let lambda: PosRational = args.lambda.parse()?;
    let gens = match &args.gens {
        Some(g) => g
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?,
        None => circle_genset(&lambda).generators,
    };
    let report = check_circle_cover(&lambda, &gens)?;
    let row = to_row(&json!({
        "lambda": lambda.to_string(),
        "dim_u1": dim_u1(&lambda),
        "generators": gens.iter().map(format_rational).collect::<Vec<_>>(),
        "separated": report.separated,
        "covers": report.covers,
        "points": report.points,
        "max_gap": format_rational(&report.max_gap),
    }));
    let mut out = Output::single(row);
    if args.verify && !report.verified() {
        out.failures.push("generators do not form a circle cover".into());
    }
    Ok(out)
}

fn run_oracle(cmd: OracleCommand) -> anyhow::Result<Output> {
    match cmd {
        OracleCommand::DimH0 { n, max } => {
            let out = match (n, max) {
                (_, Some(max)) => oracle_sweep(max)?,
                (Some(n), None) => {
                    let mut out = oracle_sweep(0)?;
                    out.rows.clear();
                    let formula = absrr::h0::dim_hzn(n) as usize;
                    let oracle = absrr::tolerance::oracle_dim_hzn(n)?;
                    if formula != oracle {
                        out.failures.push(format!("n = {n}"));
                    }
                    out.rows.push(to_row(&json!({
                        "n": n, "formula": formula, "oracle": oracle, "agree": formula == oracle,
                    })));
                    out
                }
                (None, None) => bail!("give n or --max"),
            };
            Ok(Output::sweep(out, cli::ORACLE_COLUMNS))
        }
        OracleCommand::PullbackDemo => {
            let mut out = SweepOutcome::default();
            for case in pullback_family() {
                let base = case.module.dim_bruteforce(MAX_CARD)?;
                let pulled = pullback(&case.module, &case.map)?.dim_bruteforce(MAX_CARD)?;
                if base != pulled {
                    out.failures.push(case.name.clone());
                }
                out.rows.push(to_row(&json!({
                    "case": case.name, "dim": base, "dim_pullback": pulled, "agree": base == pulled,
                })));
            }
            Ok(Output::sweep(out, &["case", "dim", "dim_pullback", "agree"]))
        }
        OracleCommand::Module { spec, max_card } => {
            let text = if spec.trim_start().starts_with('{') {
                spec
            } else {
                std::fs::read_to_string(&spec).with_context(|| format!("reading {spec}"))?
            };
            let spec: ModuleSpec = serde_json::from_str(&text).context("module JSON")?;
            let module = FiniteToleranceModule::from_spec(&spec)?;
            let w = module.dim_search(max_card)?;
            Ok(Output::single(to_row(&json!({
                "order": module.order(),
                "dim": w.dim,
                "generators": w.generators.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>(),
            }))))
        }
    }
}

fn run(cmd: Command) -> anyhow::Result<Output> {
    Ok(match cmd {
        Command::Bt(c) => run_bt(c)?,
        Command::DimH0(a) => {
            let d = divisor(&a.divisor)?;
            Output::single(to_row(&json!({
                "divisor": d.to_string(),
                "exp_deg": d.exp_degree().to_string(),
                "dim_h0": dim_h0(&d),
            })))
        }
        Command::DimH1(a) => {
            let d = divisor(&a.divisor)?;
            Output::single(to_row(&json!({
                "divisor": d.to_string(),
                "exp_deg": d.exp_degree().to_string(),
                "dim_h1": dim_h1(&d),
            })))
        }
        Command::Genset(a) => run_genset(a)?,
        Command::ExceptionalE { max } => {
            let rows = exceptional_e(max)
                .into_iter()
                .map(|(n, l, m)| to_row(&json!({"n": n, "l": l, "m": m})))
                .collect();
            Output {
                rows,
                columns: cli::E_COLUMNS.to_vec(),
                failures: Vec::new(),
            }
        }
        Command::CircleCover(a) => run_circle(a)?,
        Command::Rr(a) => {
            let r = rr_verify(&divisor(&a.divisor)?);
            let mut out = Output::sweep(
                SweepOutcome {
                    rows: vec![to_row(&r)],
                    failures: Vec::new(),
                },
                cli::RR_COLUMNS,
            );
            if !r.consistent {
                out.failures.push("identity does not hold".into());
            }
            out
        }
        Command::RrSweep(a) => {
            let primes = a
                .primes
                .split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .context("--primes")?;
            let (exp_min, exp_max) = parse_range(&a.exp_range)?;
            let grid = divisor_grid(&GridSpec {
                lambda_max: a.lambda_max,
                primes,
                exp_min,
                exp_max,
            })?;
            Output::sweep(rr_sweep(&grid), cli::RR_COLUMNS)
        }
        Command::Duality(a) => {
            let r = serre_verify(&divisor(&a.divisor)?);
            let mut out = Output::single(to_row(&r));
            if !r.consistent {
                out.failures.push("duality check failed".into());
            }
            out
        }
        Command::Oracle(c) => run_oracle(c)?,
        Command::LMeasure { terms } => Output::single(to_row(&l_measure(terms))),
    })
}

const SUMMARY_LIMIT: usize = 60;

fn main() -> ExitCode {
    configure_threads();
    let args = Cli::parse();
    let out = match run(args.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &args.out {
        if let Err(e) = write_report(path, &out.rows, &out.columns) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    // Large sweeps print a summary to the terminal rather than every row.
    let long_table = args.format == OutputFormat::Table && out.rows.len() > SUMMARY_LIMIT;
    if long_table {
        println!("rows: {}", out.rows.len());
    } else {
        match render(&out.rows, &out.columns, args.format) {
            Ok(s) => print!("{s}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if out.failures.is_empty() {
        if long_table {
            println!("all checks passed");
        }
        ExitCode::SUCCESS
    } else {
        for f in &out.failures {
            eprintln!("FAIL {f}");
        }
        eprintln!("{} check(s) failed", out.failures.len());
        ExitCode::from(1)
    }
}
