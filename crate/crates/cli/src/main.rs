//! `lambda-roots` command-line front end.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use lambda_roots::characters::{self, CharacterGroup};
use lambda_roots::constants;
use lambda_roots::statistics::{self, MomentConfig};
use lambda_roots::unit_group::{self, BRUTE_FORCE_BOUND};
use lambda_roots::verify::{self, Suite, VerifyPlan};
use lambda_roots::{par, Error, FactoredInt};
use output::{rational_fields, Format, Output};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "lambda-roots", version, about = "Carmichael lambda, lambda-primitive roots and related sums")]
struct Cli {
    /// Output format; `sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for the parallel sections.
    #[arg(long, global = true, env = par::WORKERS_ENV)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Carmichael function lambda(n).
    Lambda { n: u64 },
    /// Multiplicative order of a modulo n.
    Order { a: u64, n: u64 },
    /// Number of lambda-primitive roots in [1, n], closed form and enumeration.
    Rcount {
        n: u64,
        /// Skip the enumeration check.
        #[arg(long)]
        no_brute: bool,
    },
    /// Unit-group structure, Delta_q(n) and R(n).
    Delta { n: u64 },
    /// Characters mod n with their coefficients c and c_bar.
    Characters {
        n: u64,
        /// Only elementary characters.
        #[arg(long)]
        elementary: bool,
    },
    /// N_a(x): moduli n <= x for which a is a lambda-primitive root.
    Na { a: u64, x: u64 },
    /// P_a(x): primes p <= x for which a is a primitive root.
    Pa { a: u64, x: u64 },
    /// sum_{n <= x} R(n)/n.
    Mean { x: u64 },
    /// Second moment of N_a(x) over a <= y.
    Moment2 {
        x: u64,
        y: u64,
        /// Leave the modulus n = 1 out of N_a(x) and the mean.
        #[arg(long)]
        exclude_n1: bool,
    },
    /// The double sum Sigma_1(x).
    Sigma1 {
        x: u64,
        #[arg(long, value_enum, default_value_t = Sigma1Form::Direct)]
        form: Sigma1Form,
    },
    /// B(x, y), the non-principal part of the first moment.
    Bsum { x: u64, y: u64 },
    /// Euler-product and closed-form constants.
    Constants {
        #[arg(long, default_value_t = 10)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = ConstantName::All)]
        name: ConstantName,
        /// Prime cutoff for the exact partial product.
        #[arg(long, default_value_t = constants::DEFAULT_CUTOFF)]
        cutoff: u64,
    },
    /// Root of K/4 = f(K).
    Rho1 {
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Run cross-checking suites; exits 1 if any fails.
    Verify {
        /// Run every suite (the default when no --suite is given).
        #[arg(long)]
        all: bool,
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Override a suite cap, as `suite=N`.
        #[arg(long = "cap")]
        caps: Vec<String>,
    },
    /// Evaluate a metric over a grid of (x, y).
    Sweep {
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[arg(long, value_delimiter = ',', conflicts_with = "y_eq_x")]
        y: Vec<u64>,
        /// Use y = x at every grid point.
        #[arg(long)]
        y_eq_x: bool,
        /// Report progress on stderr.
        #[arg(long)]
        progress: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Sigma1Form {
    Direct,
    Gcd,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ConstantName {
    All,
    Artin,
    Stephens,
    Theorem12,
    Theorem13,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Metric {
    Mean,
    Moment2,
    Sigma1,
    PhiPhi,
    Bsum,
    Report,
}

impl Metric {
    fn uses_y(self) -> bool {
        matches!(self, Metric::Moment2 | Metric::Bsum | Metric::Report)
    }
}

/// Failure after arguments parsed: a library error or a failed verification.
enum Failure {
    Error(Error),
    Usage(String),
    VerifyFailed(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn positive(what: &str, v: u64) -> Result<u64, Failure> {
    if v == 0 {
        return Err(Failure::Error(Error::InvalidArgument(format!("{what} must be at least 1"))));
    }
    Ok(v)
}

fn run(command: Command) -> Result<Output, Failure> {
    Ok(match command {
        Command::Lambda { n } => Output::Scalar(json!(lambda_roots::carmichael_lambda(n)?)),
        Command::Order { a, n } => Output::Scalar(json!(lambda_roots::multiplicative_order(a, n)?)),
        Command::Rcount { n, no_brute } => {
            let f = FactoredInt::new(n)?;
            let closed = unit_group::r_count(&f)?;
            let brute = if no_brute || n > BRUTE_FORCE_BOUND {
                Value::Null
            } else {
                json!(unit_group::r_count_bruteforce(&f)?)
            };
            Output::record([("n", json!(n)), ("r_closed", json!(closed)), ("r_brute", brute)])
        }
        Command::Delta { n } => {
            let s = unit_group::decompose(n)?;
            Output::record([
                ("n", json!(n)),
                ("lambda", json!(s.lambda)),
                ("phi", json!(s.phi())),
                ("cyclic_orders", json!(s.cyclic_orders)),
                ("delta", json!(s.delta)),
                ("r", json!(s.r_count())),
                ("e_exponent", json!(s.e_exponent())),
            ])
        }
        Command::Characters { n, elementary } => {
            let group = CharacterGroup::new(n)?;
            let chars = if elementary { group.elementary_characters() } else { group.characters() };
            let mut rows = Vec::with_capacity(chars.len());
            for chi in &chars {
                let coeff = group.coefficient(chi)?;
                let mut row = vec![
                    ("exponents".to_string(), json!(chi.exponents)),
                    ("order".to_string(), json!(chi.order)),
                    ("elementary".to_string(), json!(chi.is_elementary)),
                ];
                row.extend(rational_fields("c", &coeff.c));
                row.extend(rational_fields("c_bar", &coeff.c_bar));
                rows.push(row);
            }
            Output::Table(rows)
        }
        Command::Na { a, x } => Output::Scalar(json!(statistics::n_count(a, x)?)),
        Command::Pa { a, x } => Output::Scalar(json!(statistics::p_count(a, x)?)),
        Command::Mean { x } => {
            let m = statistics::mean_sum(positive("x", x)?)?;
            Output::Record(with_rational(vec![("x".into(), json!(x))], "", &m))
        }
        Command::Moment2 { x, y, exclude_n1 } => {
            let mut config = MomentConfig::new(x, y)?;
            config.include_n_equals_1 = !exclude_n1;
            let m = statistics::second_moment(&config)?;
            Output::Record(with_rational(vec![("x".into(), json!(x)), ("y".into(), json!(y))], "", &m))
        }
        Command::Sigma1 { x, form } => {
            let s = match form {
                Sigma1Form::Direct => statistics::sigma1_direct(x)?,
                Sigma1Form::Gcd => statistics::sigma1_gcd_form(x)?,
            };
            Output::Record(with_rational(vec![("x".into(), json!(x))], "", &s))
        }
        Command::Bsum { x, y } => {
            let b = characters::b_sum(x, y)?;
            Output::Record(with_rational(vec![("x".into(), json!(x)), ("y".into(), json!(y))], "", &b))
        }
        Command::Constants { digits, name, cutoff } => {
            let mut values = Vec::new();
            let wanted = |n: ConstantName| name == ConstantName::All || name == n;
            if wanted(ConstantName::Artin) {
                values.push(constants::artin_constant_with_cutoff(digits, cutoff)?);
            }
            if wanted(ConstantName::Stephens) {
                values.push(constants::stephens_constant_with_cutoff(digits, cutoff)?);
            }
            if wanted(ConstantName::Theorem12) {
                values.push(constants::theorem12_constant(digits)?);
            }
            if wanted(ConstantName::Theorem13) {
                values.push(constants::theorem13_constant(digits)?);
            }
            Output::Table(
                values
                    .into_iter()
                    .map(|v| {
                        vec![
                            ("name".to_string(), json!(v.name)),
                            ("value".to_string(), json!(v.value)),
                            ("error_bound".to_string(), json!(format!("{:e}", v.error_bound))),
                            ("digits".to_string(), json!(v.digits)),
                        ]
                    })
                    .collect(),
            )
        }
        Command::Rho1 { tol } => {
            let r = constants::rho1_root(tol)?;
            Output::Scalar(Value::Number(
                r.to_decimal_string().parse().expect("decimal is a JSON number"),
            ))
        }
        Command::Verify { all, suites, caps } => {
            let mut plan = if all || suites.is_empty() {
                VerifyPlan::all()
            } else {
                VerifyPlan::new(suites.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>, _>>()?)
            };
            for spec in &caps {
                let (suite, cap) = spec
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("cap `{spec}` is not of the form suite=N")))?;
                let cap: u64 = cap
                    .parse()
                    .map_err(|_| Failure::Usage(format!("cap `{spec}` has a non-integer bound")))?;
                plan = plan.with_cap(suite.parse()?, cap)?;
            }
            let report = verify::run(&plan)?;
            let out = Output::Report(report.to_json(), verify_rows(&report));
            if !report.passed {
                return Err(Failure::VerifyFailed(out));
            }
            out
        }
        Command::Sweep { metric, x, y, y_eq_x, progress } => sweep(metric, &x, &y, y_eq_x, progress)?,
    })
}

fn with_rational(
    mut fields: Vec<(String, Value)>,
    prefix: &str,
    q: &num_rational::BigRational,
) -> Vec<(String, Value)> {
    fields.extend(rational_fields(prefix, q));
    fields
}

fn verify_rows(report: &verify::VerifyReport) -> Vec<Vec<(String, Value)>> {
    report
        .suites
        .iter()
        .map(|s| {
            vec![
                ("suite".to_string(), json!(s.suite.name())),
                ("cap".to_string(), json!(s.cap)),
                ("checked".to_string(), json!(s.checked)),
                ("passed".to_string(), json!(s.passed)),
            ]
        })
        .collect()
}

fn sweep(metric: Metric, xs: &[u64], ys: &[u64], y_eq_x: bool, progress: bool) -> Result<Output, Failure> {
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let mut ys = ys.to_vec();
    ys.sort_unstable();
    ys.dedup();
    let points: Vec<(u64, Option<u64>)> = if !metric.uses_y() {
        if !ys.is_empty() || y_eq_x {
            return Err(Failure::Usage("this metric takes no y values".into()));
        }
        xs.iter().map(|&x| (x, None)).collect()
    } else if y_eq_x {
        xs.iter().map(|&x| (x, Some(x))).collect()
    } else if ys.is_empty() {
        return Err(Failure::Usage("this metric needs --y or --y-eq-x".into()));
    } else {
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, Some(y)))).collect()
    };
    // validate every point before starting the computation
    for &(x, y) in &points {
        positive("x", x)?;
        if let Some(y) = y {
            MomentConfig::new(x, y)?;
            let requested = x as u128 * y as u128;
            if matches!(metric, Metric::Moment2 | Metric::Report) && requested > statistics::MOMENT_BUDGET {
                return Err(Error::BudgetExceeded { requested, budget: statistics::MOMENT_BUDGET }.into());
            }
        }
    }
    let mut rows = Vec::with_capacity(points.len());
    for (i, &(x, y)) in points.iter().enumerate() {
        if progress {
            match y {
                Some(y) => eprintln!("[{}/{}] x = {x}, y = {y}", i + 1, points.len()),
                None => eprintln!("[{}/{}] x = {x}", i + 1, points.len()),
            }
        }
        let mut row = vec![("x".to_string(), json!(x))];
        if let Some(y) = y {
            row.push(("y".to_string(), json!(y)));
        }
        match metric {
            Metric::Mean => row.extend(rational_fields("", &statistics::mean_sum(x)?)),
            Metric::Sigma1 => {
                let s = if x <= statistics::SIGMA1_DIRECT_BOUND {
                    statistics::sigma1_direct(x)?
                } else {
                    statistics::sigma1_gcd_form(x)?
                };
                row.extend(rational_fields("", &s));
            }
            Metric::PhiPhi => row.push(("phi_phi_sum".to_string(), json!(statistics::phi_phi_sum(x)?.to_string()))),
            Metric::Moment2 => {
                let config = MomentConfig::new(x, y.expect("grid has y"))?;
                row.extend(rational_fields("", &statistics::second_moment(&config)?));
            }
            Metric::Bsum => row.extend(rational_fields("", &characters::b_sum(x, y.expect("grid has y"))?)),
            Metric::Report => {
                let report = statistics::sweep_report(&MomentConfig::new(x, y.expect("grid has y"))?)?;
                let Value::Object(map) = serde_json::to_value(&report).expect("report serializes") else {
                    unreachable!("report is an object")
                };
                row = map.into_iter().collect();
                row.sort_by_key(|(k, _)| report_column(k));
            }
        }
        rows.push(row);
    }
    Ok(Output::Table(rows))
}

fn report_column(key: &str) -> usize {
    const ORDER: [&str; 10] = [
        "x", "y", "mean_num", "mean_den", "m2_num", "m2_den", "sigma1_num", "sigma1_den", "phi_phi_sum", "diagnostics",
    ];
    ORDER.iter().position(|k| *k == key).unwrap_or(ORDER.len())
}

fn emit_error(kind: &str, message: &str) {
    let body = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit_error("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::Sweep { .. } => Format::Csv,
        _ => Format::Json,
    });
    let workers = cli.workers.unwrap_or_else(par::default_workers).max(1);
    let result = par::with_workers(workers, move || run(cli.command));
    match result {
        Ok(out) => match out.write(format) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                emit_error("output", &e.to_string());
                ExitCode::from(2)
            }
        },
        Err(Failure::VerifyFailed(out)) => {
            let _ = out.write(format);
            emit_error("verification_failed", "at least one suite failed");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            emit_error(e.kind(), &e.to_string());
            ExitCode::from(2)
        }
        Err(Failure::Usage(message)) => {
            emit_error("usage", &message);
            ExitCode::from(2)
        }
    }
}
