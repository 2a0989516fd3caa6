//! `colorfact`: compute, tabulate, enumerate and verify colored factorization counts.
//!
//! Factorizations are printed one per line as `value.color` parts joined by
//! `*`, e.g. `6.1*2.2`; the empty factorization of 1 prints as `1`. Unordered
//! lists show parts in descending `(value, color)` order, ordered lists keep
//! their sequence.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or domain error,
//! 3 resource guard exceeded. `COLORFACT_GUARD` overrides every resource
//! limit: enumeration size, table length, divisor-lattice work and the
//! asymptotic `x`. The brute-force oracle behind `verify` stays capped at
//! `n <= 10^4`, `l <= 4`.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use colorfact::asymptotics::{average_order_report_guarded, MAX_X};
use colorfact::counting::{prime_power_slice, primorial_slice, sequence};
use colorfact::enumeration::{enum_colored, Flags, DEFAULT_GUARD};
use colorfact::oracle::{cross_validate, FamilyReport};
use colorfact::{
    eval_by_signature, factorize, set_work_limit, CountFamily, Error, FamilyKind, Method,
};
use num_bigint::BigInt;
use serde::Serialize;

const DEFAULT_TABLE_LIMIT: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "colorfact", version, about = "Colored factorization counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one family at one n.
    Compute {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = ValueFormat::Text)]
        format: ValueFormat,
    },
    /// Print a family as a sequence.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        /// Last index: n for `all`, m for the prime-power and primorial slices.
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long, value_enum, default_value_t = Slice::All)]
        slice: Slice,
    },
    /// List the colored factorizations of n.
    Enumerate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        ordered: bool,
        #[arg(long)]
        distinct: bool,
        /// Keep only factorizations using all l colors.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = ValueFormat::Text)]
        format: ValueFormat,
    },
    /// Check every family and method against the brute-force oracle.
    Verify {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        lmax: i64,
        #[arg(long, value_enum, default_value_t = ValueFormat::Text)]
        format: ValueFormat,
    },
    /// Compare the mean of the ordered colored count up to x with its predicted growth.
    Asymptotic {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        x: u64,
        #[arg(long, value_enum, default_value_t = ValueFormat::Text)]
        format: ValueFormat,
    },
}

#[derive(clap::Args)]
struct FamilyArgs {
    /// A, B, a, b, At, Bt, at, bt, muf, mug, dl, fl, fkl or gkl.
    #[arg(long, value_parser = parse_kind)]
    family: FamilyKind,
    /// Number of colors; ignored by muf and mug.
    #[arg(long)]
    l: Option<i64>,
    /// Number of parts, for fkl and gkl.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
}

impl FamilyArgs {
    fn family(&self) -> Result<CountFamily, Error> {
        let l = match (self.l, self.family.is_moebius()) {
            (Some(l), _) => l,
            (None, true) => -1,
            (None, false) => {
                return Err(Error::Usage(format!("--l is required for {}", self.family)))
            }
        };
        CountFamily::new(self.family, l, self.k)
    }
}

fn parse_kind(s: &str) -> Result<FamilyKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum ValueFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
    Csv,
    Bfile,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Slice {
    All,
    PrimePowers,
    Primorials,
}

#[derive(Serialize)]
struct ComputeOutput {
    family: CountFamily,
    method: Option<Method>,
    n: u64,
    value: String,
}

#[derive(Serialize)]
struct TableRow {
    index: u64,
    value: String,
}

#[derive(Serialize)]
struct TableOutput {
    family: CountFamily,
    method: Option<Method>,
    slice: Slice,
    rows: Vec<TableRow>,
}

#[derive(Serialize)]
struct EnumerateOutput {
    n: u64,
    l: u32,
    flags: Flags,
    count: usize,
    factorizations: Vec<String>,
}

#[derive(Serialize)]
struct VerifyOutput {
    max: u64,
    lmax: i64,
    passed: bool,
    families: Vec<FamilyReport>,
}

fn guard_override() -> Result<Option<u64>, Error> {
    match std::env::var("COLORFACT_GUARD") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::Usage(format!(
                "COLORFACT_GUARD must be a non-negative integer, got '{v}'"
            ))
        }),
        Err(_) => Ok(None),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

fn table_rows(
    family: &CountFamily,
    method: Option<Method>,
    slice: Slice,
    max: u64,
) -> Result<Vec<TableRow>, Error> {
    let values: Vec<BigInt> = match slice {
        Slice::All => {
            let limit = guard_override()?.unwrap_or(DEFAULT_TABLE_LIMIT);
            if max > limit {
                return Err(Error::Resource {
                    projected: max.to_string(),
                    limit,
                });
            }
            sequence(family, method, max)?.into_values()
        }
        Slice::PrimePowers => {
            prime_power_slice(family, method, u32::try_from(max).unwrap_or(u32::MAX))?
        }
        Slice::Primorials => {
            primorial_slice(family, method, u32::try_from(max).unwrap_or(u32::MAX))?
        }
    };
    Ok(values
        .into_iter()
        .zip(1..)
        .map(|(v, index)| TableRow {
            index,
            value: v.to_string(),
        })
        .collect())
}

fn render_table(out: &TableOutput, format: TableFormat) -> String {
    let mut s = String::new();
    match format {
        TableFormat::Json => s = to_json(out) + "\n",
        TableFormat::Bfile => out
            .rows
            .iter()
            .for_each(|r| s += &format!("{} {}\n", r.index, r.value)),
        TableFormat::Csv => {
            s += match out.slice {
                Slice::All => "n,value\n",
                _ => "m,value\n",
            };
            out.rows
                .iter()
                .for_each(|r| s += &format!("{},{}\n", r.index, r.value));
        }
        TableFormat::Text => {
            let arg = match out.slice {
                Slice::All => "n",
                Slice::PrimePowers => "2^m",
                Slice::Primorials => "Q_m",
            };
            s += &format!("# {} at {arg}\n", out.family);
            out.rows
                .iter()
                .for_each(|r| s += &format!("{:>6}  {}\n", r.index, r.value));
        }
    }
    s
}

fn run(cli: Cli, stdout: &mut impl Write) -> Result<ExitCode, Error> {
    if let Some(limit) = guard_override()? {
        set_work_limit(limit);
    }
    let mut emit = |s: String| {
        // A closed pipe is not an error worth reporting.
        let _ = stdout.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Compute {
            family: args,
            n,
            format,
        } => {
            let family = args.family()?;
            let value = eval_by_signature(&family, args.method, &factorize(n)?)?;
            emit(match format {
                ValueFormat::Text => format!("{value}\n"),
                ValueFormat::Json => {
                    to_json(&ComputeOutput {
                        family,
                        method: args.method,
                        n,
                        value: value.to_string(),
                    }) + "\n"
                }
            });
        }
        Command::Table {
            family: args,
            max,
            format,
            slice,
        } => {
            let family = args.family()?;
            let rows = table_rows(&family, args.method, slice, max)?;
            emit(render_table(
                &TableOutput {
                    family,
                    method: args.method,
                    slice,
                    rows,
                },
                format,
            ));
        }
        Command::Enumerate {
            n,
            l,
            ordered,
            distinct,
            exact,
            format,
        } => {
            let flags = Flags {
                ordered,
                distinct,
                exact,
            };
            let guard = guard_override()?.unwrap_or(DEFAULT_GUARD);
            let list = enum_colored(n, l, flags, guard)?;
            let lines: Vec<String> = list.iter().map(ToString::to_string).collect();
            emit(match format {
                ValueFormat::Text => lines.iter().map(|l| format!("{l}\n")).collect(),
                ValueFormat::Json => {
                    to_json(&EnumerateOutput {
                        n,
                        l,
                        flags,
                        count: lines.len(),
                        factorizations: lines,
                    }) + "\n"
                }
            });
        }
        Command::Verify { max, lmax, format } => {
            let families = FamilyKind::ALL
                .into_iter()
                .map(|kind| cross_validate(kind, max, lmax))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = families.iter().all(FamilyReport::passed);
            match format {
                ValueFormat::Json => emit(
                    to_json(&VerifyOutput {
                        max,
                        lmax,
                        passed,
                        families,
                    }) + "\n",
                ),
                ValueFormat::Text => {
                    for r in &families {
                        emit(match r.mismatches.first() {
                            None => format!("PASS {:<4} {} checks\n", r.kind.alias(), r.checks),
                            Some(m) => format!(
                                "FAIL {:<4} {} of {} checks; first: {} {:?} n={} got {} expected {}\n",
                                r.kind.alias(),
                                r.mismatches.len(),
                                r.checks,
                                m.family,
                                m.method,
                                m.n,
                                m.got,
                                m.expected
                            ),
                        });
                    }
                }
            }
            if !passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Asymptotic { l, x, format } => {
            let max_x = guard_override()?.unwrap_or(MAX_X);
            let r = average_order_report_guarded(l, x, max_x)?;
            emit(match format {
                ValueFormat::Json => to_json(&r) + "\n",
                ValueFormat::Text => format!(
                    "l          {}\nx          {}\nsum        {}\nbeta       {:.12}\nalpha      {:.12}\n\
                     empirical  {:.6}\npredicted  {:.6}\nratio      {:.6}\n",
                    r.l, r.x, r.sum, r.beta, r.alpha, r.empirical, r.predicted, r.ratio
                ),
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli, &mut io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => 3,
                Error::Inconsistency(_) => 1,
                Error::Domain(_) | Error::Usage(_) => 2,
            })
        }
    }
}
