//! `cspoly`: verify, tabulate and search for Cappell-Shaneson polynomials.
//!
//! Coefficients on the command line are listed from the leading term down,
//! so `1,0,0,-1,1` is x^4 - x + 1. Exit status: 0 on success (for `verify`,
//! the polynomial is CS), 1 when `verify` finds it is not, 2 on bad input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use cspoly::cs_core::{self, CsReport, Witness};
use cspoly::finite_field::{format_factorization, reduce_mod_p};
use cspoly::searcher::{self, SearchSpec};
use cspoly::{dioph6, families, Error, IntPoly};
use num_bigint::BigInt;
use serde_json::Value;

const BUDGET_VAR: &str = "CSPOLY_BUDGET";

#[derive(Parser)]
#[command(name = "cspoly", version, about = "Exact tools for Cappell-Shaneson polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the CS conditions for one polynomial.
    Verify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Include witness primes for failed conditions.
        #[arg(long)]
        witnesses: bool,
        /// Include the positivity verdict.
        #[arg(long)]
        positivity: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Characteristic polynomial of the k-th exterior power of the companion matrix.
    Exterior {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Signed reciprocal (-1)^n x^n f(1/x).
    Reciprocal {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Degree-6 table for q_lo <= c5 - c1 <= q_hi.
    Table {
        q_lo: i64,
        q_hi: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Shorthand for --format csv.
        #[arg(long)]
        csv: bool,
    },
    /// All degree-6 CS polynomials with c5 - c1 = q.
    Solve6 {
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Parametric families of one degree (2 to 7).
    Families {
        degree: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Exhaustive coefficient-box search.
    Search {
        #[arg(long)]
        degree: usize,
        /// `lo:hi` for every coefficient, or one `lo:hi` per coefficient c1..c(n-1).
        #[arg(long, allow_hyphen_values = true)]
        bounds: String,
        /// Linear equalities, e.g. "c1+c6=0,c2+c5=0".
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        constraints: String,
        /// Number of small primes in the mod-p filter.
        #[arg(long, default_value_t = searcher::DEFAULT_PRIME_COUNT)]
        primes: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Completed slices between checkpoint fsyncs.
        #[arg(long, default_value_t = 1)]
        checkpoint_interval: usize,
        /// Re-check every filtered candidate exactly.
        #[arg(long)]
        audit: bool,
        /// Include wall-clock figures in the report.
        #[arg(long)]
        timing: bool,
        /// Also write the survivors as CSV to this file.
        #[arg(long)]
        survivors: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Factor a polynomial over F_p.
    FactorMod {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        p: u64,
    },
}

/// Failure with a one-line diagnostic; always exit status 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, u8), Failure>;

fn parse_poly(text: &str) -> Result<IntPoly, Failure> {
    let coeffs = text
        .split(',')
        .map(|t| BigInt::from_str(t.trim()).map_err(|_| Failure(format!("bad coefficient {:?} in {text:?}", t.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.first().map_or(true, |c| *c == BigInt::from(0)) {
        return Err(Failure(format!("{text:?}: the leading coefficient must be nonzero")));
    }
    Ok(IntPoly::from_descending_big(&coeffs))
}

fn descending_csv(f: &IntPoly) -> String {
    f.descending().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn poly_out(f: &IntPoly, format: Format) -> String {
    match format {
        Format::Text => f.to_string(),
        Format::Csv => descending_csv(f),
        Format::Json => {
            let items: Vec<Value> = f.descending().iter().map(|c| Value::String(c.to_string())).collect();
            Value::Array(items).to_string()
        }
    }
}

fn verify_text(report: &CsReport, witnesses: bool, positivity: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "polynomial: {}", report.input);
    for c in &report.conditions {
        let verdict = if c.holds { "holds" } else { "fails" };
        let _ = writeln!(out, "CS_{}: det(I - wedge^{} A) = {} ({verdict})", c.k, c.k, c.det_value);
    }
    let _ = writeln!(out, "cs: {}", if report.is_cs { "yes" } else { "no" });
    if positivity {
        let _ = writeln!(out, "positive: {}", if report.is_positive { "yes" } else { "no" });
    }
    if witnesses {
        for w in report.witnesses.iter().flatten() {
            let text = match &w.witness {
                Witness::Prime { value } => format!("prime {value}"),
                Witness::RationalObstruction => "determinant 0 (not regular over Q)".to_string(),
                Witness::CompositeWitness { value } => format!("{value} (no prime factor found by trial division)"),
            };
            let _ = writeln!(out, "witness k={}: {text}", w.k);
        }
    }
    out.pop();
    out
}

fn cmd_verify(poly: &str, witnesses: bool, positivity: bool, format: Format) -> Outcome {
    let f = parse_poly(poly)?;
    let report = cs_core::verify(&f)?;
    let code = if report.is_cs { 0 } else { 1 };
    let text = match format {
        Format::Text => verify_text(&report, witnesses, positivity),
        _ => {
            let mut v: Value = serde_json::from_str(&report.to_json()).expect("report is JSON");
            let obj = v.as_object_mut().expect("report is an object");
            if !witnesses {
                obj.remove("witnesses");
            }
            if !positivity {
                obj.remove("is_positive");
            }
            serde_json::to_string_pretty(&v).expect("JSON value serializes")
        }
    };
    Ok((text, code))
}

fn cmd_table(q_lo: i64, q_hi: i64, format: Format) -> Outcome {
    let rows = dioph6::emit_table(q_lo, q_hi)?;
    Ok((table_out(&rows, format), 0))
}

fn table_out(rows: &[dioph6::TableRow], format: Format) -> String {
    match format {
        Format::Csv => dioph6::to_csv(rows).trim_end().to_string(),
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize"),
        Format::Text => rows
            .iter()
            .map(|r| format!("q={:<3} ({})  positivity: {}", r.solution.q, r.solution.entry_texts().join(", "), r.positivity))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn cmd_solve6(q: i64, format: Format) -> Outcome {
    let rows = dioph6::solve_q(q)?.into_iter().map(dioph6::table_row).collect::<cspoly::Result<Vec<_>>>()?;
    Ok((table_out(&rows, format), 0))
}

fn cmd_families(degree: usize, format: Format) -> Outcome {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&families::catalog(degree)?).expect("catalog serializes"),
        Format::Csv => families::catalog_csv(degree)?.trim_end().to_string(),
        Format::Text => families::catalog(degree)?
            .iter()
            .map(|f| format!("{:<14} ({})  positivity: {}", f.id, f.coeff_text.join(", "), f.positivity))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok((text, 0))
}

fn budget_from_env() -> Result<Option<u128>, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .replace('_', "")
            .parse()
            .map(Some)
            .map_err(|_| Failure(format!("{BUDGET_VAR}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    degree: usize,
    bounds: &str,
    constraints: &str,
    primes: usize,
    workers: usize,
    checkpoint: Option<PathBuf>,
    resume: bool,
    checkpoint_interval: usize,
    audit: bool,
    timing: bool,
    survivors: Option<PathBuf>,
    format: Format,
) -> Outcome {
    let mut parsed = searcher::parse_bounds(bounds)?;
    if parsed.len() == 1 && degree > 2 {
        parsed = vec![parsed[0]; degree - 1];
    }
    let mut spec = SearchSpec::new(degree, parsed)?;
    spec.constraints = searcher::parse_constraints(constraints)?;
    spec.primes = cspoly::primes::first_primes(primes);
    spec.workers = workers;
    spec.checkpoint_interval = checkpoint_interval;
    spec.audit = audit;
    if let Some(b) = budget_from_env()? {
        spec.budget = b;
    }
    spec.validate()?;
    let mut report = match &checkpoint {
        Some(path) => searcher::box_search_resumable(&spec, path, resume)?,
        None => searcher::box_search(&spec)?,
    };
    if !timing {
        report.timing = None;
    }
    if let Some(path) = survivors {
        std::fs::write(&path, report.survivors_csv()).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let text = match format {
        Format::Csv => report.survivors_csv().trim_end().to_string(),
        Format::Json => report.to_json(),
        Format::Text => {
            let mut out = format!(
                "scanned {} candidates of a box of volume {}; {} passed the mod-p filter; {} survivors",
                report.scanned,
                report.box_volume,
                report.filter_passed,
                report.survivors.len()
            );
            for f in &report.survivors {
                let _ = write!(out, "\n{}", descending_csv(f));
            }
            out
        }
    };
    Ok((text, 0))
}

fn cmd_factor_mod(poly: &str, p: u64) -> Outcome {
    let f = reduce_mod_p(&parse_poly(poly)?, p)?;
    let factors = f.factor()?;
    let lead = f.coeffs().last().copied().unwrap_or(0);
    let text = format_factorization(&factors);
    Ok((if lead == 1 { text } else { format!("{lead}{text}") }, 0))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { poly, witnesses, positivity, format } => cmd_verify(&poly, witnesses, positivity, format),
        Command::Exterior { poly, k, format } => {
            let f = parse_poly(&poly)?;
            Ok((poly_out(&f.exterior_power(k)?, format), 0))
        }
        Command::Reciprocal { poly, format } => {
            let f = parse_poly(&poly)?;
            Ok((poly_out(&f.signed_reciprocal()?, format), 0))
        }
        Command::Table { q_lo, q_hi, format, csv } => cmd_table(q_lo, q_hi, if csv { Format::Csv } else { format }),
        Command::Solve6 { q, format } => cmd_solve6(q, format),
        Command::Families { degree, format } => cmd_families(degree, format),
        Command::Search {
            degree,
            bounds,
            constraints,
            primes,
            workers,
            checkpoint,
            resume,
            checkpoint_interval,
            audit,
            timing,
            survivors,
            format,
        } => cmd_search(
            degree,
            &bounds,
            &constraints,
            primes,
            workers,
            checkpoint,
            resume,
            checkpoint_interval,
            audit,
            timing,
            survivors,
            format,
        ),
        Command::FactorMod { poly, p } => cmd_factor_mod(&poly, p),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, code)) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
