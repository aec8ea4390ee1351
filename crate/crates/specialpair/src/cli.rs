//! Command-line front end: single-pair checks, witness tables, census
//! runs, and the density/pipeline scans, with machine-readable output.
//!
//! Exit codes: 0 success (pair special where applicable), 1 usage or
//! runtime error, 2 pair proved structurally non-dominant (or no
//! witnesses found), 3 search exhausted without a verdict.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::Rational;
use crate::census::{
    pipeline_check, qr_density_scan, resume_census, run_census, CensusOptions, CensusSummary,
};
use crate::criterion::{classify_pair, find_special_primes, PairClass};
use crate::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "specialpair",
    version,
    about = "Decide whether a pair of rationals has dominant multiplicative order at infinitely many primes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one pair; prints the class as JSON.
    ///
    /// Exits 0 when a witness prime certifies the pair, 2 when the pair is
    /// structurally non-dominant, 3 when the search bound is exhausted.
    Check {
        /// First rational, as "a" or "a/b".
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        /// Second rational, as "a" or "a/b".
        #[arg(allow_hyphen_values = true)]
        beta: String,
        /// Witness search bound.
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
    },
    /// List primes at which order dominance is directly visible.
    ///
    /// Exits 2 when no such prime is found below the bound.
    Witnesses {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        /// Prime search bound.
        #[arg(long, default_value_t = 100_000)]
        pmax: u64,
        /// Stop after this many witnesses.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Classify every pair with 1 < |alpha|, |beta| <= nmax.
    ///
    /// Rows stream as CSV to --out (or stdout); the summary JSON goes to
    /// stdout (or stderr when rows occupy stdout). Exits 3 if any pair is
    /// left undetermined.
    Census {
        #[arg(long)]
        nmax: i64,
        /// Witness search bound per pair.
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        /// Worker threads (defaults to available cores).
        #[arg(long, env = "SPECIALPAIR_JOBS")]
        jobs: Option<usize>,
        /// Write rows to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue an interrupted run from the --out file.
        #[arg(long, requires = "out")]
        resume: bool,
        /// Record real per-pair timings in the micros column (breaks
        /// byte-level reproducibility).
        #[arg(long)]
        timings: bool,
    },
    /// Count midrange primes where beta is a quadratic residue, per beta.
    Hypothesis {
        #[arg(long)]
        nmax: u64,
        /// A beta value; repeatable.
        #[arg(long = "beta")]
        betas: Vec<i64>,
        /// Inclusive range of betas, as "LO:HI".
        #[arg(long = "beta-range")]
        beta_range: Option<String>,
    },
    /// Certify a pair through the primitive-root / valuation-1 route.
    Pipeline {
        #[arg(long)]
        nmax: u64,
        #[arg(allow_hyphen_values = true)]
        alpha: i64,
        #[arg(allow_hyphen_values = true)]
        beta: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Parses arguments from the environment, runs the selected command, and
/// returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn parse_rational(name: &str, text: &str) -> Result<Rational> {
    text.parse().map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("argument {name} = {text:?}: {msg}")),
        other => other,
    })
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Check { alpha, beta, qmax } => {
            let a = parse_rational("alpha", &alpha)?;
            let b = parse_rational("beta", &beta)?;
            let class = classify_pair(&a, &b, qmax)?;
            println!("{}", serde_json::to_string(&class)?);
            Ok(match class {
                PairClass::Special { .. } => 0,
                PairClass::NonSpecialSquare | PairClass::NonSpecialSameField { .. } => 2,
                PairClass::Undetermined { .. } => 3,
            })
        }
        Command::Witnesses { alpha, beta, pmax, count, format } => {
            let a = parse_rational("alpha", &alpha)?;
            let b = parse_rational("beta", &beta)?;
            let witnesses = find_special_primes(&a, &b, pmax, count)?;
            match format {
                Format::Csv => {
                    println!("p,ord_alpha,ord_beta,ratio,k");
                    for w in &witnesses {
                        println!(
                            "{},{},{},{},{}",
                            w.p,
                            w.ord_alpha,
                            w.ord_beta,
                            w.ord_alpha / w.ord_beta,
                            w.k
                        );
                    }
                }
                Format::Json => println!("{}", serde_json::to_string(&witnesses)?),
            }
            Ok(if witnesses.is_empty() { 2 } else { 0 })
        }
        Command::Census { nmax, qmax, jobs, out, resume, timings } => {
            let jobs = jobs.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            });
            let opts = CensusOptions { n: nmax, q_bound: qmax, jobs, timings };
            let summary = match &out {
                Some(path) if resume => resume_census(&opts, path)?,
                Some(path) => {
                    let file = std::fs::File::create(path)?;
                    let mut writer = std::io::BufWriter::new(file);
                    run_census(&opts, &mut writer)?
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = std::io::BufWriter::new(stdout.lock());
                    let summary = run_census(&opts, &mut lock)?;
                    lock.flush()?;
                    summary
                }
            };
            report_summary(&summary, out.is_none())?;
            Ok(if summary.undetermined > 0 { 3 } else { 0 })
        }
        Command::Hypothesis { nmax, betas, beta_range } => {
            let betas = collect_betas(betas, beta_range.as_deref())?;
            let reports = qr_density_scan(nmax, &betas)?;
            println!("{}", serde_json::to_string(&reports)?);
            Ok(0)
        }
        Command::Pipeline { nmax, alpha, beta } => {
            let report = pipeline_check(alpha, beta, nmax)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(0)
        }
    }
}

fn report_summary(summary: &CensusSummary, rows_on_stdout: bool) -> Result<()> {
    let json = serde_json::to_string(summary)?;
    if rows_on_stdout {
        eprintln!("{json}");
    } else {
        println!("{json}");
    }
    Ok(())
}

/// Merges explicit --beta values with an optional "LO:HI" range.
fn collect_betas(mut betas: Vec<i64>, range: Option<&str>) -> Result<Vec<i64>> {
    if let Some(range) = range {
        let (lo, hi) = range
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("--beta-range {range:?}: expected LO:HI")))?;
        let lo: i64 = lo
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("--beta-range {range:?}: bad lower bound")))?;
        let hi: i64 = hi
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("--beta-range {range:?}: bad upper bound")))?;
        if lo > hi {
            return Err(Error::Parse(format!(
                "--beta-range {range:?}: lower bound exceeds upper bound"
            )));
        }
        betas.extend(lo..=hi);
    }
    if betas.is_empty() {
        return Err(Error::InvalidArgument(
            "provide at least one --beta or a --beta-range".into(),
        ));
    }
    Ok(betas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn beta_collection() {
        assert_eq!(collect_betas(vec![5], None).unwrap(), vec![5]);
        assert_eq!(collect_betas(vec![], Some("2:5")).unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(
            collect_betas(vec![9], Some("-2:0")).unwrap(),
            vec![9, -2, -1, 0]
        );
        assert!(collect_betas(vec![], None).is_err());
        assert!(collect_betas(vec![], Some("5:2")).is_err());
        assert!(collect_betas(vec![], Some("abc")).is_err());
        assert!(collect_betas(vec![], Some("1:x")).is_err());
    }

    #[test]
    fn rational_argument_errors_name_the_argument() {
        let err = parse_rational("alpha", "x/y").unwrap_err();
        assert!(err.to_string().contains("alpha"));
        assert!(err.to_string().contains("x/y"));
    }
}
