//! Exhaustive classification of integer pairs over a box, the
//! non-dominant-pair growth statistic, and the density scans feeding the
//! primitive-root pipeline.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::uarith::{isqrt_u64, rem_big_u64};
use crate::arith::{
    mult_order, primes_in_range, squarefree_kernel, val_of_power_minus_one, PrimePower, Rational,
};
use crate::criterion::{classify_pair_counted, witness_at, PairClass};
use crate::error::{Error, Result};
use crate::symbols::{legendre, SymbolValue};

/// Column layout of census CSV output.
pub const CSV_HEADER: &str = "alpha,beta,class,witness_q,witness_k,primes_tried,micros";

/// Settings for a census run.
#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Box radius: pairs range over [-n, n] without -1, 0, 1.
    pub n: i64,
    /// Witness search bound handed to the classifier.
    pub q_bound: u64,
    /// Worker threads.
    pub jobs: usize,
    /// Whether the micros column carries real timings (breaks byte-level
    /// reproducibility between runs; off by default).
    pub timings: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            n: 1000,
            q_bound: 10_000,
            jobs: 1,
            timings: false,
        }
    }
}

/// One classified pair.
#[derive(Clone, Debug)]
pub struct CensusRecord {
    pub alpha: i64,
    pub beta: i64,
    pub class: PairClass,
    pub witness_q: Option<u64>,
    pub primes_tried: u64,
    pub elapsed: Duration,
}

/// Exact counts for a completed census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub n: i64,
    pub total_pairs: u64,
    pub special: u64,
    pub nonspecial_square: u64,
    pub nonspecial_samefield: u64,
    pub undetermined: u64,
    pub max_witness_q: Option<u64>,
    /// Structurally non-dominant pairs divided by n^(3/2) * ln n.
    pub nonspecial_ratio: f64,
}

/// One row of the growth statistic for structurally non-dominant pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeRow {
    pub n: u64,
    /// Pairs with alpha a square or with matching kernels.
    pub nonspecial_count: u64,
    /// nonspecial_count / (n^(3/2) * ln n).
    pub ratio: f64,
    /// Pairs whose alpha is a positive square: (isqrt(n) - 1) * (2n - 2).
    pub square_alpha_pairs: u64,
}

/// Density of midrange primes q at which beta is a quadratic residue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub beta: i64,
    pub n: u64,
    pub qualifying_primes: u64,
    /// sqrt(n) / (4 ln n).
    pub threshold: f64,
    pub passes: bool,
}

/// Result of the primitive-root route to a witness prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub alpha: i64,
    pub p_alpha_size: u64,
    pub wieferich_ok_q: Option<u64>,
    pub special_via_pipeline: bool,
}

/// The census domain for one coordinate: [-n, -2] then [2, n], ascending.
pub fn census_values(n: i64) -> Vec<i64> {
    (-n..=-2).chain(2..=n).collect()
}

fn validate_options(opts: &CensusOptions) -> Result<()> {
    if opts.n < 2 {
        return Err(Error::InvalidArgument(format!(
            "census box needs n >= 2, got {}",
            opts.n
        )));
    }
    if opts.q_bound < 3 {
        return Err(Error::InvalidArgument(format!(
            "q_bound must be at least 3, got {}",
            opts.q_bound
        )));
    }
    if opts.jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be at least 1".into()));
    }
    Ok(())
}

/// Classifies every ordered pair and streams CSV rows in row-major order
/// (alpha ascending, then beta ascending), regardless of scheduling.
pub fn run_census<W: Write>(opts: &CensusOptions, out: &mut W) -> Result<CensusSummary> {
    validate_options(opts)?;
    let values = census_values(opts.n);
    writeln!(out, "{CSV_HEADER}")?;
    let mut tally = Tally::default();
    census_body(opts, &values, 0, &mut tally, out)?;
    out.flush()?;
    Ok(tally.into_summary(opts.n, values.len() as u64 * values.len() as u64))
}

/// Continues an interrupted census from its partial CSV file: validates
/// the header and every complete row, drops a trailing partial line, and
/// appends the remaining rows. The finished file is byte-identical to a
/// fresh run's output.
pub fn resume_census(opts: &CensusOptions, path: &Path) -> Result<CensusSummary> {
    validate_options(opts)?;
    let values = census_values(opts.n);
    let width = values.len() as u64;
    let total = width * width;

    let mut reader = BufReader::new(std::fs::File::open(path)?);
    let mut line = String::new();
    let nread = reader.read_line(&mut line)?;
    if nread == 0 || !line.ends_with('\n') || line.trim_end() != CSV_HEADER {
        return Err(Error::Parse(format!(
            "{} does not start with the census header",
            path.display()
        )));
    }
    let mut keep: u64 = nread as u64;
    let mut tally = Tally::default();
    let mut rows: u64 = 0;
    loop {
        line.clear();
        let nread = reader.read_line(&mut line)?;
        if nread == 0 || !line.ends_with('\n') {
            break; // end of file, or a partial row to be recomputed
        }
        if rows == total {
            return Err(Error::Parse(format!(
                "{} has more rows than a census at n = {}",
                path.display(),
                opts.n
            )));
        }
        let expected = (
            values[(rows / width) as usize],
            values[(rows % width) as usize],
        );
        apply_parsed_row(line.trim_end(), expected, &mut tally)?;
        keep += nread as u64;
        rows += 1;
    }
    drop(reader);

    let mut file = OpenOptions::new().read(true).write(true).open(path)?;
    file.set_len(keep)?;
    file.seek(SeekFrom::End(0))?;
    let mut out = std::io::BufWriter::new(file);
    census_body(opts, &values, rows, &mut tally, &mut out)?;
    out.flush()?;
    Ok(tally.into_summary(opts.n, total))
}

/// Classifies rows `>= start` (by pair index) and writes them to `out`,
/// farming alpha-rows out to the worker pool in order-preserving batches.
fn census_body<W: Write>(
    opts: &CensusOptions,
    values: &[i64],
    start: u64,
    tally: &mut Tally,
    out: &mut W,
) -> Result<()> {
    let width = values.len() as u64;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let batch = (opts.jobs * 2).max(1);
    let mut row_index = (start / width) as usize;
    while row_index < values.len() {
        let end = (row_index + batch).min(values.len());
        let chunk = &values[row_index..end];
        let results: Vec<Result<Vec<CensusRecord>>> =
            pool.install(|| chunk.par_iter().map(|&alpha| census_row(alpha, values, opts)).collect());
        for row in results {
            for (j, rec) in row?.into_iter().enumerate() {
                let idx = row_index as u64 * width + j as u64;
                if idx < start {
                    continue; // already present in the resumed file
                }
                tally.add_record(&rec);
                write_row(out, &rec, opts.timings)?;
            }
            row_index += 1;
        }
    }
    Ok(())
}

fn census_row(alpha: i64, values: &[i64], opts: &CensusOptions) -> Result<Vec<CensusRecord>> {
    let a = Rational::from_integer(alpha).expect("census values exclude 0 and +-1");
    let mut out = Vec::with_capacity(values.len());
    for &beta in values {
        let b = Rational::from_integer(beta).expect("census values exclude 0 and +-1");
        let started = Instant::now();
        let (class, tried) = match classify_pair_counted(&a, &b, opts.q_bound) {
            Ok(pair) => pair,
            // An unfactorable value cannot be classified; report it as
            // undetermined rather than aborting the sweep.
            Err(Error::FactorizationLimit { .. }) => (
                PairClass::Undetermined {
                    q_bound: opts.q_bound,
                    primes_tried: 0,
                },
                0,
            ),
            Err(e) => return Err(e),
        };
        let witness_q = match &class {
            PairClass::Special { witness } => Some(witness.q),
            _ => None,
        };
        out.push(CensusRecord {
            alpha,
            beta,
            class,
            witness_q,
            primes_tried: tried,
            elapsed: started.elapsed(),
        });
    }
    Ok(out)
}

fn write_row<W: Write>(out: &mut W, rec: &CensusRecord, timings: bool) -> std::io::Result<()> {
    let (wq, wk) = match &rec.class {
        PairClass::Special { witness } => (witness.q.to_string(), witness.k.to_string()),
        _ => (String::new(), String::new()),
    };
    let micros = if timings { rec.elapsed.as_micros() } else { 0 };
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        rec.alpha,
        rec.beta,
        rec.class.label(),
        wq,
        wk,
        rec.primes_tried,
        micros
    )
}

/// Validates one CSV data row against the pair it must describe and folds
/// it into the running counts.
fn apply_parsed_row(line: &str, expected: (i64, i64), tally: &mut Tally) -> Result<()> {
    let bad = |what: &str| Error::Parse(format!("census row {line:?}: {what}"));
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 7 {
        return Err(bad("expected 7 fields"));
    }
    let alpha: i64 = fields[0].parse().map_err(|_| bad("bad alpha"))?;
    let beta: i64 = fields[1].parse().map_err(|_| bad("bad beta"))?;
    if (alpha, beta) != expected {
        return Err(bad(&format!(
            "out of sequence, expected pair ({}, {})",
            expected.0, expected.1
        )));
    }
    let witness_q = match fields[3] {
        "" => None,
        s => Some(s.parse::<u64>().map_err(|_| bad("bad witness_q"))?),
    };
    if !fields[4].is_empty() {
        fields[4].parse::<u64>().map_err(|_| bad("bad witness_k"))?;
    }
    fields[5].parse::<u64>().map_err(|_| bad("bad primes_tried"))?;
    fields[6].parse::<u64>().map_err(|_| bad("bad micros"))?;
    match fields[2] {
        "special" if witness_q.is_some() => tally.special(witness_q.unwrap()),
        "special" => return Err(bad("special row without witness_q")),
        "nonspecial_square" => tally.square += 1,
        "nonspecial_samefield" => tally.samefield += 1,
        "undetermined" => tally.undetermined += 1,
        other => return Err(bad(&format!("unknown class {other:?}"))),
    }
    Ok(())
}

#[derive(Default)]
struct Tally {
    special_count: u64,
    square: u64,
    samefield: u64,
    undetermined: u64,
    max_q: Option<u64>,
}

impl Tally {
    fn special(&mut self, q: u64) {
        self.special_count += 1;
        self.max_q = Some(self.max_q.map_or(q, |m| m.max(q)));
    }

    fn add_record(&mut self, rec: &CensusRecord) {
        match &rec.class {
            PairClass::Special { witness } => self.special(witness.q),
            PairClass::NonSpecialSquare => self.square += 1,
            PairClass::NonSpecialSameField { .. } => self.samefield += 1,
            PairClass::Undetermined { .. } => self.undetermined += 1,
        }
    }

    fn into_summary(self, n: i64, total_pairs: u64) -> CensusSummary {
        let nonspecial = self.square + self.samefield;
        CensusSummary {
            n,
            total_pairs,
            special: self.special_count,
            nonspecial_square: self.square,
            nonspecial_samefield: self.samefield,
            undetermined: self.undetermined,
            max_witness_q: self.max_q,
            nonspecial_ratio: nonspecial as f64 / scale(n as u64),
        }
    }
}

/// The growth scale n^(3/2) * ln n.
fn scale(n: u64) -> f64 {
    (n as f64).powf(1.5) * (n as f64).ln()
}

/// Counts structurally non-dominant pairs (alpha a square, or kernels
/// equal) for each n in the grid, by kernel bookkeeping alone — no
/// witness search.
pub fn nonspecial_shape_statistic(grid: &[u64]) -> Result<Vec<ShapeRow>> {
    let mut out = Vec::with_capacity(grid.len());
    for &n in grid {
        if n < 4 {
            return Err(Error::InvalidArgument(format!(
                "shape statistic needs n >= 4, got {n}"
            )));
        }
        let width = 2 * n - 2;
        // Kernels of 2..=n; each negative value has the negated kernel.
        let mut counts: HashMap<i64, u64> = HashMap::new();
        for v in 2..=n as i64 {
            let kernel = squarefree_kernel(&Rational::from_integer(v).unwrap())?
                .to_i64()
                .expect("kernel of a small integer");
            *counts.entry(kernel).or_insert(0) += 1;
            *counts.entry(-kernel).or_insert(0) += 1;
        }
        let squares = counts.get(&1).copied().unwrap_or(0);
        debug_assert_eq!(squares, isqrt_u64(n) - 1);
        let same_kernel: u64 = counts
            .iter()
            .filter(|(&kernel, _)| kernel != 1)
            .map(|(_, &c)| c * c)
            .sum();
        let nonspecial_count = squares * width + same_kernel;
        out.push(ShapeRow {
            n,
            nonspecial_count,
            ratio: nonspecial_count as f64 / scale(n),
            square_alpha_pairs: squares * width,
        });
    }
    Ok(out)
}

/// Primes in the window (sqrt(n)/2, sqrt(n)], by exact integer bounds.
fn midrange_primes(n: u64) -> Result<Vec<u64>> {
    let hi = isqrt_u64(n);
    let lo = (hi / 2).max(2);
    let mut out = Vec::new();
    for q in primes_in_range(lo, hi)? {
        let q = q.to_u64().expect("midrange prime fits in u64");
        if 4 * q * q > n {
            out.push(q);
        }
    }
    Ok(out)
}

/// For each beta, counts midrange primes q with (beta/q) = 1 and compares
/// against the density threshold sqrt(n) / (4 ln n).
pub fn qr_density_scan(n: u64, betas: &[i64]) -> Result<Vec<HypothesisReport>> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!(
            "density scan needs n >= 16, got {n}"
        )));
    }
    let primes = midrange_primes(n)?;
    let threshold = 0.25 * (n as f64).sqrt() / (n as f64).ln();
    let mut out = Vec::with_capacity(betas.len());
    for &beta in betas {
        let b = Rational::from_integer(beta).map_err(|_| {
            Error::InvalidArgument("beta = 0 has no residue symbol".into())
        })?;
        let mut qualifying = 0u64;
        for &q in &primes {
            if legendre(&b, q)? == SymbolValue::PlusOne {
                qualifying += 1;
            }
        }
        out.push(HypothesisReport {
            beta,
            n,
            qualifying_primes: qualifying,
            threshold,
            passes: qualifying as f64 > threshold,
        });
    }
    Ok(out)
}

fn reject_census_units(alpha: i64, beta: i64) -> Result<()> {
    if matches!(alpha, -1 | 0 | 1) || matches!(beta, -1 | 0 | 1) {
        return Err(Error::InvalidArgument(
            "alpha and beta must lie outside {-1, 0, 1}".into(),
        ));
    }
    Ok(())
}

/// Midrange primes q with (beta/q) = 1 at which alpha is a primitive
/// root, ascending.
pub fn primitive_root_set(alpha: i64, n: u64, beta: i64) -> Result<Vec<u64>> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!(
            "primitive root scan needs n >= 16, got {n}"
        )));
    }
    reject_census_units(alpha, beta)?;
    let a = Rational::from_integer(alpha).unwrap();
    let b = Rational::from_integer(beta).unwrap();
    let mut out = Vec::new();
    for q in midrange_primes(n)? {
        if rem_big_u64(a.num().magnitude(), q) == 0 {
            continue; // alpha is not even a unit here
        }
        if legendre(&b, q)? != SymbolValue::PlusOne {
            continue;
        }
        let pp = PrimePower::from_u64(q, 1)?;
        let r = crate::arith::reduce_mod(&a, &pp)?;
        let ord = mult_order(&r, &pp)?
            .to_u64()
            .expect("order below q fits in u64");
        if ord == q - 1 {
            out.push(q);
        }
    }
    Ok(out)
}

/// Runs the primitive-root route: scan P(alpha) for the first q whose
/// base-q valuation of alpha^(q-1) - 1 is exactly 1; such a q is
/// automatically a witness for (alpha, beta), and this is asserted.
pub fn pipeline_check(alpha: i64, beta: i64, n: u64) -> Result<PipelineReport> {
    let qs = primitive_root_set(alpha, n, beta)?;
    pipeline_check_over(alpha, beta, &qs)
}

/// As [`pipeline_check`] but over an explicit candidate list, which must
/// consist of primes satisfying the P(alpha) conditions for this pair.
pub fn pipeline_check_over(alpha: i64, beta: i64, qs: &[u64]) -> Result<PipelineReport> {
    reject_census_units(alpha, beta)?;
    let a = Rational::from_integer(alpha).unwrap();
    let b = Rational::from_integer(beta).unwrap();
    let mut wieferich_ok_q = None;
    for &q in qs {
        if val_of_power_minus_one(&a, q - 1, q)? == 1 {
            // A primitive root with squarefree alpha^(q-1) - 1 satisfies
            // every witness condition; failure here is a logic error.
            let witness = witness_at(&a, &b, q)?;
            assert!(
                witness.is_some(),
                "q = {q} passed the pipeline filters but is not a witness for ({alpha}, {beta})"
            );
            wieferich_ok_q = Some(q);
            break;
        }
    }
    Ok(PipelineReport {
        alpha,
        p_alpha_size: qs.len() as u64,
        wieferich_ok_q,
        special_via_pipeline: wieferich_ok_q.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::classify_pair;

    #[test]
    fn census_values_examples() {
        assert_eq!(census_values(2), vec![-2, 2]);
        assert_eq!(census_values(3), vec![-3, -2, 2, 3]);
        let v = census_values(10);
        assert_eq!(v.len(), 18);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(!v.contains(&0) && !v.contains(&1) && !v.contains(&-1));
    }

    #[test]
    fn smallest_census_table_is_exact() {
        let opts = CensusOptions { n: 2, q_bound: 100, jobs: 1, timings: false };
        let mut buf = Vec::new();
        let summary = run_census(&opts, &mut buf).unwrap();
        let expected = "\
alpha,beta,class,witness_q,witness_k,primes_tried,micros
-2,-2,nonspecial_samefield,,,0,0
-2,2,special,7,2,3,0
2,-2,special,3,0,1,0
2,2,nonspecial_samefield,,,0,0
";
        assert_eq!(String::from_utf8(buf).unwrap(), expected);
        assert_eq!(summary.n, 2);
        assert_eq!(summary.total_pairs, 4);
        assert_eq!(summary.special, 2);
        assert_eq!(summary.nonspecial_square, 0);
        assert_eq!(summary.nonspecial_samefield, 2);
        assert_eq!(summary.undetermined, 0);
        assert_eq!(summary.max_witness_q, Some(7));
        let expect_ratio = 2.0 / (2.0f64.powf(1.5) * 2.0f64.ln());
        assert!((summary.nonspecial_ratio - expect_ratio).abs() < 1e-15);
    }

    #[test]
    fn summary_counts_partition_the_box() {
        for n in [2i64, 3, 5, 8] {
            let opts = CensusOptions { n, q_bound: 1000, jobs: 1, timings: false };
            let mut buf = Vec::new();
            let s = run_census(&opts, &mut buf).unwrap();
            let width = (2 * n - 2) as u64;
            assert_eq!(s.total_pairs, width * width);
            assert_eq!(
                s.special + s.nonspecial_square + s.nonspecial_samefield + s.undetermined,
                s.total_pairs,
                "n = {n}"
            );
            assert_eq!(s.undetermined, 0, "n = {n}");
        }
    }

    #[test]
    fn parallel_runs_are_byte_identical() {
        let mut single = Vec::new();
        let mut multi = Vec::new();
        let s1 = run_census(
            &CensusOptions { n: 6, q_bound: 1000, jobs: 1, timings: false },
            &mut single,
        )
        .unwrap();
        let s2 = run_census(
            &CensusOptions { n: 6, q_bound: 1000, jobs: 4, timings: false },
            &mut multi,
        )
        .unwrap();
        assert_eq!(single, multi);
        assert_eq!(s1, s2);
    }

    #[test]
    fn census_rows_agree_with_direct_classification() {
        let opts = CensusOptions { n: 7, q_bound: 1000, jobs: 2, timings: false };
        let values = census_values(opts.n);
        for &alpha in &values {
            let recs = census_row(alpha, &values, &opts).unwrap();
            for rec in recs {
                let direct = classify_pair(
                    &Rational::from_integer(rec.alpha).unwrap(),
                    &Rational::from_integer(rec.beta).unwrap(),
                    opts.q_bound,
                )
                .unwrap();
                assert_eq!(rec.class, direct, "({}, {})", rec.alpha, rec.beta);
            }
        }
    }

    #[test]
    fn resume_reproduces_a_fresh_run_bit_for_bit() {
        let opts = CensusOptions { n: 5, q_bound: 1000, jobs: 1, timings: false };
        let mut full = Vec::new();
        let full_summary = run_census(&opts, &mut full).unwrap();

        // Cut the file mid-row around 60% and resume.
        let cut = full.len() * 6 / 10;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("partial.csv");
        std::fs::write(&path, &full[..cut]).unwrap();
        let resumed_summary = resume_census(&opts, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), full);
        assert_eq!(resumed_summary, full_summary);

        // Resume of a complete file is a no-op with the same summary.
        let again = resume_census(&opts, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), full);
        assert_eq!(again, full_summary);
    }

    #[test]
    fn resume_rejects_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let opts = CensusOptions { n: 5, q_bound: 1000, jobs: 1, timings: false };

        let path = dir.path().join("empty.csv");
        std::fs::write(&path, "").unwrap();
        assert!(matches!(resume_census(&opts, &path), Err(Error::Parse(_))));

        let path = dir.path().join("badheader.csv");
        std::fs::write(&path, "alpha,beta\n").unwrap();
        assert!(matches!(resume_census(&opts, &path), Err(Error::Parse(_))));

        // Rows from a different box size fail the sequence check.
        let path = dir.path().join("wrongn.csv");
        let mut other = Vec::new();
        run_census(
            &CensusOptions { n: 3, q_bound: 1000, jobs: 1, timings: false },
            &mut other,
        )
        .unwrap();
        std::fs::write(&path, &other).unwrap();
        assert!(matches!(resume_census(&opts, &path), Err(Error::Parse(_))));

        let path = dir.path().join("missing.csv");
        assert!(matches!(resume_census(&opts, &path), Err(Error::Io(_))));
    }

    #[test]
    fn shape_statistic_matches_enumeration_fixtures() {
        let rows = nonspecial_shape_statistic(&[4, 20]).unwrap();
        assert_eq!(rows[0].n, 4);
        assert_eq!(rows[0].nonspecial_count, 11);
        assert_eq!(rows[0].square_alpha_pairs, 6);
        assert_eq!(rows[1].n, 20);
        assert_eq!(rows[1].nonspecial_count, 175);
        assert_eq!(rows[1].square_alpha_pairs, (4 - 1) * (2 * 20 - 2));
        assert!((rows[1].ratio - 0.6531155996764522).abs() < 1e-12);
        assert!(nonspecial_shape_statistic(&[3]).is_err());
    }

    #[test]
    fn shape_statistic_agrees_with_a_real_census() {
        // The kernel bookkeeping must match actually classifying the box.
        let opts = CensusOptions { n: 12, q_bound: 1000, jobs: 1, timings: false };
        let mut buf = Vec::new();
        let summary = run_census(&opts, &mut buf).unwrap();
        let row = &nonspecial_shape_statistic(&[12]).unwrap()[0];
        assert_eq!(
            row.nonspecial_count,
            summary.nonspecial_square + summary.nonspecial_samefield
        );
        assert_eq!(summary.undetermined, 0);
    }

    #[test]
    fn shape_counts_grow_with_n() {
        let rows = nonspecial_shape_statistic(&[4, 8, 16, 32, 64]).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[0].nonspecial_count < pair[1].nonspecial_count);
        }
        for row in &rows {
            assert!(row.ratio > 0.0 && row.ratio.is_finite());
            assert!(row.square_alpha_pairs <= row.nonspecial_count);
        }
    }

    #[test]
    fn density_scan_fixtures_at_ten_thousand() {
        let reports = qr_density_scan(10_000, &[2, 3, 4]).unwrap();
        assert_eq!(reports[0].qualifying_primes, 5);
        assert_eq!(reports[1].qualifying_primes, 6);
        assert_eq!(reports[2].qualifying_primes, 10);
        for r in &reports {
            assert!((r.threshold - 2.714340511895324).abs() < 1e-12);
            assert!(r.passes);
            assert_eq!(r.passes, r.qualifying_primes as f64 > r.threshold);
        }
        assert!(qr_density_scan(15, &[2]).is_err());
        assert!(qr_density_scan(10_000, &[0]).is_err());
    }

    #[test]
    fn density_scan_window_is_exact() {
        // (sqrt(n)/2, sqrt(n)] for n = 10^4 is (50, 100].
        let primes = midrange_primes(10_000).unwrap();
        assert_eq!(primes, vec![53, 59, 61, 67, 71, 73, 79, 83, 89, 97]);
        // A perfect-square beta qualifies at every prime in the window.
        let all = qr_density_scan(10_000, &[4]).unwrap();
        assert_eq!(all[0].qualifying_primes, primes.len() as u64);
    }

    #[test]
    fn primitive_root_set_examples() {
        assert_eq!(primitive_root_set(2, 10_000, 3).unwrap(), vec![59, 61, 83]);
        // Squares are never primitive roots.
        assert_eq!(primitive_root_set(4, 10_000, 3).unwrap(), Vec::<u64>::new());
        assert!(primitive_root_set(2, 10, 3).is_err());
        assert!(primitive_root_set(1, 10_000, 3).is_err());
    }

    #[test]
    fn pipeline_examples() {
        let report = pipeline_check(2, 3, 10_000).unwrap();
        assert_eq!(
            report,
            PipelineReport {
                alpha: 2,
                p_alpha_size: 3,
                wieferich_ok_q: Some(59),
                special_via_pipeline: true,
            }
        );
        // Consistency: the classifier also finds the pair special, via its
        // own (smaller) witness.
        assert!(matches!(
            classify_pair(&"2".parse().unwrap(), &"3".parse().unwrap(), 10_000).unwrap(),
            PairClass::Special { .. }
        ));

        let square = pipeline_check(4, 3, 10_000).unwrap();
        assert_eq!(square.p_alpha_size, 0);
        assert!(!square.special_via_pipeline);
        assert!(square.wieferich_ok_q.is_none());
    }

    #[test]
    fn pipeline_skips_wieferich_primes() {
        // 2^1092 = 1 mod 1093^2, so the valuation-1 filter rejects 1093.
        let report = pipeline_check_over(2, 3, &[1093]).unwrap();
        assert_eq!(report.wieferich_ok_q, None);
        assert!(!report.special_via_pipeline);
        assert_eq!(report.p_alpha_size, 1);
    }

    #[test]
    fn csv_rows_round_trip_through_the_parser() {
        let opts = CensusOptions { n: 4, q_bound: 1000, jobs: 1, timings: false };
        let values = census_values(opts.n);
        for &alpha in &values {
            for rec in census_row(alpha, &values, &opts).unwrap() {
                let mut buf = Vec::new();
                write_row(&mut buf, &rec, false).unwrap();
                let line = String::from_utf8(buf).unwrap();
                let mut tally = Tally::default();
                apply_parsed_row(line.trim_end(), (rec.alpha, rec.beta), &mut tally).unwrap();
                let total = tally.special_count + tally.square + tally.samefield + tally.undetermined;
                assert_eq!(total, 1, "row {line:?}");
            }
        }
        let mut tally = Tally::default();
        assert!(apply_parsed_row("2,2,special,,,1,0", (2, 2), &mut tally).is_err());
        assert!(apply_parsed_row("2,2,bogus,,,1,0", (2, 2), &mut tally).is_err());
        assert!(apply_parsed_row("2,3,special,7,1,1,0", (2, 2), &mut tally).is_err());
        assert!(apply_parsed_row("2,2", (2, 2), &mut tally).is_err());
    }
}
