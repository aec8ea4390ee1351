//! End-to-end tests of the command-line binary: exit codes, golden
//! output, and stability of the JSON shapes downstream tooling parses.

use std::fs;
use std::process::{Command, Output};

use serde::Deserialize;

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specialpair"))
        .args(args)
        .env_remove("SPECIALPAIR_JOBS")
        .output()
        .expect("binary should spawn")
}

fn run_cli_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specialpair"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary should spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be utf-8")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("process should exit normally")
}

// Schema mirrors: every field the binary may emit, nothing else. A new or
// renamed field in the real output fails deserialization here.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassSchema {
    class: String,
    #[serde(default)]
    witness: Option<WitnessFieldsSchema>,
    #[serde(default)]
    d: Option<String>,
    #[serde(default)]
    q_bound: Option<u64>,
    #[serde(default)]
    primes_tried: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFieldsSchema {
    q: u64,
    k: u64,
    e: u32,
    ell: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecialPrimeSchema {
    p: u64,
    ord_alpha: u64,
    ord_beta: u64,
    k: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SummarySchema {
    n: i64,
    total_pairs: u64,
    special: u64,
    nonspecial_square: u64,
    nonspecial_samefield: u64,
    undetermined: u64,
    max_witness_q: Option<u64>,
    nonspecial_ratio: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypothesisSchema {
    beta: i64,
    n: u64,
    qualifying_primes: u64,
    threshold: f64,
    passes: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineSchema {
    alpha: i64,
    p_alpha_size: u64,
    wieferich_ok_q: Option<u64>,
    special_via_pipeline: bool,
}

const CENSUS_N2_ROWS: &str = "\
alpha,beta,class,witness_q,witness_k,primes_tried,micros
-2,-2,nonspecial_samefield,,,0,0
-2,2,special,7,2,3,0
2,-2,special,3,0,1,0
2,2,nonspecial_samefield,,,0,0
";

#[test]
fn check_special_pair_exits_zero_with_witness_json() {
    let out = run_cli(&["check", "17", "2"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "{\"class\":\"special\",\"witness\":{\"q\":7,\"k\":1,\"e\":1,\"ell\":3}}\n"
    );
    let parsed: ClassSchema = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(parsed.class, "special");
    let w = parsed.witness.expect("special class carries a witness");
    assert_eq!((w.q, w.k, w.e, w.ell), (7, 1, 1, 3));
}

#[test]
fn check_square_and_samefield_exit_two() {
    let out = run_cli(&["check", "4", "7"]);
    assert_eq!(code_of(&out), 2);
    assert_eq!(stdout_of(&out), "{\"class\":\"nonspecial_square\"}\n");
    let parsed: ClassSchema = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert!(parsed.witness.is_none() && parsed.d.is_none());

    let out = run_cli(&["check", "2", "18"]);
    assert_eq!(code_of(&out), 2);
    assert_eq!(stdout_of(&out), "{\"class\":\"nonspecial_samefield\",\"d\":\"2\"}\n");
    let parsed: ClassSchema = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(parsed.d.as_deref(), Some("2"));

    let out = run_cli(&["check", "-2", "-2"]);
    assert_eq!(code_of(&out), 2);
    assert_eq!(stdout_of(&out), "{\"class\":\"nonspecial_samefield\",\"d\":\"-2\"}\n");
}

#[test]
fn check_exhausted_search_exits_three() {
    let out = run_cli(&["check", "2", "3", "--qmax", "4"]);
    assert_eq!(code_of(&out), 3);
    assert_eq!(
        stdout_of(&out),
        "{\"class\":\"undetermined\",\"q_bound\":4,\"primes_tried\":0}\n"
    );
    let parsed: ClassSchema = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(parsed.q_bound, Some(4));
    assert_eq!(parsed.primes_tried, Some(0));
}

#[test]
fn check_rejects_units_and_bad_arguments() {
    let out = run_cli(&["check", "1", "5"]);
    assert_eq!(code_of(&out), 1);
    assert!(stdout_of(&out).is_empty());
    assert!(stderr_of(&out).contains("error:"));

    let out = run_cli(&["check", "x/y", "5"]);
    assert_eq!(code_of(&out), 1);
    let msg = stderr_of(&out);
    assert!(msg.contains("alpha"), "message should name the bad argument: {msg}");
    assert!(msg.contains("x/y"), "message should echo the bad value: {msg}");

    let out = run_cli(&["check", "17"]);
    assert_eq!(code_of(&out), 1, "missing beta is a usage error");

    let out = run_cli(&["check", "17", "2", "--no-such-flag"]);
    assert_eq!(code_of(&out), 1);

    let out = run_cli(&["frobnicate"]);
    assert_eq!(code_of(&out), 1, "unknown subcommand is a usage error");
}

#[test]
fn check_accepts_rational_arguments() {
    let out = run_cli(&["check", "25/16", "5"]);
    assert_eq!(code_of(&out), 2, "25/16 is a square");
    assert_eq!(stdout_of(&out), "{\"class\":\"nonspecial_square\"}\n");
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["census", "--help"][..], &["--version"][..]] {
        let out = run_cli(args);
        assert_eq!(code_of(&out), 0, "{args:?} should exit 0");
        assert!(!stdout_of(&out).is_empty());
    }
}

#[test]
fn witnesses_table_is_golden() {
    let out = run_cli(&["witnesses", "17", "2", "--pmax", "100"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "p,ord_alpha,ord_beta,ratio,k\n\
         7,6,3,2,1\n\
         23,22,11,2,8\n\
         31,30,5,6,6\n\
         41,40,20,2,1\n\
         97,96,48,2,25\n"
    );
}

#[test]
fn witnesses_json_respects_schema_and_count() {
    let out = run_cli(&["witnesses", "2", "3", "--pmax", "10000", "--count", "4", "--format", "json"]);
    assert_eq!(code_of(&out), 0);
    let rows: Vec<SpecialPrimeSchema> = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].p, 11);
    for row in &rows {
        assert_eq!(row.ord_alpha % row.ord_beta, 0);
        assert_eq!((row.ord_alpha / row.ord_beta) % 2, 0, "order ratio must be even");
        assert!(row.k < row.p);
    }
}

#[test]
fn witnesses_empty_result_exits_two() {
    // A square base is a quadratic residue everywhere, so no prime shows
    // the order gap this table looks for.
    let out = run_cli(&["witnesses", "4", "3", "--pmax", "1000"]);
    assert_eq!(code_of(&out), 2);
    assert_eq!(stdout_of(&out), "p,ord_alpha,ord_beta,ratio,k\n");
}

#[test]
fn census_stdout_rows_with_summary_on_stderr() {
    let out = run_cli(&["census", "--nmax", "2", "--jobs", "1"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), CENSUS_N2_ROWS);
    let summary: SummarySchema = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(summary.n, 2);
    assert_eq!(summary.total_pairs, 4);
    assert_eq!(summary.special, 2);
    assert_eq!(summary.nonspecial_samefield, 2);
    assert_eq!(summary.undetermined, 0);
    assert_eq!(summary.max_witness_q, Some(7));
}

#[test]
fn census_out_file_with_summary_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = run_cli(&["census", "--nmax", "2", "--jobs", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), CENSUS_N2_ROWS);
    let summary: SummarySchema = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(summary.total_pairs, 4);
}

#[test]
fn census_rows_identical_across_jobs_and_env_override() {
    let baseline = run_cli(&["census", "--nmax", "6", "--jobs", "1"]);
    assert_eq!(code_of(&baseline), 0);
    let with_flag = run_cli(&["census", "--nmax", "6", "--jobs", "8"]);
    assert_eq!(with_flag.stdout, baseline.stdout);
    let with_env = run_cli_env(&["census", "--nmax", "6"], "SPECIALPAIR_JOBS", "3");
    assert_eq!(with_env.stdout, baseline.stdout);

    let bad_env = run_cli_env(&["census", "--nmax", "6"], "SPECIALPAIR_JOBS", "lots");
    assert_eq!(code_of(&bad_env), 1, "non-numeric SPECIALPAIR_JOBS is a usage error");
}

#[test]
fn census_resume_completes_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let args = ["census", "--nmax", "4", "--jobs", "2", "--out"];

    let out = run_cli(&[&args[..], &[full.to_str().unwrap()]].concat());
    assert_eq!(code_of(&out), 0);
    let full_bytes = fs::read(&full).unwrap();

    // Chop mid-row to mimic an interrupted run, then resume.
    fs::write(&part, &full_bytes[..full_bytes.len() * 55 / 100]).unwrap();
    let out = run_cli(
        &[&args[..], &[part.to_str().unwrap(), "--resume"]].concat(),
    );
    assert_eq!(code_of(&out), 0);
    assert_eq!(fs::read(&part).unwrap(), full_bytes);
    let summary: SummarySchema = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(summary.total_pairs, 36);
}

#[test]
fn census_resume_requires_out() {
    let out = run_cli(&["census", "--nmax", "2", "--resume"]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("--out"));
}

#[test]
fn census_with_undetermined_rows_exits_three() {
    // qmax 3 leaves no usable witness prime for most of these pairs.
    let out = run_cli(&["census", "--nmax", "3", "--qmax", "3"]);
    assert_eq!(code_of(&out), 3);
    let summary: SummarySchema = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert!(summary.undetermined > 0);
}

#[test]
fn census_rejects_degenerate_box() {
    let out = run_cli(&["census", "--nmax", "1"]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("n >= 2"));
}

#[test]
fn hypothesis_reports_match_schema() {
    let out = run_cli(&["hypothesis", "--nmax", "10000", "--beta", "2", "--beta-range", "3:4"]);
    assert_eq!(code_of(&out), 0);
    let rows: Vec<HypothesisSchema> = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(
        rows.iter().map(|r| r.beta).collect::<Vec<_>>(),
        vec![2, 3, 4]
    );
    assert_eq!(
        rows.iter().map(|r| r.qualifying_primes).collect::<Vec<_>>(),
        vec![5, 6, 10]
    );
    for row in &rows {
        assert_eq!(row.n, 10000);
        assert!((row.threshold - 2.714340511895324).abs() < 1e-12);
        assert!(row.passes);
    }
}

#[test]
fn hypothesis_without_betas_is_an_error() {
    let out = run_cli(&["hypothesis", "--nmax", "10000"]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("--beta"));
}

#[test]
fn pipeline_report_matches_schema() {
    let out = run_cli(&["pipeline", "--nmax", "10000", "2", "3"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "{\"alpha\":2,\"p_alpha_size\":3,\"wieferich_ok_q\":59,\"special_via_pipeline\":true}\n"
    );
    let report: PipelineSchema = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(report.alpha, 2);
    assert_eq!(report.p_alpha_size, 3);
    assert_eq!(report.wieferich_ok_q, Some(59));
    assert!(report.special_via_pipeline);
}
