//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failures, 2 bad arguments or malformed
//! input, 3 search budget exhausted, 4 verification failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::BoundReport;
use crate::error::Error;
use crate::gf2::BitMatrix;
use crate::harness::{run_sweep, to_csv, write_csv, Family, SweepConfig};
use crate::schemes::{
    branch, brute_force_optimal, scheme1_adapted, scheme1_full, scr, search, BranchOptions,
    CoverScheme, SearchLimits, SearchOutcome, BRUTE_FORCE_MAX_DIM,
};
use crate::verify::{verify_cover, verify_full_space};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "klimited",
    version,
    about = "k-limited-access coding matrices over GF(2)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every bound for one (n, t, k).
    Bounds(BoundsArgs),
    /// Build a scheme and print it in scheme text format.
    Construct(ConstructArgs),
    /// Check a scheme file against a matrix file or the whole space.
    Verify(VerifyArgs),
    /// Run a benchmark sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub t: u64,
    #[arg(long)]
    pub k: u64,
    /// SCR rounds; defaults to log2(k) when k is a power of two.
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    Scheme1,
    Scheme1Adapted,
    Scr,
    Bs,
    Brute,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Search nodes examined before giving up.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_nodes: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
}

impl LimitArgs {
    fn limits(&self) -> Result<SearchLimits, Error> {
        let wall_clock = Duration::try_from_secs_f64(self.time_limit)
            .map_err(|_| Error::InvalidParameter(format!("bad time limit {}", self.time_limit)))?;
        Ok(SearchLimits {
            max_nodes: self.max_nodes,
            wall_clock,
        })
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    pub scheme: SchemeName,
    /// Matrix file with the target rows (all schemes except scheme1).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Dimension, for scheme1.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, conflicts_with = "q")]
    pub k: Option<usize>,
    /// SCR rounds (k = 2^q).
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Row orders tried per circuit search (SCR).
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Put the dependent rows themselves into the branch candidates (BS).
    #[arg(long)]
    pub include_dependents: bool,
    /// Largest dimension the brute-force oracle accepts.
    #[arg(long, default_value_t = BRUTE_FORCE_MAX_DIM)]
    pub brute_max_dim: usize,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Write the scheme here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub scheme_file: PathBuf,
    /// Matrix file with the target rows.
    #[arg(conflicts_with = "full_space", required_unless_present = "full_space")]
    pub matrix_file: Option<PathBuf>,
    /// Check every nonzero vector of this dimension instead.
    #[arg(long)]
    pub full_space: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// uniform, nested or planted:<size>.
    #[arg(long, default_value = "uniform")]
    pub family: String,
    /// Row orders tried per circuit search (SCR).
    #[arg(long, default_value_t = 10)]
    pub circuit_trials: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write 0 for elapsed times so output is byte-for-byte reproducible.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Output file, or a directory to hold sweep_T<t>_k<k>.csv; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Limit(String),
    Verify,
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Other(e.to_string()),
            Error::NotInSpan(_) | Error::NoCover(_) | Error::NotDependent => {
                Failure::Other(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<BitMatrix, Failure> {
    BitMatrix::parse(&read_file(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn need<T>(value: Option<T>, what: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("{what} is required for this scheme")))
}

/// Parses `args` (program name first) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Bounds(a) => run_bounds(a, out),
        Command::Construct(a) => run_construct(a, out, err),
        Command::Verify(a) => run_verify(a, out),
        Command::Bench(a) => run_bench(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify) => EXIT_VERIFY,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Limit(m)) => {
            let _ = writeln!(err, "limit exhausted: {m}");
            EXIT_LIMIT
        }
        Err(Failure::Other(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_FAILURE
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Other(e.to_string()))
}

fn run_bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let report = BoundReport::new(a.n, a.t, a.k, a.q)?;
    emit(
        out,
        &match a.format {
            Format::Text => report.to_text(),
            Format::Csv => report.to_csv(),
        },
    )
}

fn scr_rounds(k: Option<usize>, q: Option<u32>) -> Result<u32, Failure> {
    match (k, q) {
        (_, Some(q)) => Ok(q),
        (Some(k), None) if k.is_power_of_two() => Ok(k.trailing_zeros()),
        (Some(k), None) => Err(Failure::Usage(format!(
            "SCR works with k = 2^q only; k={k} is not a power of two"
        ))),
        (None, None) => Err(Failure::Usage("SCR needs --k or --q".into())),
    }
}

fn exhausted(level: usize) -> Failure {
    Failure::Limit(format!(
        "no answer before the budget ran out at size {level}"
    ))
}

fn run_construct(
    a: ConstructArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    if a.q.is_some() && a.scheme != SchemeName::Scr {
        return Err(Failure::Usage("--q applies to scr only".into()));
    }
    let scheme: CoverScheme = match a.scheme {
        SchemeName::Scheme1 => scheme1_full(need(a.t, "--t")?, need(a.k, "--k")?)?,
        SchemeName::Scheme1Adapted => {
            scheme1_adapted(&read_matrix(&need(a.input, "--input")?)?, need(a.k, "--k")?)?
        }
        SchemeName::Scr => {
            let q = scr_rounds(a.k, a.q)?;
            let g = read_matrix(&need(a.input, "--input")?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            scr(&g, q, a.trials, &mut rng)?
        }
        SchemeName::Bs => {
            let g = read_matrix(&need(a.input, "--input")?)?;
            let k = need(a.k, "--k")?;
            let b = branch(
                &g,
                k,
                BranchOptions {
                    include_dependents: a.include_dependents,
                },
            )?;
            let _ = writeln!(
                err,
                "branch: {} iterations, {} candidates",
                b.iterations,
                b.candidates.len()
            );
            match search(&b.candidates, &g, k, a.limits.limits()?)? {
                SearchOutcome::Found(s) => s,
                SearchOutcome::Exhausted { level } => return Err(exhausted(level)),
            }
        }
        SchemeName::Brute => {
            let g = read_matrix(&need(a.input, "--input")?)?;
            match brute_force_optimal(&g, need(a.k, "--k")?, a.limits.limits()?, a.brute_max_dim)? {
                SearchOutcome::Found(s) => s,
                SearchOutcome::Exhausted { level } => return Err(exhausted(level)),
            }
        }
    };
    let text = scheme.to_text();
    match a.output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Failure::Other(format!("{}: {e}", path.display()))),
        None => emit(out, &text),
    }
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let scheme = CoverScheme::parse(&read_file(&a.scheme_file)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.scheme_file.display())))?;
    let report = match (a.full_space, a.matrix_file) {
        (Some(t), _) => verify_full_space(&scheme, t)?,
        (None, Some(path)) => verify_cover(&scheme, &read_matrix(&path)?)?,
        (None, None) => return Err(Failure::Usage("give a matrix file or --full-space".into())),
    };
    emit(
        out,
        &match a.format {
            Format::Text => report.to_string(),
            Format::Csv => report.to_csv(),
        },
    )?;
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn run_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let mut cfg = SweepConfig::new(a.t, a.k, a.n, a.trials, a.seed);
    cfg.family = a.family.parse::<Family>()?;
    cfg.limits = a.limits.limits()?;
    cfg.circuit_trials = a.circuit_trials;
    cfg.jobs = a.jobs.max(1);
    cfg.record_timing = !a.no_timing;
    // Validate every instance size before any work.
    for &n in &cfg.n_values {
        crate::harness::generate(&crate::harness::InstanceSpec {
            t: cfg.t,
            n,
            seed: cfg.seed0,
            family: cfg.family,
        })?;
    }
    let records = run_sweep(&cfg)?;
    let exhausted = records
        .iter()
        .filter(|r| r.scheme.is_construction() && r.t_k.is_none())
        .count();
    if exhausted > 0 {
        let _ = writeln!(
            err,
            "{exhausted} construction records hit the search budget"
        );
    }
    match a.out {
        None => emit(out, &to_csv(&records)),
        Some(path) if path.is_dir() => {
            let written = write_csv(&cfg, &records, &path)?;
            let _ = writeln!(err, "wrote {}", written.display());
            Ok(())
        }
        Some(path) => {
            std::fs::write(&path, to_csv(&records)).map_err(|e| Failure::Other(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = dispatch(
            std::iter::once("klimited").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bounds_command() {
        let (code, out, _) = run(&["bounds", "--n", "63", "--t", "6", "--k", "2"]);
        assert_eq!(code, 0);
        for line in [
            "t_star=11",
            "uncoded=63",
            "theorem1_ub=16",
            "scr_best=",
            "scr_worst=",
        ] {
            assert!(out.contains(line), "{out}");
        }
        let (code, out, _) = run(&[
            "bounds", "--n", "63", "--t", "6", "--k", "2", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn construct_and_verify_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scheme.txt");
        let (code, out, _) = run(&["construct", "scheme1", "--t", "8", "--k", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("3 17 8"));
        std::fs::write(&path, &out).unwrap();
        let (code, out, _) = run(&["verify", "--full-space", "8", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.starts_with("255/255 ok"), "{out}");
    }

    #[test]
    fn verification_failure_exits_4() {
        let dir = tempfile::tempdir().unwrap();
        let scheme = dir.path().join("s.txt");
        let matrix = dir.path().join("g.txt");
        std::fs::write(&scheme, "2 2 3\n110\n011\n1: 1\n2: 2\n").unwrap();
        std::fs::write(&matrix, "3 3\n110\n011\n111\n").unwrap();
        let (code, out, _) = run(&["verify", scheme.to_str().unwrap(), matrix.to_str().unwrap()]);
        assert_eq!(code, 4);
        assert!(out.starts_with("2/3 ok"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["bounds", "--n", "x"]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(
            run(&["construct", "scr", "--k", "3", "--input", "nope"]).0,
            2
        );
        assert_eq!(
            run(&[
                "construct",
                "scr",
                "--k",
                "2",
                "--q",
                "1",
                "--input",
                "nope"
            ])
            .0,
            2
        );
        assert_eq!(run(&["construct", "scheme1", "--t", "6", "--k", "3"]).0, 2);
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("g.txt");
        std::fs::write(&bad, "2 3\n110\n01x\n").unwrap();
        let (code, _, err) = run(&[
            "construct",
            "scr",
            "--k",
            "2",
            "--input",
            bad.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("line 3, column 3"), "{err}");
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn limit_exhaustion_exits_3() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("g.txt");
        std::fs::write(&g, "15 4\n1000\n0100\n0010\n0001\n1100\n1010\n1001\n0110\n0101\n0011\n1110\n1101\n1011\n0111\n1111\n").unwrap();
        let (code, _, err) = run(&[
            "construct",
            "brute",
            "--k",
            "2",
            "--input",
            g.to_str().unwrap(),
            "--max-nodes",
            "2",
        ]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn every_scheme_round_trips_through_text() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("g.txt");
        std::fs::write(
            &g,
            "9 6\n100000\n010000\n001000\n000100\n000010\n000001\n111100\n110000\n111000\n",
        )
        .unwrap();
        for scheme in ["scheme1-adapted", "scr", "bs"] {
            let s = dir.path().join(format!("{scheme}.txt"));
            let (code, _, err) = run(&[
                "construct",
                scheme,
                "--k",
                "2",
                "--input",
                g.to_str().unwrap(),
                "--output",
                s.to_str().unwrap(),
            ]);
            assert_eq!(code, 0, "{scheme}: {err}");
            let (code, out, _) = run(&["verify", s.to_str().unwrap(), g.to_str().unwrap()]);
            assert_eq!(code, 0, "{scheme}: {out}");
        }
    }

    #[test]
    fn bench_is_reproducible() {
        let args = [
            "bench",
            "--t",
            "5",
            "--k",
            "2",
            "--n",
            "6,10",
            "--trials",
            "2",
            "--seed",
            "4",
            "--no-timing",
        ];
        let (code, a, _) = run(&args);
        assert_eq!(code, 0);
        assert!(a.starts_with("scheme,n,t,k,seed,t_k,elapsed_ms,status\n"));
        assert_eq!(run(&args).1, a);
        let dir = tempfile::tempdir().unwrap();
        let mut with_dir = args.to_vec();
        with_dir.extend(["--out", dir.path().to_str().unwrap(), "--jobs", "2"]);
        assert_eq!(run(&with_dir).0, 0);
        assert_eq!(
            std::fs::read_to_string(dir.path().join("sweep_T5_k2.csv")).unwrap(),
            a
        );
    }
}
