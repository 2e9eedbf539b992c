//! Command-line front end.
//!
//! Exit codes: 0 success (mark present, or expected verdict), 1 mark absent
//! or unexpected verdict, 2 I/O or format error, 3 parameter error.
//! JSON goes to stdout or `--report`; human-readable summaries go to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dynamics::{probe_expansivity, probe_sensitivity, run_mixing_trials};
use crate::error::{Error, Result};
use crate::security::{run_uniformity, KeyPolicy, UniformityExperiment, Verdict};
use crate::stego::{detect, embed, extract_lscs, read_media, write_media, EmbedKey, Message, Mode};
use crate::strategies::{Fraction64, PlcmParams, DEFAULT_TRANSIENT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PARAM: i32 = 3;

const DEFAULT_P: &str = "4ccccccccccccccc";

#[derive(Debug, Parser)]
#[command(name = "cihide", version, about = "Information hiding with chaotic iterations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Embed a message into the LSBs of a cover.
    Embed(EmbedArgs),
    /// Check a suspect medium against the original, message and key.
    Detect(DetectArgs),
    /// Run a lab experiment and write its JSON report.
    #[command(subcommand)]
    Analyze(Analysis),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Ciis,
    Cids,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ciis => Mode::Ciis,
            ModeArg::Cids => Mode::Cids,
        }
    }
}

#[derive(Debug, Args)]
struct KeyArgs {
    /// Message, 16 hex digits.
    #[arg(long)]
    msg: Fraction64,
    /// Key fraction K, 16 hex digits.
    #[arg(long)]
    key: Fraction64,
    /// Number of carriers N.
    #[arg(long)]
    n_cells: usize,
    /// Number of chaotic iterations.
    #[arg(long)]
    iterations: usize,
    #[arg(long, value_enum, default_value = "ciis")]
    mode: ModeArg,
    /// PLCM control parameter, 16 hex digits, strictly between 0 and 1/2.
    #[arg(long, default_value = DEFAULT_P)]
    p: Fraction64,
    /// PLCM iterates discarded before the first strategy term.
    #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
    transient: usize,
}

impl KeyArgs {
    fn embed_key(&self) -> Result<EmbedKey> {
        EmbedKey::new(self.key, self.iterations, PlcmParams::new(self.p, self.transient)?, self.n_cells)
    }
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    key: KeyArgs,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long)]
    original: PathBuf,
    #[arg(long)]
    suspect: PathBuf,
    #[command(flatten)]
    key: KeyArgs,
    /// Largest Hamming distance still reported as present.
    #[arg(long, default_value_t = 0)]
    tau: usize,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Uniform,
    NonUniform,
}

#[derive(Debug, Subcommand)]
enum Analysis {
    /// Chi-square uniformity of embedding outputs for uniform hosts.
    Uniformity {
        #[arg(long, default_value_t = 8)]
        n_cells: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "ciis")]
        mode: ModeArg,
        #[arg(long, default_value_t = 16)]
        iterations: usize,
        /// Fixed key; a fresh random key is drawn per sample when absent.
        #[arg(long)]
        key: Option<Fraction64>,
        #[arg(long, default_value = DEFAULT_P)]
        p: Fraction64,
        #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
        transient: usize,
        /// Expected verdict; defaults to uniform for ciis, non-uniform for cids.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
        #[command(flatten)]
        common: Common,
    },
    /// Separation of random pairs of distinct points.
    Expansivity {
        #[arg(long, default_value_t = 4)]
        n_cells: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 15)]
        max_iter: usize,
        #[arg(long, default_value_t = 15)]
        horizon: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Separation of close neighbours.
    Sensitivity {
        #[arg(long, default_value_t = 4)]
        n_cells: usize,
        #[arg(long, default_value_t = 1_000)]
        trials: usize,
        #[arg(long, default_value_t = 15)]
        horizon: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Constructive mixing witnesses between random balls and points.
    Mixing {
        #[arg(long, default_value_t = 8)]
        n_cells: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 15)]
        max_prefix: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code(err: &Error) -> i32 {
    if err.is_media_or_io() {
        EXIT_IO
    } else {
        EXIT_PARAM
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn emit(json: &str, report: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match report {
        Some(path) => fs::write(path, json).map_err(|source| Error::Io { path: path.clone(), source }),
        None => stdout
            .write_all(json.as_bytes())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

#[derive(Serialize)]
struct EmbedSummary {
    n_cells: usize,
    iterations: usize,
    mode: Mode,
    /// SHA-256 of the embedded carrier bits written as a `0`/`1` string.
    carrier_digest: String,
}

fn hex_digest(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

fn run_embed(args: &EmbedArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let key = args.key.embed_key()?;
    let mode = args.key.mode.into();
    let cover = read_media(&args.cover)?;
    let marked = embed(&cover, Message(args.key.msg), &key, mode)?;
    write_media(&marked, &args.out)?;
    let lscs = extract_lscs(&marked, key.lsc_count)?;
    let summary = EmbedSummary {
        n_cells: key.lsc_count,
        iterations: key.iterations,
        mode,
        carrier_digest: hex_digest(lscs.to_string().as_bytes()),
    };
    emit(&to_json(&summary), None, stdout)?;
    let _ = writeln!(stderr, "embedded into {} carriers of {}", key.lsc_count, args.out.display());
    Ok(EXIT_OK)
}

fn run_detect(args: &DetectArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let key = args.key.embed_key()?;
    let original = read_media(&args.original)?;
    let suspect = read_media(&args.suspect)?;
    let d = detect(&original, &suspect, Message(args.key.msg), &key, args.key.mode.into(), args.tau)?;
    emit(&to_json(&d), None, stdout)?;
    let _ = writeln!(stderr, "{} (hamming {} / tau {})", if d.present { "present" } else { "absent" }, d.hamming, d.tau);
    Ok(if d.present { EXIT_OK } else { EXIT_NEGATIVE })
}

fn run_analysis(analysis: &Analysis, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let (json, ok, summary, report) = match analysis {
        Analysis::Uniformity { n_cells, samples, mode, iterations, key, p, transient, expect, common } => {
            let mode: Mode = (*mode).into();
            let exp = UniformityExperiment {
                n_cells: *n_cells,
                samples: *samples,
                mode,
                key_policy: key.map_or(KeyPolicy::RandomPerSample, KeyPolicy::Fixed),
                iterations: *iterations,
                plcm: PlcmParams::new(*p, *transient)?,
                seed: common.seed,
            };
            let r = run_uniformity(&exp)?;
            let expected = expect.unwrap_or(match mode {
                Mode::Ciis => Expectation::Uniform,
                Mode::Cids => Expectation::NonUniform,
            });
            let ok = match r.verdict {
                Verdict::ConsistentWithUniform => expected == Expectation::Uniform,
                Verdict::NonUniform => expected == Expectation::NonUniform,
            };
            let summary = format!("{mode} uniformity: chi2 = {:.3}, p = {:.3e}, support {}", r.chi_square, r.p_value, r.support_size);
            (to_json(&r), ok, summary, common.report.as_ref())
        }
        Analysis::Expansivity { n_cells, trials, max_iter, horizon, common } => {
            let r = probe_expansivity(*n_cells, *trials, *max_iter, *horizon, common.seed)?;
            let ok = r.pairs_separated == r.pairs_tested && r.equal_state_separated_by_two == r.equal_state_pairs;
            let summary = format!("expansivity: {}/{} pairs separated", r.pairs_separated, r.pairs_tested);
            (to_json(&r), ok, summary, common.report.as_ref())
        }
        Analysis::Sensitivity { n_cells, trials, horizon, common } => {
            let r = probe_sensitivity(*n_cells, *trials, *horizon, common.seed)?;
            let summary = format!("sensitivity: {}/{} neighbours separated beyond {}", r.successes, r.trials, r.delta);
            (to_json(&r), r.successes == r.trials, summary, common.report.as_ref())
        }
        Analysis::Mixing { n_cells, trials, max_prefix, common } => {
            let r = run_mixing_trials(*n_cells, *trials, *max_prefix, common.seed)?;
            let summary = format!("mixing: {}/{} witnesses verified", r.verified, r.trials);
            (to_json(&r), r.verified == r.trials && r.steps_exact == r.trials, summary, common.report.as_ref())
        }
    };
    emit(&json, report, stdout)?;
    let _ = writeln!(stderr, "{summary}");
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_PARAM } else { EXIT_OK }
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_PARAM
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Embed(a) => run_embed(a, stdout, stderr),
        Command::Detect(a) => run_detect(a, stdout, stderr),
        Command::Analyze(a) => run_analysis(a, stdout, stderr),
    };
    result.unwrap_or_else(|err| {
        let _ = writeln!(stderr, "error: {err}");
        exit_code(&err)
    })
}
