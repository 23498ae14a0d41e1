//! `causal-lab`: bound curves, simulations, exact evaluation, sweeps and
//! combinatorial reports for the causal jamming channel.

mod error;
mod job;
mod report;

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use causal_channel::adversary::StrategyKind;
use causal_channel::analysis::{confusion_distance, integer_threshold};
use causal_channel::codebook::read_code_file;
use causal_channel::decoder::DecoderKind;
use causal_channel::harness::{CodeSpec, ExperimentSpec, Mode, SweepSpec};
use causal_channel::prob::{parse_prob, Prob};
use clap::{Args, Parser, Subcommand};

use error::{CliError, CliResult};
use job::{execute, CodeJob, Job, Manifest};
use report::{GraphJob, PartitionJob};

#[derive(Parser)]
#[command(name = "causal-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity bound curves over p in [0, 1/2], as CSV.
    Bounds {
        /// Grid step in (0, 1/2].
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo error estimate for one configuration.
    Simulate {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Dump the channel trace of the first trial to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Exact error probability by full enumeration (small instances only).
    Exact {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: Output,
    },
    /// A grid of experiments over n, rate, p and the adversary's margin.
    Sweep {
        #[command(flatten)]
        grid: SweepArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Consistency-graph statistics for the entries matching a prefix.
    Graph {
        #[arg(long)]
        code: PathBuf,
        /// Observed prefix as a 0/1 string.
        #[arg(long, default_value = "")]
        prefix: String,
        /// Edge threshold; defaults to ceil(2pn - eps n / 8) from --p and --eps.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Two-level dyadic partition of the entries matching a prefix.
    Partition {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        output: Output,
    },
    /// Writes a code in the text format.
    MakeCode {
        /// `random` or `repetition`.
        #[arg(long, default_value = "random")]
        code: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Re-runs the job recorded in a manifest.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Manifest file; defaults to `<out>.manifest.json`, or standard error
    /// when writing to standard output.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    n: usize,
    /// Jamming fraction as a decimal or fraction, e.g. 0.15 or 1/7.
    #[arg(long)]
    p: String,
    /// Code rate for `random` and `ensemble` codes.
    #[arg(long)]
    rate: Option<f64>,
    /// `random`, `repetition`, `ensemble`, or a code file path.
    #[arg(long, default_value = "random")]
    code: String,
    /// Seed of the random code; defaults to the master seed.
    #[arg(long)]
    code_seed: Option<u64>,
    /// `passive`, `bsc:<eps>`, `waitpush:<eps>`, `waitpushprob:<eps>` or
    /// `fixed:<i>,<j>,...` (positions from 0).
    #[arg(long, default_value = "passive")]
    adversary: String,
    /// Margin for the adversary, replacing any in the token.
    #[arg(long)]
    eps: Option<String>,
    /// `mindist`, `map` or `list:<radius>`.
    #[arg(long, default_value = "mindist")]
    decoder: String,
    /// Master seed; drawn at random and recorded when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Also track each message's error rate.
    #[arg(long)]
    per_message: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated block lengths.
    #[arg(long)]
    n: String,
    /// Comma-separated rates.
    #[arg(long)]
    rate: String,
    /// Comma-separated values of p.
    #[arg(long)]
    p: String,
    /// Comma-separated margins; defaults to the adversary token's own.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, default_value = "passive")]
    adversary: String,
    #[arg(long, default_value = "mindist")]
    decoder: String,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate each cell exactly instead of by simulation.
    #[arg(long)]
    exact: bool,
    /// Simulate the random-code ensemble instead of one code per cell.
    #[arg(long)]
    ensemble: bool,
    /// Resume at this cell; rows are appended without a header.
    #[arg(long, default_value_t = 0)]
    start: usize,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn rational(s: &str) -> CliResult<Prob> {
    parse_prob(s.trim()).map_err(|_| usage(format!("{s:?} is not a number or fraction")))
}

fn list<T>(s: &str, parse: impl Fn(&str) -> CliResult<T>) -> CliResult<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse)
        .collect()
}

fn parsed<T: FromStr>(s: &str) -> CliResult<T> {
    s.parse().map_err(|_| usage(format!("cannot parse {s:?}")))
}

/// Parses an adversary token, filling in or replacing its margin.
fn adversary(token: &str, eps: Option<&Prob>) -> CliResult<StrategyKind> {
    let kind = match (token.contains(':'), eps) {
        (false, Some(e)) if matches!(token, "bsc" | "waitpush" | "waitpushprob") => {
            format!("{token}:{}", causal_channel::prob::format_short(e)).parse()?
        }
        _ => token.parse::<StrategyKind>()?,
    };
    Ok(match eps {
        Some(e) => kind.with_eps(e.clone()),
        None => kind,
    })
}

fn seed_or_random(seed: Option<u64>) -> (u64, &'static str) {
    match seed {
        Some(s) => (s, "flag"),
        None => (rand::random(), "random"),
    }
}

impl ExperimentArgs {
    fn resolve(&self, mode: Mode, trials: u64) -> CliResult<(ExperimentSpec, &'static str)> {
        let (seed, source) = seed_or_random(self.seed);
        let rate = || {
            self.rate
                .ok_or_else(|| usage(format!("--code {} needs --rate", self.code)))
        };
        let code = match self.code.as_str() {
            "random" => CodeSpec::Random {
                rate: rate()?,
                seed: self.code_seed.unwrap_or(seed),
            },
            "repetition" => CodeSpec::Repetition,
            "ensemble" => CodeSpec::Ensemble { rate: rate()? },
            path => CodeSpec::File { path: path.into() },
        };
        let eps = self.eps.as_deref().map(rational).transpose()?;
        let spec = ExperimentSpec {
            code,
            n: self.n,
            p: rational(&self.p)?,
            adversary: adversary(&self.adversary, eps.as_ref())?,
            decoder: self.decoder.parse::<DecoderKind>()?,
            trials,
            seed,
            mode,
            per_message: self.per_message,
        };
        spec.validate()?;
        Ok((spec, source))
    }
}

impl SweepArgs {
    fn resolve(&self) -> CliResult<(SweepSpec, &'static str)> {
        let (seed, source) = seed_or_random(self.seed);
        let epss = match &self.eps {
            Some(s) => list(s, rational)?,
            None => vec![StrategyKind::from_str(&self.adversary)
                .ok()
                .and_then(|k| k.eps().cloned())
                .unwrap_or_default()],
        };
        let template = adversary(&self.adversary, epss.first())?;
        Ok((
            SweepSpec {
                ns: list(&self.n, parsed)?,
                rates: list(&self.rate, parsed)?,
                ps: list(&self.p, rational)?,
                epss,
                adversary: template,
                decoder: self.decoder.parse()?,
                trials: self.trials,
                seed,
                mode: if self.exact {
                    Mode::Exact
                } else {
                    Mode::MonteCarlo
                },
                ensemble: self.ensemble,
            },
            source,
        ))
    }
}

fn open_output(path: Option<&Path>, append: bool) -> CliResult<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => {
            let file = if append {
                OpenOptions::new().create(true).append(true).open(p)
            } else {
                File::create(p)
            };
            Ok(Box::new(io::BufWriter::new(
                file.map_err(|e| CliError::io(p.display(), e))?,
            )))
        }
    }
}

fn manifest_path(output: &Output) -> Option<PathBuf> {
    output.manifest.clone().or_else(|| {
        output.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

/// Runs `job`, then writes its manifest (including any sweep failures).
fn run_and_record(job: Job, seed_source: Option<&str>, output: &Output) -> CliResult<()> {
    let append = matches!(job, Job::Sweep { start, .. } if start > 0);
    let mut manifest = Manifest::new(job, seed_source);
    let mut out = open_output(output.out.as_deref(), append)?;
    let result = execute(&manifest.job, &mut out);
    out.flush().map_err(|e| CliError::io("output", e))?;
    drop(out);
    manifest.failures = result?;
    let text = manifest.to_json();
    match manifest_path(output) {
        Some(p) => std::fs::write(&p, text).map_err(|e| CliError::io(p.display(), e)),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Bounds { step, output } => {
            if !(step > 0.0 && step <= 0.5) {
                return Err(usage(format!("--step {step} must lie in (0, 0.5]")));
            }
            run_and_record(Job::Bounds { step }, None, &output)
        }
        Command::Simulate {
            experiment,
            trials,
            trace,
            output,
        } => {
            let (spec, source) = experiment.resolve(Mode::MonteCarlo, trials)?;
            run_and_record(
                Job::Simulate {
                    experiment: spec,
                    trace,
                },
                Some(source),
                &output,
            )
        }
        Command::Exact { experiment, output } => {
            let (spec, source) = experiment.resolve(Mode::Exact, 0)?;
            run_and_record(Job::Exact { experiment: spec }, Some(source), &output)
        }
        Command::Sweep { grid, output } => {
            let (sweep, source) = grid.resolve()?;
            run_and_record(
                Job::Sweep {
                    sweep,
                    start: grid.start,
                },
                Some(source),
                &output,
            )
        }
        Command::Graph {
            code,
            prefix,
            d,
            p,
            eps,
            output,
        } => {
            let d = match (d, &p, &eps) {
                (Some(d), _, _) => d,
                (None, Some(p), Some(e)) => {
                    let n = read_code_file(&code)
                        .map_err(|e| match e {
                            causal_channel::Error::Io(io) => CliError::io(code.display(), io),
                            other => other.into(),
                        })?
                        .n();
                    integer_threshold(&confusion_distance(&rational(p)?, &rational(e)?, n))
                }
                _ => return Err(usage("graph needs --d, or both --p and --eps")),
            };
            run_and_record(
                Job::Graph(GraphJob {
                    code,
                    prefix,
                    d,
                    p,
                    eps,
                }),
                None,
                &output,
            )
        }
        Command::Partition {
            code,
            prefix,
            eps,
            output,
        } => {
            rational(&eps)?;
            run_and_record(
                Job::Partition(PartitionJob { code, prefix, eps }),
                None,
                &output,
            )
        }
        Command::MakeCode {
            code,
            n,
            rate,
            seed,
            output,
        } => {
            let (job, source) = match code.as_str() {
                "random" => {
                    let rate = rate.ok_or_else(|| usage("a random code needs --rate"))?;
                    let (seed, source) = seed_or_random(seed);
                    (CodeJob::Random { n, rate, seed }, Some(source))
                }
                "repetition" => (CodeJob::Repetition { n }, None),
                other => return Err(usage(format!("unknown code kind {other:?}"))),
            };
            run_and_record(Job::MakeCode(job), source, &output)
        }
        Command::Replay { manifest, out } => {
            let text = std::fs::read_to_string(&manifest)
                .map_err(|e| CliError::io(manifest.display(), e))?;
            let m: Manifest = serde_json::from_str(&text)?;
            let append = matches!(m.job, Job::Sweep { start, .. } if start > 0);
            let mut w = open_output(out.as_deref(), append)?;
            execute(&m.job, &mut w)?;
            w.flush().map_err(|e| CliError::io("output", e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
