//! What a run does, as recorded in its manifest, and how to execute it.
//!
//! Every subcommand resolves its flags into a [`Job`]. The manifest stores
//! the job verbatim, and `replay` executes it through the same path, which
//! is what makes a replayed CSV identical to the original.

use std::io::Write;
use std::path::PathBuf;

use causal_channel::analysis::{bound_table, bounds_csv};
use causal_channel::channel::run_channel;
use causal_channel::codebook::{make_random_code, make_repetition_code, write_code, Code};
use causal_channel::harness::{
    self, run_sweep, ExperimentSpec, SweepSpec, CODE_STREAM, CSV_HEADER,
};
use causal_channel::{adversary::Strategy, RandomSource};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::report;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Job {
    Bounds {
        step: f64,
    },
    Simulate {
        experiment: ExperimentSpec,
        /// Where to dump the channel trace of trial 0.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trace: Option<PathBuf>,
    },
    Exact {
        experiment: ExperimentSpec,
    },
    Sweep {
        sweep: SweepSpec,
        /// First cell to run; earlier cells are skipped.
        #[serde(default)]
        start: usize,
    },
    Graph(report::GraphJob),
    Partition(report::PartitionJob),
    #[serde(rename = "make-code")]
    MakeCode(CodeJob),
}

/// A code to write out in the text format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeJob {
    Random { n: usize, rate: f64, seed: u64 },
    Repetition { n: usize },
}

/// A cell that failed during a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub job: Job,
    /// Whether the master seed was given or drawn at random.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_source: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Failure>,
}

impl Manifest {
    pub fn new(job: Job, seed_source: Option<&str>) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            job,
            seed_source: seed_source.map(str::to_string),
            failures: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

fn write(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("output", e))
}

/// Runs `job`, writing its primary output to `out`. Sweep failures are
/// reported on stderr and returned.
pub fn execute(job: &Job, out: &mut dyn Write) -> CliResult<Vec<Failure>> {
    match job {
        Job::Bounds { step } => write(out, &bounds_csv(&bound_table(*step)?))?,
        Job::Simulate { experiment, trace } => {
            if let Some(path) = trace {
                let text = trace_first_trial(experiment)?;
                std::fs::write(path, text).map_err(|e| CliError::io(path.display(), e))?;
            }
            let row = harness::run(experiment)?.row(experiment);
            write(out, &format!("{CSV_HEADER}\n{}\n", row.to_csv()))?;
        }
        Job::Exact { experiment } => {
            let row = harness::run(experiment)?.row(experiment);
            write(out, &format!("{CSV_HEADER}\n{}\n", row.to_csv()))?;
        }
        Job::Sweep { sweep, start } => return run_sweep_job(sweep, *start, out),
        Job::Graph(g) => write(out, &report::graph_report(g)?)?,
        Job::Partition(p) => write(out, &report::partition_report(p)?)?,
        Job::MakeCode(c) => write(out, &write_code(&build_code(c)?))?,
    }
    Ok(Vec::new())
}

fn build_code(job: &CodeJob) -> CliResult<Code> {
    Ok(match *job {
        CodeJob::Random { n, rate, seed } => {
            make_random_code(&mut RandomSource::new(seed, CODE_STREAM), n, rate)?.into()
        }
        CodeJob::Repetition { n } => make_repetition_code(n)?.into(),
    })
}

fn run_sweep_job(sweep: &SweepSpec, start: usize, out: &mut dyn Write) -> CliResult<Vec<Failure>> {
    if start == 0 {
        write(out, &format!("{CSV_HEADER}\n"))?;
    }
    let mut failures = Vec::new();
    let mut io_error = None;
    run_sweep(sweep, start, |cell| match &cell.outcome {
        Ok(row) => {
            if io_error.is_none() {
                if let Err(e) = write(out, &format!("{}\n", row.to_csv()))
                    .and_then(|_| out.flush().map_err(|e| CliError::io("output", e)))
                {
                    io_error = Some(e);
                }
            }
        }
        Err(e) => {
            eprintln!("cell {}: {e}", cell.index);
            failures.push(Failure {
                index: cell.index,
                error: e.to_string(),
            });
        }
    });
    match io_error {
        Some(e) => Err(e),
        None => Ok(failures),
    }
}

/// The channel trace of trial 0, drawn from the same streams the Monte
/// Carlo engine uses for that trial.
fn trace_first_trial(spec: &ExperimentSpec) -> CliResult<String> {
    let params = spec.validate()?;
    let code = spec.code.build(spec.n)?;
    let entry = code.sample_entry(&mut RandomSource::new(spec.seed, 0));
    let mut adversary = Strategy::new(&spec.adversary, &code, &params)?;
    let trace = run_channel(
        &code.entry_word(entry),
        &mut adversary,
        &params,
        &mut RandomSource::new(spec.seed, 1),
    )?;
    Ok(trace.dump())
}
