//! Experiment engines: Monte Carlo estimation, exact enumeration, the
//! random-code ensemble, and parameter sweeps.

pub mod ensemble;
pub mod estimate;
pub mod exact;
pub mod montecarlo;
pub mod spec;
pub mod stats;
pub mod sweep;

pub use ensemble::{correct_probability, ensemble_error, run_ensemble};
pub use estimate::{Diagnostics, ErrorEstimate, ExactDetail};
pub use exact::{
    check_guard, confusable_event, exact_on, flip_count_distribution, max_list_size,
    ConfusableEvent,
};
pub use montecarlo::monte_carlo_on;
pub use spec::{CodeSpec, ExperimentSpec, Mode, ResultRow, CODE_STREAM, CSV_HEADER};
pub use stats::{wilson, Interval, Z95};
pub use sweep::{cell_seed, run_sweep, CellResult, SweepSpec};

use crate::adversary::{wait_length_for, StrategyKind};
use crate::analysis::{confusion_distance, integer_threshold};
use crate::bitcore::{hamming_distance, Bitword};
use crate::channel::ChannelParams;
use crate::codebook::Code;
use crate::error::Result;

/// Runs `spec` in its mode, building the code it names.
pub fn run(spec: &ExperimentSpec) -> Result<ErrorEstimate> {
    spec.validate()?;
    if let CodeSpec::Ensemble { .. } = spec.code {
        return run_ensemble(spec);
    }
    let code = spec.code.build(spec.n)?;
    run_on(&code, spec)
}

/// Runs `spec` against an already built code.
pub fn run_on(code: &Code, spec: &ExperimentSpec) -> Result<ErrorEstimate> {
    match spec.mode {
        Mode::MonteCarlo => monte_carlo_on(code, spec),
        Mode::Exact => exact_on(code, spec),
    }
}

pub fn run_monte_carlo(spec: &ExperimentSpec) -> Result<ErrorEstimate> {
    run(&ExperimentSpec {
        mode: Mode::MonteCarlo,
        ..spec.clone()
    })
}

pub fn run_exact(spec: &ExperimentSpec) -> Result<ErrorEstimate> {
    run(&ExperimentSpec {
        mode: Mode::Exact,
        ..spec.clone()
    })
}

/// Events of the push argument: a small consistent set at the observed
/// prefix, and a target that is a different word close to the sent one.
pub(crate) struct ClaimProbe {
    pub active: bool,
    pub ell: usize,
    small_below: f64,
    close_below: usize,
}

impl ClaimProbe {
    pub fn new(code: &Code, kind: &StrategyKind, params: &ChannelParams) -> Self {
        match kind.eps() {
            Some(eps) if kind.is_push() => {
                let n = params.n();
                let ell = wait_length_for(code, eps);
                ClaimProbe {
                    active: ell < n,
                    ell,
                    small_below: (crate::prob::to_f64(eps) * n as f64 / 4.0).exp2(),
                    close_below: integer_threshold(&confusion_distance(params.p(), eps, n)),
                }
            }
            _ => ClaimProbe {
                active: false,
                ell: 0,
                small_below: 0.0,
                close_below: 0,
            },
        }
    }

    pub fn is_small(&self, size: usize) -> bool {
        (size as f64) < self.small_below
    }

    pub fn is_close(&self, x: &Bitword, target: &Bitword) -> bool {
        x != target && hamming_distance(x, target).expect("words of one code") < self.close_below
    }
}
