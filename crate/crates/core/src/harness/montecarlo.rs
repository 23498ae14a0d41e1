//! Monte Carlo error estimation.
//!
//! Trial `t` draws Alice's entry from stream `3t`, the adversary's coins
//! from `3t + 1`, and the decoder's tie-break from `3t + 2`, all under the
//! master seed, so results do not depend on how trials are scheduled.

use rayon::prelude::*;

use crate::adversary::Strategy;
use crate::bitcore::RandomSource;
use crate::channel::{run_channel, ChannelParams};
use crate::codebook::Code;
use crate::decoder::Decoder;
use crate::error::Result;

use super::estimate::{Diagnostics, ErrorEstimate};
use super::spec::{ExperimentSpec, Mode};
use super::stats::wilson;
use super::ClaimProbe;

struct Tally {
    errors: u64,
    diag: Diagnostics,
}

impl Tally {
    fn new(budget: usize) -> Self {
        Tally {
            errors: 0,
            diag: Diagnostics::new(budget),
        }
    }

    fn merge(self, other: Tally) -> Tally {
        Tally {
            errors: self.errors + other.errors,
            diag: self.diag.merge(other.diag),
        }
    }
}

/// Runs `spec.trials` transmissions of `code` and averages the error.
pub fn monte_carlo_on(code: &Code, spec: &ExperimentSpec) -> Result<ErrorEstimate> {
    let params = spec.validate()?;
    let template = Strategy::new(&spec.adversary, code, &params)?;
    let decoder = Decoder::new(&spec.decoder, code, &spec.adversary, &params, false)?;
    let probe = ClaimProbe::new(code, &spec.adversary, &params);
    let budget = params.budget();
    let tally = (0..spec.trials)
        .into_par_iter()
        .try_fold(
            || Tally::new(budget),
            |mut acc, t| -> Result<Tally> {
                trial(
                    code, spec, &params, &template, &decoder, &probe, t, &mut acc,
                )?;
                Ok(acc)
            },
        )
        .try_reduce(|| Tally::new(budget), |a, b| Ok(a.merge(b)))?;
    Ok(ErrorEstimate {
        mode: Mode::MonteCarlo,
        rate: code.rate(),
        trials: spec.trials,
        errors: tally.errors,
        interval: wilson(tally.errors, spec.trials),
        diagnostics: tally.diag,
        exact: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn trial(
    code: &Code,
    spec: &ExperimentSpec,
    params: &ChannelParams,
    template: &Strategy<'_>,
    decoder: &Decoder,
    probe: &ClaimProbe,
    t: u64,
    acc: &mut Tally,
) -> Result<()> {
    let mut alice = RandomSource::new(spec.seed, 3 * t);
    let mut coins = RandomSource::new(spec.seed, 3 * t + 1);
    let mut bob = RandomSource::new(spec.seed, 3 * t + 2);

    let entry = code.sample_entry(&mut alice);
    let message = code.entry_message(entry);
    let x = code.entry_word(entry);
    let mut adversary = template.clone();
    let trace = run_channel(&x, &mut adversary, params, &mut coins)?;
    let decoded = decoder.decode(code, &trace.y, &mut bob)?;
    let error = decoded.is_none_or(|d| d.message != message);

    let d = &mut acc.diag;
    acc.errors += error as u64;
    d.flip_histogram[trace.flips.len()] += 1;
    d.budget_exhausted += trace.budget_exhausted() as u64;
    d.clamped += (trace.clamped > 0) as u64;
    d.degraded += trace.report.degraded as u64;
    if let Some(size) = trace.report.consistent_size {
        *d.consistent_sizes.entry(size).or_default() += 1;
        if probe.is_small(size) {
            d.small_consistent += 1;
        } else if let Some(target) = &trace.report.target_word {
            d.close_target += probe.is_close(&x, target) as u64;
        }
    }
    if spec.per_message {
        let slot = d.per_message.entry(message).or_default();
        slot.0 += error as u64;
        slot.1 += 1;
    }
    Ok(())
}
