//! Grids of experiments.
//!
//! Cells run in grid order (`n` outermost, then rate, `p`, `eps`). Each cell
//! gets its own seed derived from the master seed and its index, so any cell
//! can be rerun alone and a sweep can resume from any index.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::adversary::StrategyKind;
use crate::bitcore::RandomSource;
use crate::decoder::DecoderKind;
use crate::error::Error;
use crate::prob::Prob;

use super::spec::{as_token, CodeSpec, ExperimentSpec, Mode, ResultRow};

/// Streams above this are reserved for deriving cell seeds.
const CELL_STREAM_BASE: u64 = 1 << 63;

mod rational_list {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::prob::{self, Prob};

    pub fn serialize<S: Serializer>(v: &[Prob], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(prob::format_short))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Prob>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| prob::parse_prob(s).map_err(D::Error::custom))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub ns: Vec<usize>,
    pub rates: Vec<f64>,
    #[serde(with = "rational_list")]
    pub ps: Vec<Prob>,
    /// Margins substituted into the adversary token.
    #[serde(with = "rational_list")]
    pub epss: Vec<Prob>,
    #[serde(with = "as_token")]
    pub adversary: StrategyKind,
    #[serde(with = "as_token")]
    pub decoder: DecoderKind,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Simulate the random-code ensemble instead of one drawn code per cell.
    #[serde(default)]
    pub ensemble: bool,
}

/// Seed of cell `index` under `master`.
pub fn cell_seed(master: u64, index: u64) -> u64 {
    RandomSource::new(master, CELL_STREAM_BASE + index).next_u64()
}

impl SweepSpec {
    /// Every cell of the grid, in order. Empty when any axis is empty.
    pub fn cells(&self) -> Vec<ExperimentSpec> {
        let mut out = Vec::new();
        for &n in &self.ns {
            for &rate in &self.rates {
                for p in &self.ps {
                    for eps in &self.epss {
                        let seed = cell_seed(self.seed, out.len() as u64);
                        let code = if self.ensemble {
                            CodeSpec::Ensemble { rate }
                        } else {
                            CodeSpec::Random { rate, seed }
                        };
                        out.push(ExperimentSpec {
                            code,
                            n,
                            p: p.clone(),
                            adversary: self.adversary.with_eps(eps.clone()),
                            decoder: self.decoder.clone(),
                            trials: self.trials,
                            seed,
                            mode: self.mode,
                            per_message: false,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Outcome of one cell.
#[derive(Debug)]
pub struct CellResult {
    pub index: usize,
    pub spec: ExperimentSpec,
    pub outcome: Result<ResultRow, Error>,
}

/// Runs cells `start..` in order, handing each result to `emit` as soon as
/// it is ready. A failing cell is reported and the sweep moves on.
pub fn run_sweep(
    spec: &SweepSpec,
    start: usize,
    mut emit: impl FnMut(&CellResult),
) -> Vec<CellResult> {
    spec.cells()
        .into_iter()
        .enumerate()
        .skip(start)
        .map(|(index, cell)| {
            let outcome = super::run(&cell).map(|e| e.row(&cell));
            let r = CellResult {
                index,
                spec: cell,
                outcome,
            };
            emit(&r);
            r
        })
        .collect()
}
