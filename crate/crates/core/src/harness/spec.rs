//! Experiment descriptions and result rows.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::adversary::StrategyKind;
use crate::bitcore::RandomSource;
use crate::channel::ChannelParams;
use crate::codebook::{self, make_random_code, make_repetition_code, Code};
use crate::decoder::DecoderKind;
use crate::error::{Error, Result};
use crate::prob::{self, Prob};

/// Stream reserved for code construction, apart from per-trial streams.
pub const CODE_STREAM: u64 = u64::MAX;

/// Where the code comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeSpec {
    /// Uniformly random distinct codewords at the given rate.
    Random {
        rate: f64,
        seed: u64,
    },
    Repetition,
    File {
        path: PathBuf,
    },
    /// The random-code ensemble at the given rate, never materialized.
    /// Only minimum-distance decoding against code-blind adversaries.
    Ensemble {
        rate: f64,
    },
}

impl CodeSpec {
    /// Builds the code for block length `n`. Ensembles have no single code.
    pub fn build(&self, n: usize) -> Result<Code> {
        let code: Code = match self {
            CodeSpec::Random { rate, seed } => {
                make_random_code(&mut RandomSource::new(*seed, CODE_STREAM), n, *rate)?.into()
            }
            CodeSpec::Repetition => make_repetition_code(n)?.into(),
            CodeSpec::File { path } => codebook::read_code_file(path)?,
            CodeSpec::Ensemble { .. } => {
                return Err(Error::Config("an ensemble is not a single code".into()))
            }
        };
        if code.n() != n {
            return Err(Error::Dimension(format!(
                "code has n = {}, experiment has n = {n}",
                code.n()
            )));
        }
        Ok(code)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    MonteCarlo,
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::MonteCarlo => "montecarlo",
            Mode::Exact => "exact",
        })
    }
}

/// Serializes a value through its `Display` and `FromStr` token.
pub(crate) mod as_token {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Serializes an exact rational as `a/b` (or a plain integer).
pub(crate) mod as_rational {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::prob::{self, Prob};

    pub fn serialize<S: Serializer>(v: &Prob, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&prob::format_short(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Prob, D::Error> {
        let s = String::deserialize(d)?;
        prob::parse_prob(&s).map_err(D::Error::custom)
    }
}

/// One experiment: a code, a channel, an attack, a decoder, and seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub code: CodeSpec,
    pub n: usize,
    #[serde(with = "as_rational")]
    pub p: Prob,
    #[serde(with = "as_token")]
    pub adversary: StrategyKind,
    #[serde(with = "as_token")]
    pub decoder: DecoderKind,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Also track the error rate of every message separately.
    #[serde(default)]
    pub per_message: bool,
}

impl ExperimentSpec {
    pub fn params(&self) -> Result<ChannelParams> {
        ChannelParams::from_exact(self.n, self.p.clone())
    }

    /// Checks everything that can be checked without building the code.
    pub fn validate(&self) -> Result<ChannelParams> {
        let params = self.params()?;
        self.adversary.validate(&params)?;
        if self.mode == Mode::MonteCarlo && self.trials == 0 {
            return Err(Error::Config("Monte Carlo needs at least one trial".into()));
        }
        if let CodeSpec::Ensemble { .. } = self.code {
            if self.mode == Mode::Exact {
                return Err(Error::Config("ensembles are only simulated".into()));
            }
            if self.decoder != DecoderKind::MinDist || self.adversary.is_push() {
                return Err(Error::Config(
                    "ensembles support only mindist against passive, bsc or fixed".into(),
                ));
            }
        }
        Ok(params)
    }
}

/// Column names of the result CSV.
pub const CSV_HEADER: &str =
    "n,R,p,eps,adversary,decoder,mode,trials,err,lo,hi,budget_exhaust_rate";

/// One CSV result line.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub rate: f64,
    pub p: Prob,
    pub eps: Option<Prob>,
    pub adversary: StrategyKind,
    pub decoder: DecoderKind,
    pub mode: Mode,
    pub trials: u64,
    pub err: f64,
    pub lo: f64,
    pub hi: f64,
    pub budget_exhaust_rate: f64,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        let eps = self
            .eps
            .as_ref()
            .map(prob::format_short)
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.rate,
            prob::format_short(&self.p),
            eps,
            quote(&self.adversary.to_string()),
            self.decoder,
            self.mode,
            self.trials,
            self.err,
            self.lo,
            self.hi,
            self.budget_exhaust_rate
        )
    }
}

/// Quotes a field containing commas, as `fixed:1,2` does.
fn quote(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}
