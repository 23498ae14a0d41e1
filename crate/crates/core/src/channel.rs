//! The referee for one transmission.
//!
//! The adversary sees the codeword one bit at a time through
//! [`Adversary::step`] and answers with a flip decision for that bit. There is
//! no way to hand it a later bit. The referee applies at most `floor(p n)`
//! flips; any flip requested past that point is dropped and counted.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive};

use crate::bitcore::{Bitword, RandomSource};
use crate::error::{Error, Result};
use crate::prob::{self, Prob};

/// Block length, jamming power, and the resulting flip budget.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelParams {
    n: usize,
    p: Prob,
    budget: usize,
    delay: usize,
}

impl ChannelParams {
    /// `p` is read as the decimal it prints as, so `0.15` means exactly `3/20`.
    pub fn new(n: usize, p: f64) -> Result<Self> {
        Self::from_exact(n, prob::from_decimal_f64(p)?)
    }

    pub fn from_exact(n: usize, p: Prob) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("block length must be positive".into()));
        }
        if p.is_negative() || p > prob::ratio(1, 2) {
            return Err(Error::Config(format!(
                "power fraction {p} outside [0, 1/2]"
            )));
        }
        let budget = (&p * prob::int(n as u64))
            .floor()
            .to_integer()
            .to_usize()
            .expect("budget fits in usize");
        Ok(ChannelParams {
            n,
            p,
            budget,
            delay: 0,
        })
    }

    /// Observation delay in bits. Only `0` (fully causal) is supported.
    pub fn with_delay(self, delay: usize) -> Result<Self> {
        if delay != 0 {
            return Err(Error::Config(format!(
                "delayed observation ({delay} bits) is not supported"
            )));
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &Prob {
        &self.p
    }

    pub fn p_f64(&self) -> f64 {
        prob::to_f64(&self.p)
    }

    /// `floor(p n)`.
    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn delay(&self) -> usize {
        self.delay
    }
}

/// What a strategy chose during a run, for diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrategyReport {
    /// Code entry chosen as the push target.
    pub target_entry: Option<usize>,
    pub target_word: Option<Bitword>,
    /// Size of the consistent set the target was drawn from.
    pub consistent_size: Option<usize>,
    /// The strategy found nothing to push towards and stayed passive.
    pub degraded: bool,
}

/// A causal jamming strategy.
///
/// `step` is called once per position, in order, with the bit just sent.
/// Returning anything other than `0` or `1` is a protocol violation.
pub trait Adversary {
    fn begin(&mut self, params: &ChannelParams) -> Result<()>;

    fn step(&mut self, bit: u8, rng: &mut RandomSource) -> u8;

    fn report(&self) -> StrategyReport {
        StrategyReport::default()
    }
}

/// Record of one transmission.
#[derive(Clone, Debug)]
pub struct ChannelTrace {
    pub x: Bitword,
    pub y: Bitword,
    /// Flipped positions, ascending.
    pub flips: Vec<usize>,
    /// Bits handed to the adversary, in order. Its view at step `i` is
    /// `view[..=i]`.
    pub view: Vec<u8>,
    /// Flip requests dropped because the budget was spent.
    pub clamped: usize,
    pub budget: usize,
    pub report: StrategyReport,
}

impl ChannelTrace {
    /// The budget was used up, or the adversary asked for more than it had.
    pub fn budget_exhausted(&self) -> bool {
        self.clamped > 0 || (self.budget > 0 && self.flips.len() == self.budget)
    }

    pub fn view_at(&self, i: usize) -> Bitword {
        Bitword::from_bits(&self.view[..=i]).expect("view holds bits")
    }

    /// Text dump: one `i= x= flip= y=` line per position, then the
    /// exhaustion flag.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut f = self.flips.iter().peekable();
        for i in 0..self.x.len() {
            let flip = f.next_if(|&&j| j == i).is_some() as u8;
            let _ = writeln!(
                out,
                "i={i} x={} flip={flip} y={}",
                self.x.get(i),
                self.y.get(i)
            );
        }
        let _ = writeln!(out, "budget_exhausted={}", self.budget_exhausted());
        out
    }
}

/// Sends `x` through the adversary under `params`.
pub fn run_channel(
    x: &Bitword,
    adv: &mut dyn Adversary,
    params: &ChannelParams,
    src: &mut RandomSource,
) -> Result<ChannelTrace> {
    if x.len() != params.n() {
        return Err(Error::Dimension(format!(
            "codeword length {} does not match block length {}",
            x.len(),
            params.n()
        )));
    }
    adv.begin(params)?;
    let budget = params.budget();
    let mut flips = Vec::new();
    let mut view = Vec::with_capacity(x.len());
    let mut clamped = 0;
    for i in 0..x.len() {
        let bit = x.get(i);
        view.push(bit);
        match adv.step(bit, src) {
            0 => {}
            1 if flips.len() < budget => flips.push(i),
            1 => clamped += 1,
            other => {
                return Err(Error::Protocol(format!(
                    "adversary returned {other} at position {i}"
                )))
            }
        }
    }
    let y = x.with_flips(&flips)?;
    Ok(ChannelTrace {
        x: x.clone(),
        y,
        flips,
        view,
        clamped,
        budget,
        report: adv.report(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::random_bitword;

    struct Constant(u8);

    impl Adversary for Constant {
        fn begin(&mut self, _: &ChannelParams) -> Result<()> {
            Ok(())
        }
        fn step(&mut self, _: u8, _: &mut RandomSource) -> u8 {
            self.0
        }
    }

    struct Spy(Vec<Bitword>, Vec<u8>);

    impl Adversary for Spy {
        fn begin(&mut self, _: &ChannelParams) -> Result<()> {
            Ok(())
        }
        fn step(&mut self, bit: u8, _: &mut RandomSource) -> u8 {
            self.1.push(bit);
            self.0.push(Bitword::from_bits(&self.1).unwrap());
            0
        }
    }

    fn w(s: &str) -> Bitword {
        s.parse().unwrap()
    }

    #[test]
    fn budget_is_floor() {
        assert_eq!(ChannelParams::new(14, 1.0 / 7.0).unwrap().budget(), 1);
        assert_eq!(
            ChannelParams::from_exact(14, prob::ratio(1, 7))
                .unwrap()
                .budget(),
            2
        );
        assert_eq!(ChannelParams::new(40, 0.15).unwrap().budget(), 6);
        assert_eq!(ChannelParams::new(10, 0.0).unwrap().budget(), 0);
        assert!(ChannelParams::new(10, 0.6).is_err());
        assert!(ChannelParams::new(0, 0.1).is_err());
        assert!(ChannelParams::new(10, 0.1).unwrap().with_delay(2).is_err());
    }

    #[test]
    fn passive_is_identity() {
        let params = ChannelParams::new(6, 0.5).unwrap();
        let x = w("101100");
        let t = run_channel(&x, &mut Constant(0), &params, &mut RandomSource::new(0, 0)).unwrap();
        assert_eq!(t.y, x);
        assert!(t.flips.is_empty());
        assert!(!t.budget_exhausted());
    }

    #[test]
    fn flipping_everything_is_clamped() {
        let params = ChannelParams::new(4, 0.5).unwrap();
        let t = run_channel(
            &w("0000"),
            &mut Constant(1),
            &params,
            &mut RandomSource::new(0, 0),
        )
        .unwrap();
        assert_eq!(t.flips, vec![0, 1]);
        assert_eq!(t.y, w("1100"));
        assert_eq!(t.clamped, 2);
        assert!(t.budget_exhausted());
        assert!(t
            .dump()
            .ends_with("i=3 x=0 flip=0 y=0\nbudget_exhausted=true\n"));
    }

    #[test]
    fn non_bits_are_protocol_errors() {
        let params = ChannelParams::new(4, 0.5).unwrap();
        let r = run_channel(
            &w("0000"),
            &mut Constant(2),
            &params,
            &mut RandomSource::new(0, 0),
        );
        assert!(matches!(r, Err(Error::Protocol(_))));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let params = ChannelParams::new(5, 0.2).unwrap();
        let r = run_channel(
            &w("0000"),
            &mut Constant(0),
            &params,
            &mut RandomSource::new(0, 0),
        );
        assert!(matches!(r, Err(Error::Dimension(_))));
    }

    #[test]
    fn spy_sees_exactly_the_prefix() {
        let params = ChannelParams::new(70, 0.1).unwrap();
        let x = random_bitword(&mut RandomSource::new(3, 0), 70);
        let mut spy = Spy(Vec::new(), Vec::new());
        let t = run_channel(&x, &mut spy, &params, &mut RandomSource::new(0, 0)).unwrap();
        for i in 0..70 {
            let expect = crate::bitcore::prefix(&x, i + 1).unwrap();
            assert_eq!(spy.0[i], expect);
            assert_eq!(t.view_at(i), expect);
        }
    }
}
