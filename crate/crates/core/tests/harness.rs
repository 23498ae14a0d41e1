use causal_channel::decoder::DecoderKind;
use causal_channel::harness::{
    exact_on, flip_count_distribution, run, run_exact, run_monte_carlo, run_on, run_sweep, wilson,
    CodeSpec, ExperimentSpec, Mode, SweepSpec, CSV_HEADER,
};
use causal_channel::prob::{self, binomial, ratio, Prob};
use num_traits::{One, Zero};

fn spec(
    code: CodeSpec,
    n: usize,
    p: Prob,
    adversary: &str,
    decoder: &str,
    trials: u64,
) -> ExperimentSpec {
    ExperimentSpec {
        code,
        n,
        p,
        adversary: adversary.parse().unwrap(),
        decoder: decoder.parse().unwrap(),
        trials,
        seed: 2024,
        mode: Mode::MonteCarlo,
        per_message: false,
    }
}

#[test]
fn passive_channel_is_noiseless() {
    let s = spec(
        CodeSpec::Random { rate: 0.5, seed: 1 },
        10,
        ratio(1, 5),
        "passive",
        "mindist",
        500,
    );
    let mc = run_monte_carlo(&s).unwrap();
    assert_eq!(mc.errors, 0);
    assert_eq!(mc.estimate(), 0.0);
    assert!(mc.interval.lo == 0.0 && mc.interval.hi > 0.0);
    let ex = run_exact(&s).unwrap();
    assert!(ex.exact.unwrap().error.is_zero());
    assert_eq!((ex.interval.lo, ex.interval.hi), (0.0, 0.0));
}

#[test]
fn repetition_corrects_one_flip() {
    let mut s = spec(
        CodeSpec::Repetition,
        3,
        ratio(1, 3),
        "fixed:0",
        "mindist",
        1000,
    );
    s.mode = Mode::Exact;
    let ex = run(&s).unwrap();
    let detail = ex.exact.as_ref().unwrap();
    assert!(detail.error.is_zero());
    assert_eq!(detail.flip_distribution, vec![Prob::zero(), Prob::one()]);
    assert!(detail.exhaustion.is_one());
    let mc = run_monte_carlo(&s).unwrap();
    assert_eq!(mc.errors, 0);
    assert_eq!(mc.diagnostics.budget_exhausted, 1000);
    // A second listed flip would exceed the budget; the strategy skips it.
    let s2 = ExperimentSpec {
        adversary: "fixed:0,1".parse().unwrap(),
        ..s
    };
    let mc = run_monte_carlo(&s2).unwrap();
    assert_eq!((mc.errors, mc.diagnostics.clamped), (0, 0));
    assert_eq!(mc.diagnostics.flip_histogram, vec![0, 1000]);
}

#[test]
fn monte_carlo_agrees_with_enumeration() {
    for (adv, dec) in [
        ("waitpush:1/4", "map"),
        ("bsc:1/8", "mindist"),
        ("waitpushprob:1/4", "list:1"),
    ] {
        let s = spec(
            CodeSpec::Random {
                rate: 0.375,
                seed: 7,
            },
            8,
            ratio(1, 4),
            adv,
            dec,
            20_000,
        );
        let code = s.code.build(s.n).unwrap();
        let exact = prob::to_f64(&exact_on(&code, &s).unwrap().exact.unwrap().error);
        let mc = run_on(&code, &s).unwrap();
        let w = mc.interval.half_width();
        assert!(
            (mc.estimate() - exact).abs() <= 3.0 * w,
            "{adv}/{dec}: mc {} vs exact {exact}",
            mc.estimate()
        );
    }
}

#[test]
fn estimates_tighten_with_more_trials() {
    let base = spec(
        CodeSpec::Random {
            rate: 0.375,
            seed: 7,
        },
        8,
        ratio(1, 4),
        "waitpush:1/4",
        "map",
        500,
    );
    let code = base.code.build(base.n).unwrap();
    let exact = prob::to_f64(&exact_on(&code, &base).unwrap().exact.unwrap().error);
    let widths: Vec<f64> = [500, 5000, 50_000]
        .iter()
        .map(|&t| {
            let mc = run_on(
                &code,
                &ExperimentSpec {
                    trials: t,
                    ..base.clone()
                },
            )
            .unwrap();
            assert!((mc.estimate() - exact).abs() <= 3.0 * mc.interval.half_width());
            mc.interval.half_width()
        })
        .collect();
    assert!(widths[0] > widths[1] && widths[1] > widths[2], "{widths:?}");
}

#[test]
fn diagnostics_are_sound() {
    // Budget 3, flip probability 1/5 per bit.
    let n = 12;
    let s = spec(
        CodeSpec::Random {
            rate: 0.25,
            seed: 3,
        },
        n,
        ratio(1, 4),
        "bsc:1/20",
        "mindist",
        40_000,
    );
    let mc = run_monte_carlo(&s).unwrap();
    assert_eq!(mc.diagnostics.flip_histogram.iter().sum::<u64>(), 40_000);

    // P[Bin(12, 1/5) >= 3] summed term by term.
    let q = ratio(1, 5);
    let tail: Prob = (3..=n as u64)
        .map(|k| {
            Prob::from_integer(binomial(n as u64, k).into())
                * num_traits::pow(q.clone(), k as usize)
                * num_traits::pow(Prob::one() - &q, n - k as usize)
        })
        .fold(Prob::zero(), |a, b| a + b);

    let code = s.code.build(n).unwrap();
    let exact = exact_on(
        &code,
        &ExperimentSpec {
            mode: Mode::Exact,
            ..s.clone()
        },
    )
    .unwrap();
    assert_eq!(exact.exact.unwrap().exhaustion, tail);
    let freq = wilson(mc.diagnostics.budget_exhausted, mc.trials);
    let t = prob::to_f64(&tail);
    assert!(freq.lo - 2.0 * freq.half_width() <= t && t <= freq.hi + 2.0 * freq.half_width());
    assert_eq!(flip_count_distribution(&code, &s).unwrap().len(), 4);
}

#[test]
fn push_events_occur_at_their_predicted_rates() {
    // n = 24, p = 1/6, margin 1/3: wait 12 bits of 16, small-set threshold
    // 2^(eps n / 4) = 4, close-target threshold 2pn - eps n / 8 = 7.
    let (p, eps) = (ratio(1, 6), ratio(1, 3));
    let s = spec(
        CodeSpec::Random {
            rate: 2.0 / 3.0,
            seed: 11,
        },
        24,
        p,
        "waitpush:1/3",
        "mindist",
        20_000,
    );
    let mc = run_monte_carlo(&s).unwrap();
    let d = &mc.diagnostics;
    assert_eq!(d.consistent_observed(), 20_000);
    let small = d.small_consistent_rate();
    let bound = (-prob::to_f64(&eps) * 24.0 / 4.0).exp2();
    assert!(
        small.estimate <= bound + 3.0 * small.half_width(),
        "small {small:?}"
    );
    let close = d.close_target_rate();
    let floor = prob::to_f64(&eps) / (64.0 * prob::to_f64(&ratio(1, 6)));
    assert!(
        close.estimate >= floor - 3.0 * close.half_width(),
        "close {close:?}"
    );
}

#[test]
fn per_message_tracking() {
    let mut s = spec(
        CodeSpec::Random {
            rate: 0.25,
            seed: 2,
        },
        8,
        ratio(1, 4),
        "waitpush:1/4",
        "mindist",
        4000,
    );
    s.per_message = true;
    let mc = run_monte_carlo(&s).unwrap();
    let d = &mc.diagnostics;
    assert_eq!(d.per_message.len(), 4);
    assert_eq!(d.per_message.values().map(|v| v.1).sum::<u64>(), 4000);
    assert_eq!(d.per_message.values().map(|v| v.0).sum::<u64>(), mc.errors);
    let (_, worst) = d.worst_message().unwrap();
    assert!(worst >= mc.estimate());

    let ex = run_exact(&s).unwrap();
    let detail = ex.exact.unwrap();
    let avg = detail
        .message_errors
        .iter()
        .fold(Prob::zero(), |a, e| a + e)
        / prob::int(4);
    assert_eq!(avg, detail.error);
    assert!(detail.worst_message().unwrap().1 >= &detail.error);
}

#[test]
fn single_cell_sweep_is_one_run() {
    let g = SweepSpec {
        ns: vec![10],
        rates: vec![0.3],
        ps: vec![ratio(1, 5)],
        epss: vec![ratio(1, 10)],
        adversary: "waitpush:1/10".parse().unwrap(),
        decoder: DecoderKind::MinDist,
        trials: 3000,
        seed: 99,
        mode: Mode::MonteCarlo,
        ensemble: false,
    };
    let cells = run_sweep(&g, 0, |_| {});
    assert_eq!(cells.len(), 1);
    let direct = run(&cells[0].spec).unwrap().row(&cells[0].spec);
    assert_eq!(cells[0].outcome.as_ref().unwrap(), &direct);
    let again = run_sweep(&g, 0, |_| {});
    assert_eq!(again[0].outcome.as_ref().unwrap().to_csv(), direct.to_csv());
    assert_eq!(CSV_HEADER.split(',').count(), 12);
}

#[test]
fn error_grows_as_rate_crosses_the_bound() {
    // p = 1/8: the combined bound is 1 - 4p = 1/2. Error should be near 0
    // well below it and clearly positive above.
    let g = SweepSpec {
        ns: vec![16],
        rates: vec![0.125, 0.25, 0.75, 0.875],
        ps: vec![ratio(1, 8)],
        epss: vec![ratio(1, 4)],
        adversary: "waitpush:1/4".parse().unwrap(),
        decoder: DecoderKind::MinDist,
        trials: 4000,
        seed: 5,
        mode: Mode::MonteCarlo,
        ensemble: false,
    };
    let errs: Vec<f64> = run_sweep(&g, 0, |_| {})
        .iter()
        .map(|c| c.outcome.as_ref().unwrap().err)
        .collect();
    assert!(errs[0] <= errs[2] && errs[1] <= errs[3], "{errs:?}");
    assert!(errs[3] > 0.05, "{errs:?}");
}

#[test]
fn exact_mode_refuses_huge_instances() {
    let mut s = spec(
        CodeSpec::Random {
            rate: 0.75,
            seed: 1,
        },
        32,
        ratio(1, 4),
        "bsc:1/8",
        "mindist",
        1,
    );
    s.mode = Mode::Exact;
    let err = run(&s).unwrap_err();
    assert!(
        matches!(err, causal_channel::Error::Capacity { .. }),
        "{err}"
    );
}
