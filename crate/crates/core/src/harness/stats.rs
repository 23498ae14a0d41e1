//! Binomial confidence intervals.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

/// A point estimate with an interval around it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// A degenerate interval, as produced by exact evaluation.
    pub fn point(x: f64) -> Self {
        Interval {
            estimate: x,
            lo: x,
            hi: x,
        }
    }

    /// Half the interval length: the "width" used for slack in frequency
    /// checks.
    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Wilson score interval at `z = 1.96` for `successes` out of `trials`.
/// With no trials the interval is all of `[0, 1]`.
pub fn wilson(successes: u64, trials: u64) -> Interval {
    wilson_z(successes, trials, Z95)
}

pub fn wilson_z(successes: u64, trials: u64, z: f64) -> Interval {
    assert!(
        successes <= trials,
        "{successes} successes out of {trials} trials"
    );
    if trials == 0 {
        return Interval {
            estimate: 0.0,
            lo: 0.0,
            hi: 1.0,
        };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Interval {
        estimate: p,
        lo: (center - half).clamp(0.0, p),
        hi: (center + half).clamp(p, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Roots of `(p_hat - x)^2 = z^2 x (1 - x) / n`, solved as a quadratic.
    fn score_roots(k: u64, n: u64, z: f64) -> (f64, f64) {
        let (nf, ph) = (n as f64, k as f64 / n as f64);
        let a = 1.0 + z * z / nf;
        let b = -(2.0 * ph + z * z / nf);
        let c = ph * ph;
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        ((-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a))
    }

    #[test]
    fn zero_successes() {
        let i = wilson(0, 10);
        assert_eq!((i.estimate, i.lo), (0.0, 0.0));
        assert!((i.hi - Z95 * Z95 / (10.0 + Z95 * Z95)).abs() < 1e-12);
    }

    #[test]
    fn all_successes() {
        let i = wilson(10, 10);
        assert_eq!((i.estimate, i.hi), (1.0, 1.0));
        assert!((i.lo - 10.0 / (10.0 + Z95 * Z95)).abs() < 1e-12);
    }

    #[test]
    fn no_trials() {
        assert_eq!(
            wilson(0, 0),
            Interval {
                estimate: 0.0,
                lo: 0.0,
                hi: 1.0
            }
        );
    }

    proptest! {
        #[test]
        fn matches_quadratic_roots(n in 1u64..100_000, frac in 0.0f64..=1.0) {
            let k = ((n as f64) * frac).floor() as u64;
            let i = wilson(k, n);
            let (lo, hi) = score_roots(k, n, Z95);
            prop_assert!((i.lo - lo).abs() < 1e-9);
            prop_assert!((i.hi - hi).abs() < 1e-9);
            prop_assert!(0.0 <= i.lo && i.lo <= i.estimate && i.estimate <= i.hi && i.hi <= 1.0);
        }
    }
}
