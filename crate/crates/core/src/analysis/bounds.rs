//! Rate bounds as functions of the jamming power `p`.

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::prob::{self, Prob};

fn check_unit(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("{p} is not a probability")));
    }
    Ok(())
}

fn check_power(p: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain(format!(
            "power fraction {p} outside [0, 1/2]"
        )));
    }
    Ok(())
}

/// `H(p) = -p log2 p - (1-p) log2 (1-p)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit(p)?;
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// Upper bounds on the achievable rate at power `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    /// `1 - H(p)`: what the BSC imitation leaves.
    pub bsc: f64,
    /// `max(0, 1 - 4p)`: what the wait-and-push attack leaves.
    pub push: f64,
    pub combined: f64,
}

pub fn capacity_bounds(p: f64) -> Result<Bounds> {
    check_power(p)?;
    let bsc = 1.0 - binary_entropy(p)?;
    let push = (1.0 - 4.0 * p).max(0.0);
    Ok(Bounds {
        bsc,
        push,
        combined: bsc.min(push),
    })
}

/// Gilbert-Varshamov rate `max(0, 1 - H(min(2p, 1)))`, achievable even
/// against an omniscient jammer.
pub fn gv_bound(p: f64) -> Result<f64> {
    check_power(p)?;
    Ok((1.0 - binary_entropy((2.0 * p).min(1.0))?).max(0.0))
}

/// The power where the two upper bounds cross: the root of `H(p) = 4p` in
/// `[0.1, 0.2]`, by bisection to `1e-9`.
pub fn crossover() -> f64 {
    let f = |p: f64| binary_entropy(p).expect("inside [0, 1]") - 4.0 * p;
    let (mut lo, mut hi) = (0.1, 0.2);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One row of the bound table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundRow {
    pub p: f64,
    pub bsc: f64,
    pub push: f64,
    pub combined: f64,
    pub gv: f64,
}

/// Bounds at `p = 0, step, 2 step, ...` up to `1/2`.
pub fn bound_table(step: f64) -> Result<Vec<BoundRow>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::Domain(format!("grid step {step} outside (0, 1/2]")));
    }
    let count = (0.5 / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|k| {
            // Snap to 1e-12 so 0.1 + 0.1 + 0.1 style drift never leaks into output.
            let p = ((k as f64 * step) * 1e12).round() / 1e12;
            let b = capacity_bounds(p.min(0.5))?;
            Ok(BoundRow {
                p,
                bsc: b.bsc,
                push: b.push,
                combined: b.combined,
                gv: gv_bound(p.min(0.5))?,
            })
        })
        .collect()
}

/// CSV form of [`bound_table`], header `p,bsc,push,combined,gv`.
pub fn bounds_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("p,bsc,push,combined,gv\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.p, r.bsc, r.push, r.combined, r.gv
        ));
    }
    out
}

/// Largest size a binary code of length `len` with minimum distance `d` can
/// have when `2d > len`: `floor(2d / (2d - len)) + 1`.
pub fn plotkin_max(len: u64, d: u64) -> Result<u64> {
    if 2 * d <= len {
        return Err(Error::Regime(format!(
            "Plotkin needs 2d > length; got d = {d}, length = {len}"
        )));
    }
    Ok(2 * d / (2 * d - len) + 1)
}

/// The rational Plotkin cap for suffix length `len` and distance `d`.
pub fn plotkin_cap_exact(len: &Prob, d: &Prob) -> Result<Prob> {
    let two_d = d * prob::int(2);
    let gap = &two_d - len;
    if !gap.is_positive() {
        return Err(Error::Regime(format!(
            "Plotkin needs 2d > length; got d = {d}, length = {len}"
        )));
    }
    Ok(two_d / gap + prob::int(1))
}

/// Suffix length and distance threshold of the push argument at `(p, eps)`,
/// with the resulting Plotkin cap.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotkinInstance {
    /// `4pn - eps n / 2`.
    pub len: Prob,
    /// `2pn - eps n / 8`.
    pub d: Prob,
    /// `2d / (2d - len) + 1`, which equals `16p / eps`.
    pub cap: Prob,
}

pub fn plotkin_instance(p: &Prob, eps: &Prob, n: u64) -> Result<PlotkinInstance> {
    if !eps.is_positive() {
        return Err(Error::Domain(format!("margin {eps} must be positive")));
    }
    let n = prob::int(n);
    let len = prob::int(4) * p * &n - eps * &n / prob::int(2);
    let d = prob::int(2) * p * &n - eps * &n / prob::int(8);
    let cap = plotkin_cap_exact(&len, &d)?;
    Ok(PlotkinInstance { len, d, cap })
}

/// Integer edge threshold for a real distance threshold: `dist < d_real`
/// over integers is `dist < ceil(d_real)`.
pub fn integer_threshold(d: &Prob) -> usize {
    if !d.is_positive() {
        return 0;
    }
    d.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// `2pn - eps n / 8`, the distance below which two codewords are confusable.
pub fn confusion_distance(p: &Prob, eps: &Prob, n: usize) -> Prob {
    let n = prob::int(n as u64);
    prob::int(2) * p * &n - eps * &n / prob::int(8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::ratio;

    /// `log2 x` from the series `ln x = 2 sum_{k odd} z^k / k`, `z = (x-1)/(x+1)`.
    fn log2_series(x: f64) -> f64 {
        let z = (x - 1.0) / (x + 1.0);
        let mut term = z;
        let mut sum = 0.0;
        let mut k = 1.0;
        while term.abs() > 1e-18 {
            sum += term / k;
            term *= z * z;
            k += 2.0;
        }
        2.0 * sum / std::f64::consts::LN_2
    }

    #[test]
    fn entropy_points() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let oracle = -0.11 * log2_series(0.11) - 0.89 * log2_series(0.89);
        let h = binary_entropy(0.11).unwrap();
        assert!((h - oracle).abs() < 1e-12);
        assert!((h - 0.4999).abs() < 1e-4, "{h}");
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn bound_examples() {
        let b = capacity_bounds(0.25).unwrap();
        assert_eq!((b.push, b.combined), (0.0, 0.0));
        assert_eq!(
            capacity_bounds(0.0).unwrap(),
            Bounds {
                bsc: 1.0,
                push: 1.0,
                combined: 1.0
            }
        );
        assert!(capacity_bounds(0.6).is_err());
        assert_eq!(gv_bound(0.0).unwrap(), 1.0);
        assert_eq!(gv_bound(0.25).unwrap(), 0.0);
        let h02 = -0.2 * log2_series(0.2) - 0.8 * log2_series(0.8);
        assert!((gv_bound(0.1).unwrap() - (1.0 - h02)).abs() < 1e-12);
        assert!((gv_bound(0.1).unwrap() - 0.278).abs() < 1e-3);
    }

    #[test]
    fn crossover_location() {
        let p0 = crossover();
        assert!((0.1564..=0.1565).contains(&p0), "{p0}");
        assert!((0.15641..=0.15643).contains(&p0), "{p0}");
    }

    #[test]
    fn grid_shapes() {
        let t = bound_table(0.25).unwrap();
        assert_eq!(
            t.iter().map(|r| r.p).collect::<Vec<_>>(),
            vec![0.0, 0.25, 0.5]
        );
        assert_eq!(t[1].combined, 0.0);
        assert_eq!(bound_table(0.5).unwrap().len(), 2);
        assert_eq!(bound_table(0.001).unwrap().len(), 501);
        assert!(bound_table(0.0).is_err());
        assert!(bound_table(0.75).is_err());
        let csv = bounds_csv(&t);
        assert!(csv.starts_with("p,bsc,push,combined,gv\n0,1,1,1,1\n"));
    }

    #[test]
    fn combined_is_monotone() {
        let t = bound_table(0.001).unwrap();
        for w in t.windows(2) {
            assert!(w[1].combined <= w[0].combined);
        }
        assert!(t.iter().filter(|r| r.p >= 0.25).all(|r| r.combined == 0.0));
    }

    /// Largest code of length 4 with minimum distance 3, by trying every subset.
    #[test]
    fn plotkin_against_exhaustive_search() {
        let dist = |a: u32, b: u32| (a ^ b).count_ones();
        let mut best = 0;
        for set in 0u32..(1 << 16) {
            let words: Vec<u32> = (0..16).filter(|w| set >> w & 1 == 1).collect();
            if words.len() <= best {
                continue;
            }
            let ok = words
                .iter()
                .enumerate()
                .all(|(i, &a)| words[i + 1..].iter().all(|&b| dist(a, b) >= 3));
            if ok {
                best = words.len();
            }
        }
        assert_eq!(best, 2);
        assert!(plotkin_max(4, 3).unwrap() >= best as u64);
        assert!(matches!(plotkin_max(4, 2), Err(Error::Regime(_))));
    }

    #[test]
    fn cap_instantiation_is_sixteen_p_over_eps() {
        for (p, eps, n) in [
            (ratio(3, 20), ratio(1, 5), 40),
            (ratio(1, 10), ratio(1, 100), 1000),
            (ratio(1, 7), ratio(1, 9), 63),
        ] {
            let inst = plotkin_instance(&p, &eps, n).unwrap();
            assert_eq!(inst.cap, prob::int(16) * &p / &eps);
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(integer_threshold(&ratio(21, 2)), 11);
        assert_eq!(integer_threshold(&prob::int(11)), 11);
        assert_eq!(
            confusion_distance(&ratio(3, 20), &ratio(1, 5), 40),
            ratio(11, 1)
        );
    }
}
