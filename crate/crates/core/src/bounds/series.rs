//! Power sums `Σ k^{-s}` by partial summation plus an Euler–Maclaurin
//! remainder.
//!
//! The first [`DIRECT_TERMS`] terms are added explicitly; the rest is the
//! integral plus boundary corrections through the `B₆` term. With the remainder
//! starting at `k ≥ 32` the first omitted correction is below `1e-12` for every
//! exponent used here.

use crate::scalar::Real;

pub const DIRECT_TERMS: usize = 32;

fn em_corrections<T: Real>(s: T, a: T) -> T {
    // −Σ_j B_{2j}/(2j)! f^{(2j−1)}(a) for f(x) = x^{−s}, j = 1..3
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    let p1 = s * a.powf(-s - one) / T::lit(12.0);
    let p3 = s * (s + one) * (s + two) * a.powf(-s - three) / T::lit(720.0);
    let p5 = s * (s + one) * (s + two) * (s + three) * (s + four) * a.powf(-s - T::lit(5.0))
        / T::lit(30240.0);
    p1 - p3 + p5
}

fn integral<T: Real>(s: T, a: T, b: Option<T>) -> T {
    let one = T::one();
    if (s - one).abs() <= T::machine_eps() {
        return match b {
            Some(b) => (b / a).ln(),
            None => T::max_value().expect("bounded type"),
        };
    }
    let upper = match b {
        Some(b) => b.powf(one - s),
        None => T::zero(),
    };
    (a.powf(one - s) - upper) / (s - one)
}

/// `Σ_{k=lo}^{hi} k^{−s}` for `s > 0`, `lo ≥ 1`; `hi = None` means the infinite
/// tail and requires `s > 1`.
pub fn power_sum<T: Real>(s: T, lo: usize, hi: Option<usize>) -> T {
    assert!(lo >= 1, "power sums start at k = 1");
    if let Some(hi) = hi {
        if hi < lo {
            return T::zero();
        }
        if hi - lo < 2 * DIRECT_TERMS {
            return (lo..=hi).fold(T::zero(), |acc, k| acc + T::from_count(k).powf(-s));
        }
    }
    let split = lo + DIRECT_TERMS;
    let head = (lo..split).fold(T::zero(), |acc, k| acc + T::from_count(k).powf(-s));
    let a = T::from_count(split);
    let half = T::lit(0.5);
    let tail = match hi {
        None => integral(s, a, None) + half * a.powf(-s) + em_corrections(s, a),
        Some(hi) => {
            let b = T::from_count(hi);
            integral(s, a, Some(b))
                + half * (a.powf(-s) + b.powf(-s))
                + em_corrections(s, a)
                - em_corrections(s, b)
        }
    };
    head + tail
}

/// Riemann zeta `ζ(s)` for `s > 1`.
pub fn zeta<T: Real>(s: T) -> T {
    power_sum(s, 1, None)
}

/// `Σ_{k>n} k^{−s}` for `s > 1`.
pub fn zeta_tail<T: Real>(s: T, n: usize) -> T {
    power_sum(s, n + 1, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_zeta_values() {
        assert!((zeta(2.0f64) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0f64) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(3.0f64) - 1.202_056_903_159_594_2).abs() < 1e-14);
    }

    #[test]
    fn finite_sums_match_direct_summation() {
        for &s in &[0.5f64, 1.0, 1.5, 2.0, 4.0] {
            for &(lo, hi) in &[(1usize, 10usize), (5, 200), (40, 5000), (1, 100_000)] {
                let direct: f64 = (lo..=hi).rev().map(|k| (k as f64).powf(-s)).sum();
                let em = power_sum(s, lo, Some(hi));
                assert!((em - direct).abs() < 1e-11 * direct.max(1.0), "s={s} {lo}..{hi}");
            }
        }
    }

    #[test]
    fn tails_are_consistent() {
        let s = 3.0f64;
        let head: f64 = (1..=100).map(|k| (k as f64).powf(-s)).sum();
        assert!((zeta(s) - head - zeta_tail(s, 100)).abs() < 1e-14);
    }
}
