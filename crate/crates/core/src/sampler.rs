//! Monte Carlo execution of the ensemble: seeded member draws and observable
//! estimates.
//!
//! Draws use ChaCha8 seeded from the 64-bit run seed; each draw consumes one
//! `f64` uniform on `[0, 1)` and maps it through the cumulative member
//! distribution, members ordered by basis index.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::io::RunReport;
use crate::metrics::Observable;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleRun<T> {
    pub seed: u64,
    pub shots: u64,
    /// Member index `m` to number of draws; members never drawn are absent.
    pub draw_counts: BTreeMap<usize, u64>,
    /// Mean of the per-draw member expectations (1 when no observable is given).
    pub estimate: T,
    pub std_error: T,
}

impl<T: Real> SampleRun<T> {
    pub fn report(&self, exact_value: T) -> RunReport {
        RunReport {
            seed: self.seed,
            shots: self.shots,
            estimate: self.estimate.as_f64(),
            std_error: self.std_error.as_f64(),
            exact_value: exact_value.as_f64(),
            draw_counts: self.draw_counts.clone(),
        }
    }

    /// Total-variation distance between the draw frequencies and `{p_m}`.
    pub fn tv_distance(&self, e: &Ensemble<T>) -> T {
        let m = self.shots as f64;
        let tv: f64 = e
            .members()
            .iter()
            .map(|mem| {
                let freq = self.draw_counts.get(&mem.index_m).copied().unwrap_or(0) as f64 / m;
                (freq - mem.probability.as_f64()).abs()
            })
            .sum();
        T::lit(0.5 * tv)
    }
}

/// Positions into `e.members()` in increasing basis index, with their
/// cumulative probabilities.
fn cumulative<T: Real>(e: &Ensemble<T>) -> (Vec<usize>, Vec<f64>) {
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by_key(|&k| e.members()[k].index_m);
    let mut acc = 0.0;
    let cdf = order
        .iter()
        .map(|&k| {
            acc += e.members()[k].probability.as_f64();
            acc
        })
        .collect();
    (order, cdf)
}

fn draw_positions<T: Real>(e: &Ensemble<T>, shots: u64, seed: u64) -> Result<Vec<usize>> {
    if shots == 0 {
        return Err(Error::Domain { name: "shots", value: 0.0, domain: ">= 1" });
    }
    let (order, cdf) = cumulative(e);
    let total = *cdf.last().expect("ensembles are never empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..shots)
        .map(|_| {
            let u = rng.gen::<f64>() * total;
            let pos = cdf.partition_point(|&c| c <= u).min(order.len() - 1);
            order[pos]
        })
        .collect())
}

fn tally<T: Real>(e: &Ensemble<T>, draws: &[usize]) -> BTreeMap<usize, u64> {
    let mut counts = BTreeMap::new();
    for &k in draws {
        *counts.entry(e.members()[k].index_m).or_insert(0) += 1;
    }
    counts
}

pub fn sample_members<T: Real>(e: &Ensemble<T>, shots: u64, seed: u64) -> Result<SampleRun<T>> {
    let draws = draw_positions(e, shots, seed)?;
    Ok(SampleRun { seed, shots, draw_counts: tally(e, &draws), estimate: T::one(), std_error: T::zero() })
}

/// `⟨ψ̃_m|O|ψ̃_m⟩` for every member, in member order.
pub fn member_expectations<T: Real>(e: &Ensemble<T>, obs: &Observable<T>) -> Result<Vec<T>> {
    (0..e.len()).map(|k| obs.expectation(&e.member_state(k))).collect()
}

/// `Tr[ρ_mix O] = Σ_m p_m ⟨ψ̃_m|O|ψ̃_m⟩`.
pub fn exact_expectation<T: Real>(e: &Ensemble<T>, obs: &Observable<T>) -> Result<T> {
    let per = member_expectations(e, obs)?;
    Ok(e.members().iter().zip(&per).fold(T::zero(), |a, (m, &x)| a + m.probability * x))
}

pub fn estimate_observable<T: Real>(
    e: &Ensemble<T>,
    obs: &Observable<T>,
    shots: u64,
    seed: u64,
) -> Result<SampleRun<T>> {
    let per = member_expectations(e, obs)?;
    let draws = draw_positions(e, shots, seed)?;
    let m = T::lit(shots as f64);
    let mean = draws.iter().fold(T::zero(), |a, &k| a + per[k]) / m;
    let std_error = if shots > 1 {
        let ss = draws.iter().fold(T::zero(), |a, &k| a + (per[k] - mean) * (per[k] - mean));
        (ss / (m - T::one())).sqrt() / m.sqrt()
    } else {
        T::zero()
    };
    Ok(SampleRun { seed, shots, draw_counts: tally(e, &draws), estimate: mean, std_error })
}
