use crate::amplitudes::Partition;
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::decay::{DecayKind, DecayModel};
use super::series::power_sum;

/// Toy rotation-synthesis cost: `max(0, t_per_bit · log2(1/δ))` T gates to
/// resolve an amplitude of magnitude `δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TCountModel {
    pub t_per_bit: f64,
}

impl Default for TCountModel {
    fn default() -> Self {
        Self { t_per_bit: 3.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Deterministic,
    Randomized,
}

pub fn rotation_t_cost<T: Real>(model: TCountModel, delta: T) -> T {
    if !(delta > T::zero()) {
        return T::zero();
    }
    (T::lit(model.t_per_bit) * (T::one() / delta).log2()).max(T::zero())
}

/// Modelled T count for preparing one instance under `scheme`.
///
/// Deterministic truncation encodes the kept amplitudes; a randomized member
/// encodes the same plus one amplified coefficient of magnitude `S`.
pub fn t_count_estimate<T: Real>(p: &Partition<T>, amplitudes: &[T], scheme: Scheme, model: TCountModel) -> Result<T> {
    if amplitudes.len() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: amplitudes.len() });
    }
    let kept = p
        .set_a
        .iter()
        .fold(T::zero(), |acc, &i| acc + rotation_t_cost(model, amplitudes[i].abs()));
    Ok(match scheme {
        Scheme::Deterministic => kept,
        Scheme::Randomized if p.set_b.is_empty() => kept,
        Scheme::Randomized => kept + rotation_t_cost(model, p.ell1_tail),
    })
}

/// Kept-amplitude counts needed to reach a target error under both schemes.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourcePlan<T> {
    pub tau: T,
    /// Smallest `K` with `ε(K) ≤ τ`.
    pub k_det: usize,
    /// Smallest `K` with `ε(K)² ≤ τ`.
    pub k_rand: usize,
    pub ratio: T,
    pub t_count_det: T,
    pub t_count_rand: T,
}

/// `Σ_{k>K} term(k)²` of the unnormalized model, summed to infinity.
fn tail_sq<T: Real>(model: &DecayModel<T>, kept: usize) -> T {
    match model.kind {
        DecayKind::Geometric => {
            let r2 = model.rate * model.rate;
            r2.powf(T::from_count(kept)) / (T::one() - r2)
        }
        DecayKind::PowerLaw => power_sum(T::lit(2.0) * model.rate, kept + 1, None),
    }
}

/// `Σ_{k>K} term(k)`, over the model support when the infinite series diverges.
fn tail_l1<T: Real>(model: &DecayModel<T>, kept: usize) -> T {
    match model.kind {
        DecayKind::Geometric => model.rate.powf(T::from_count(kept)) / (T::one() - model.rate),
        DecayKind::PowerLaw if model.rate > T::one() => power_sum(model.rate, kept + 1, None),
        DecayKind::PowerLaw => power_sum(model.rate, kept + 1, Some(model.support)),
    }
}

/// Smallest `K ∈ [1, support]` with `pred(K)`, assuming monotonicity.
fn smallest_k(support: usize, pred: impl Fn(usize) -> bool) -> Option<usize> {
    if !pred(support) {
        return None;
    }
    let (mut lo, mut hi) = (1usize, support);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Inverts the model's tail ℓ2 norm `ε(K)` for the deterministic target
/// `ε ≤ τ` and the randomized target `ε² ≤ τ`.
///
/// `ε(K)` is the normalized tail of the infinite decay law; kept counts are
/// capped at `model.support`.
pub fn resource_plan<T: Real>(model: &DecayModel<T>, tau: T, costs: TCountModel) -> Result<ResourcePlan<T>> {
    model.validate()?;
    if !(tau > T::zero() && tau < T::one()) {
        return Err(Error::Domain { name: "tau", value: tau.as_f64(), domain: "(0, 1)" });
    }
    let total = tail_sq(model, 0);
    let eps_sq = |k: usize| tail_sq(model, k) / total;
    let too_strict = || Error::TargetTooStrict { tau: tau.as_f64(), max_kept: model.support };
    let k_det = smallest_k(model.support, |k| eps_sq(k) <= tau * tau).ok_or_else(too_strict)?;
    let k_rand = smallest_k(model.support, |k| eps_sq(k) <= tau).ok_or_else(too_strict)?;

    let norm = total.sqrt();
    let amp = |k: usize| model.term(k) / norm;
    let t_count_det =
        (1..=k_det).fold(T::zero(), |acc, k| acc + rotation_t_cost(costs, amp(k)));
    let t_count_rand = (1..=k_rand).fold(T::zero(), |acc, k| acc + rotation_t_cost(costs, amp(k)))
        + rotation_t_cost(costs, tail_l1(model, k_rand) / norm);
    Ok(ResourcePlan {
        tau,
        k_det,
        k_rand,
        ratio: T::from_count(k_det) / T::from_count(k_rand),
        t_count_det,
        t_count_rand,
    })
}
