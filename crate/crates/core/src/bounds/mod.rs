//! Analytic error bounds for the randomized ensemble, decay-model constants,
//! and resource estimates.

mod decay;
mod resources;
pub mod series;

pub use decay::{fit_decay, geometric_constant, power_law_constant, DecayKind, DecayModel, MIN_FIT_POINTS};
pub use resources::{resource_plan, rotation_t_cost, t_count_estimate, ResourcePlan, Scheme, TCountModel};

use crate::amplitudes::{AmplitudeVector, Partition};
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::metrics::DensityRepr;
use crate::scalar::Real;

/// Quantities entering the mixing-lemma bound for one ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct MixingBounds<T> {
    pub eps: T,
    pub ell1_tail: T,
    pub c_ratio: T,
    pub gamma: T,
    /// `max_m ‖ψ̃_m − ψ‖`.
    pub a_max: T,
    /// `‖Σ_m p_m ψ̃_m − ψ‖`.
    pub b_bias: T,
    /// `|Γ⁻¹ − 1|`, which `b_bias` must equal for canonical ensembles.
    pub b_closed_form: T,
    /// `a² + 2b`.
    pub lemma_bound: T,
    /// `((c+2)² + c/2)·ε²`.
    pub theory_curve: T,
    /// `((c+2)² + c²)·ε²`, the leading order of `a² + 2b` with the first-order
    /// `a` and `b` estimates.
    pub lemma_curve: T,
    /// `(c+2)·ε`.
    pub appendix_a_bound: T,
}

impl<T: Real> MixingBounds<T> {
    /// Bounds for a partition with no tail: the target is prepared exactly.
    pub fn exact(p: &Partition<T>) -> Self {
        let z = T::zero();
        Self {
            eps: p.eps,
            ell1_tail: p.ell1_tail,
            c_ratio: p.c_ratio,
            gamma: T::one(),
            a_max: z,
            b_bias: z,
            b_closed_form: z,
            lemma_bound: z,
            theory_curve: z,
            lemma_curve: z,
            appendix_a_bound: z,
        }
    }
}

fn curves<T: Real>(c: T, eps: T) -> (T, T, T) {
    let two = T::lit(2.0);
    let cp2 = c + two;
    let theory = (cp2 * cp2 + c / two) * eps * eps;
    let lemma = (cp2 * cp2 + c * c) * eps * eps;
    (theory, lemma, cp2 * eps)
}

/// Worst-case deviation `a` and mean bias `b` of an arbitrary mixture of pure
/// states relative to `ψ`, by direct vector arithmetic.
pub fn mixing_parameters<T: Real>(rho: &DensityRepr<T>, psi: &AmplitudeVector<T>) -> Result<(T, T)> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: rho.dim() });
    }
    let target = psi.values();
    let mut a = T::zero();
    let mut mean = vec![T::zero(); psi.dim()];
    for (w, s) in rho.pairs() {
        let mut dev = T::zero();
        for ((acc, &x), &y) in mean.iter_mut().zip(s.values()).zip(target) {
            dev += (x - y) * (x - y);
            *acc += *w * x;
        }
        a = a.max(dev.sqrt());
    }
    let b = mean
        .iter()
        .zip(target)
        .fold(T::zero(), |s, (&x, &y)| s + (x - y) * (x - y))
        .sqrt();
    Ok((a, b))
}

/// Evaluates `a`, `b` and every derived bound for a protocol ensemble.
pub fn compute_mixing_bounds<T: Real>(e: &Ensemble<T>, psi: &AmplitudeVector<T>) -> Result<MixingBounds<T>> {
    if e.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: psi.dim() });
    }
    let target = psi.values();
    let mut a = T::zero();
    let mut mean = vec![T::zero(); psi.dim()];
    for (k, m) in e.members().iter().enumerate() {
        let state = e.member_state(k);
        let mut dev = T::zero();
        for ((acc, &x), &y) in mean.iter_mut().zip(state.values()).zip(target) {
            dev += (x - y) * (x - y);
            *acc += m.probability * x;
        }
        a = a.max(dev.sqrt());
    }
    let b = mean
        .iter()
        .zip(target)
        .fold(T::zero(), |s, (&x, &y)| s + (x - y) * (x - y))
        .sqrt();
    let p = e.partition();
    let (theory_curve, lemma_curve, appendix_a_bound) = curves(p.c_ratio, p.eps);
    Ok(MixingBounds {
        eps: p.eps,
        ell1_tail: p.ell1_tail,
        c_ratio: p.c_ratio,
        gamma: e.gamma(),
        a_max: a,
        b_bias: b,
        b_closed_form: (T::one() / e.gamma() - T::one()).abs(),
        lemma_bound: a * a + T::lit(2.0) * b,
        theory_curve,
        lemma_curve,
        appendix_a_bound,
    })
}
