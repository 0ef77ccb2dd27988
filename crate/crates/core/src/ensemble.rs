//! The randomized ensemble: one member per tail index, each keeping the whole
//! kept set plus a single amplified tail amplitude.

use std::borrow::Cow;

use rayon::prelude::*;

use crate::amplitudes::{AmplitudeVector, Partition};
use crate::error::{Error, Result};
use crate::metrics::DensityRepr;
use crate::scalar::{sign_of, Real};

/// Ensembles with more members than this keep only member metadata and
/// rebuild each state on demand.
pub const DEFAULT_EAGER_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub struct EnsembleOptions {
    pub eager_limit: usize,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        Self { eager_limit: DEFAULT_EAGER_LIMIT }
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleMember<T> {
    /// Tail index `m` that this member amplifies.
    pub index_m: usize,
    pub probability: T,
    /// `α_m / p_m`; equals `sgn(α_m)·S` for the canonical probabilities.
    pub amplified_coefficient: T,
    /// `Γ_m = ‖ψ_m‖`.
    pub gamma_m: T,
    state: Option<AmplitudeVector<T>>,
}

#[derive(Clone, Debug)]
pub struct Ensemble<T> {
    members: Vec<EnsembleMember<T>>,
    gamma: T,
    partition: Partition<T>,
    kept: Vec<(usize, T)>,
    n_qubits: u32,
    canonical: bool,
}

/// Builds the canonical ensemble `p_m = |α_m| / S`.
pub fn build_ensemble<T: Real>(p: &Partition<T>, psi: &AmplitudeVector<T>) -> Result<Ensemble<T>> {
    Ensemble::build(p, psi, EnsembleOptions::default())
}

impl<T: Real> Ensemble<T> {
    pub fn build(p: &Partition<T>, psi: &AmplitudeVector<T>, opts: EnsembleOptions) -> Result<Self> {
        p.check_matches(psi)?;
        if p.set_b.is_empty() {
            return Err(Error::NothingToRandomize);
        }
        let s = p.ell1_tail;
        let v = psi.values();
        let metadata: Vec<(usize, T, T)> = p
            .set_b
            .iter()
            .map(|&m| (m, v[m].abs() / s, sign_of(v[m]) * s))
            .collect();
        let gamma = (T::one() - p.eps * p.eps + s * s).sqrt();
        Self::assemble(p, psi, metadata, gamma, true, opts)
    }

    /// Experimental hook: arbitrary selection probabilities over the tail, in
    /// the order of `p.set_b`. No error bound applies to such ensembles.
    pub fn build_with_probabilities(
        p: &Partition<T>,
        psi: &AmplitudeVector<T>,
        probabilities: &[T],
        opts: EnsembleOptions,
    ) -> Result<Self> {
        p.check_matches(psi)?;
        if p.set_b.is_empty() {
            return Err(Error::NothingToRandomize);
        }
        if probabilities.len() != p.set_b.len() {
            return Err(Error::DimensionMismatch {
                expected: p.set_b.len(),
                found: probabilities.len(),
            });
        }
        let total = probabilities.iter().fold(T::zero(), |a, &b| a + b);
        if probabilities.iter().any(|&q| !(q > T::zero()))
            || (total - T::one()).abs() > T::lit(1e-12).max(T::machine_eps() * T::lit(64.0))
        {
            return Err(Error::Invalid(
                "selection probabilities must be positive and sum to 1".into(),
            ));
        }
        let v = psi.values();
        let metadata = p
            .set_b
            .iter()
            .zip(probabilities)
            .map(|(&m, &q)| (m, q, v[m] / q))
            .collect();
        let gamma = (T::one() - p.eps * p.eps + p.ell1_tail * p.ell1_tail).sqrt();
        Self::assemble(p, psi, metadata, gamma, false, opts)
    }

    fn assemble(
        p: &Partition<T>,
        psi: &AmplitudeVector<T>,
        metadata: Vec<(usize, T, T)>,
        gamma: T,
        canonical: bool,
        opts: EnsembleOptions,
    ) -> Result<Self> {
        let v = psi.values();
        let kept: Vec<(usize, T)> = p.set_a.iter().map(|&i| (i, v[i])).collect();
        let kept_sq = p.kept_norm_sq;
        let mut members: Vec<EnsembleMember<T>> = metadata
            .into_iter()
            .map(|(index_m, probability, amplified_coefficient)| EnsembleMember {
                index_m,
                probability,
                amplified_coefficient,
                gamma_m: (kept_sq + amplified_coefficient * amplified_coefficient).sqrt(),
                state: None,
            })
            .collect();
        let mut ens = Self {
            members: Vec::new(),
            gamma,
            partition: p.clone(),
            kept,
            n_qubits: psi.n_qubits(),
            canonical,
        };
        if members.len() <= opts.eager_limit {
            let states: Vec<AmplitudeVector<T>> = members
                .par_iter()
                .map(|m| ens.materialize(m))
                .collect::<Result<_>>()?;
            for (m, s) in members.iter_mut().zip(states) {
                m.state = Some(s);
            }
        }
        ens.members = members;
        Ok(ens)
    }

    fn unnormalized(&self, member: &EnsembleMember<T>) -> Vec<T> {
        let mut values = vec![T::zero(); self.partition.dim];
        for &(i, a) in &self.kept {
            values[i] = a;
        }
        values[member.index_m] = member.amplified_coefficient;
        values
    }

    fn materialize(&self, member: &EnsembleMember<T>) -> Result<AmplitudeVector<T>> {
        let mut values = self.unnormalized(member);
        for x in values.iter_mut() {
            *x /= member.gamma_m;
        }
        AmplitudeVector::from_normalized(values, self.n_qubits, format!("member:{}", member.index_m))
    }

    pub fn members(&self) -> &[EnsembleMember<T>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Shared normalization `Γ = √(1 − ε² + S²)`.
    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn partition(&self) -> &Partition<T> {
        &self.partition
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.partition.dim
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_eager(&self) -> bool {
        self.members.first().is_some_and(|m| m.state.is_some())
    }

    /// Normalized member state `|ψ̃_m⟩`, built on demand for lazy ensembles.
    pub fn member_state(&self, k: usize) -> Cow<'_, AmplitudeVector<T>> {
        let member = &self.members[k];
        match &member.state {
            Some(s) => Cow::Borrowed(s),
            None => Cow::Owned(self.materialize(member).expect("member states are unit norm")),
        }
    }

    /// Unnormalized member `|ψ_m⟩ = ψ_A + (α_m/p_m)|m⟩`.
    pub fn unnormalized_member(&self, k: usize) -> Vec<T> {
        self.unnormalized(&self.members[k])
    }

    pub fn probability_sum(&self) -> T {
        self.members.iter().fold(T::zero(), |acc, m| acc + m.probability)
    }

    /// `max_m |Γ_m − Γ|`.
    pub fn max_gamma_deviation(&self) -> T {
        self.members
            .iter()
            .fold(T::zero(), |acc, m| acc.max((m.gamma_m - self.gamma).abs()))
    }

    /// `‖Σ_m p_m ψ_m − ψ‖`, evaluated componentwise on the unnormalized members.
    pub fn reconstruction_residual(&self, psi: &AmplitudeVector<T>) -> Result<T> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let mut acc = vec![T::zero(); self.dim()];
        for m in &self.members {
            for &(i, a) in &self.kept {
                acc[i] += m.probability * a;
            }
            acc[m.index_m] += m.probability * m.amplified_coefficient;
        }
        Ok(acc
            .iter()
            .zip(psi.values())
            .fold(T::zero(), |s, (&x, &y)| s + (x - y) * (x - y))
            .sqrt())
    }

    /// `ρ_approx = Σ_m p_m |ψ̃_m⟩⟨ψ̃_m|` as weighted pure states.
    pub fn mixture_density(&self) -> Result<DensityRepr<T>> {
        let pairs = (0..self.members.len())
            .map(|k| (self.members[k].probability, self.member_state(k).into_owned()))
            .collect();
        DensityRepr::new(pairs)
    }
}

pub fn reconstruction_residual<T: Real>(e: &Ensemble<T>, psi: &AmplitudeVector<T>) -> Result<T> {
    e.reconstruction_residual(psi)
}

pub fn mixture_density<T: Real>(e: &Ensemble<T>) -> Result<DensityRepr<T>> {
    e.mixture_density()
}
