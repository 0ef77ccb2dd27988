//! Randomized preparation of states with small-amplitude tails.
//!
//! A target `ψ` is split at a threshold into kept amplitudes and a tail. The
//! deterministic scheme drops the tail; the randomized scheme prepares one of
//! several simpler states, each carrying a single amplified tail term, so that
//! the mixture approximates `ψ` to second order in the tail norm.

// `!(x > 0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitudes;
pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod generators;
pub mod io;
pub mod metrics;
pub mod sampler;
mod scalar;
pub mod sweep;

pub use amplitudes::{cauchy_schwarz_check, normalize, partition, AmplitudeVector, Partition};
pub use bounds::{compute_mixing_bounds, MixingBounds};
pub use ensemble::{build_ensemble, Ensemble, EnsembleMember, EnsembleOptions};
pub use error::{Error, Result};
pub use metrics::{dense_trace_distance_oracle, ensemble_trace_distance, mixed_trace_distance, truncation_error, DensityRepr, Observable};
pub use scalar::Real;

pub type AmplitudeVector64 = AmplitudeVector<f64>;
pub type AmplitudeVector32 = AmplitudeVector<f32>;
pub type Partition64 = Partition<f64>;
pub type Partition32 = Partition<f32>;
pub type Ensemble64 = Ensemble<f64>;
pub type Ensemble32 = Ensemble<f32>;
pub type DensityRepr64 = DensityRepr<f64>;
pub type Observable64 = Observable<f64>;
pub type MixingBounds64 = MixingBounds<f64>;
