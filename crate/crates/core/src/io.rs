//! Text formats: state files, observable files and JSON reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{AmplitudeVector, MAX_QUBITS};
use crate::bounds::{DecayModel, MixingBounds, ResourcePlan};
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::metrics::Observable;
use crate::scalar::Real;

#[derive(Deserialize)]
struct StateFile {
    n_qubits: u32,
    values: Vec<f64>,
    #[serde(default)]
    label: String,
}

/// Renders `psi` as a state file; every value carries 17 significant digits.
pub fn format_state<T: Real>(psi: &AmplitudeVector<T>) -> String {
    let label = serde_json::to_string(psi.label()).expect("strings always serialize");
    let mut out = format!("{{\n  \"n_qubits\": {},\n  \"label\": {label},\n  \"values\": [", psi.n_qubits());
    for (i, v) in psi.values().iter().enumerate() {
        let sep = if i == 0 { "\n    " } else { ",\n    " };
        write!(out, "{sep}{:.16e}", v.as_f64()).expect("writing to a String");
    }
    out.push_str("\n  ]\n}\n");
    out
}

pub fn save_state<T: Real>(path: impl AsRef<Path>, psi: &AmplitudeVector<T>) -> Result<()> {
    std::fs::write(path, format_state(psi))?;
    Ok(())
}

fn register_for(len: usize) -> u32 {
    len.max(2).next_power_of_two().trailing_zeros()
}

/// Parses a state file, or failing the leading `{`, a newline-separated list
/// of decimals (blank lines and `#` comments skipped).
pub fn parse_state<T: Real>(text: &str, n_qubits: Option<u32>) -> Result<AmplitudeVector<T>> {
    let (values, own_n, label) = if text.trim_start().starts_with('{') {
        let f: StateFile = serde_json::from_str(text)?;
        if f.n_qubits > MAX_QUBITS {
            return Err(Error::Domain { name: "n_qubits", value: f.n_qubits as f64, domain: "<= 26" });
        }
        (f.values, Some(f.n_qubits), f.label)
    } else {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: not a number: {line:?}", lineno + 1)))?;
            values.push(v);
        }
        (values, None, String::new())
    };
    if values.is_empty() {
        return Err(Error::Parse("no amplitudes found".into()));
    }
    let n = n_qubits.or(own_n).unwrap_or_else(|| register_for(values.len()));
    let raw: Vec<T> = values.into_iter().map(T::lit).collect();
    AmplitudeVector::normalize_if_needed(raw, n, label)
}

#[derive(Serialize, Deserialize)]
struct ObservableFile {
    k_qubits: u32,
    rows: Vec<Vec<f64>>,
}

pub fn parse_observable<T: Real>(text: &str) -> Result<Observable<T>> {
    let f: ObservableFile = serde_json::from_str(text)?;
    let d = f.rows.len();
    if f.rows.iter().any(|r| r.len() != d) {
        return Err(Error::Parse("observable rows must form a square matrix".into()));
    }
    let m = DMatrix::from_fn(d, d, |i, j| T::lit(f.rows[i][j]));
    Observable::new(f.k_qubits, m)
}

pub fn load_observable<T: Real>(path: impl AsRef<Path>) -> Result<Observable<T>> {
    parse_observable(&std::fs::read_to_string(path)?)
}

pub fn format_observable<T: Real>(obs: &Observable<T>) -> Result<String> {
    let m = obs.matrix();
    let rows = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].as_f64()).collect()).collect();
    Ok(serde_json::to_string_pretty(&ObservableFile { k_qubits: obs.k_qubits(), rows })?)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundsReport {
    pub eps: f64,
    #[serde(rename = "S")]
    pub ell1_tail: f64,
    #[serde(rename = "c")]
    pub c_ratio: f64,
    pub gamma: f64,
    #[serde(rename = "a")]
    pub a_max: f64,
    #[serde(rename = "b")]
    pub b_bias: f64,
    pub lemma_bound: f64,
    pub theory_curve: f64,
    pub appendix_a_bound: f64,
}

impl<T: Real> From<&MixingBounds<T>> for BoundsReport {
    fn from(b: &MixingBounds<T>) -> Self {
        Self {
            eps: b.eps.as_f64(),
            ell1_tail: b.ell1_tail.as_f64(),
            c_ratio: b.c_ratio.as_f64(),
            gamma: b.gamma.as_f64(),
            a_max: b.a_max.as_f64(),
            b_bias: b.b_bias.as_f64(),
            lemma_bound: b.lemma_bound.as_f64(),
            theory_curve: b.theory_curve.as_f64(),
            appendix_a_bound: b.appendix_a_bound.as_f64(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MemberSummary {
    pub m: usize,
    pub p_m: f64,
    pub amplified_coefficient: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EnsembleSummary {
    pub gamma: f64,
    pub members: Vec<MemberSummary>,
}

impl<T: Real> From<&Ensemble<T>> for EnsembleSummary {
    fn from(e: &Ensemble<T>) -> Self {
        let members = e
            .members()
            .iter()
            .map(|m| MemberSummary {
                m: m.index_m,
                p_m: m.probability.as_f64(),
                amplified_coefficient: m.amplified_coefficient.as_f64(),
            })
            .collect();
        Self { gamma: e.gamma().as_f64(), members }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub seed: u64,
    pub shots: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub exact_value: f64,
    pub draw_counts: BTreeMap<usize, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PlanReport {
    pub kind: String,
    pub rate: f64,
    pub fit_residual: f64,
    pub support: usize,
    pub tau: f64,
    pub k_det: usize,
    pub k_rand: usize,
    pub ratio: f64,
    pub t_count_det: f64,
    pub t_count_rand: f64,
}

impl PlanReport {
    pub fn new<T: Real>(model: &DecayModel<T>, plan: &ResourcePlan<T>) -> Self {
        Self {
            kind: model.kind.as_str().to_string(),
            rate: model.rate.as_f64(),
            fit_residual: model.fit_residual.as_f64(),
            support: model.support,
            tau: plan.tau.as_f64(),
            k_det: plan.k_det,
            k_rand: plan.k_rand,
            ratio: plan.ratio.as_f64(),
            t_count_det: plan.t_count_det.as_f64(),
            t_count_rand: plan.t_count_rand.as_f64(),
        }
    }
}
