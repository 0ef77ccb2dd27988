//! Threshold sweeps: one row of errors and bounds per threshold, CSV output
//! and re-verification of emitted rows.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::amplitudes::{AmplitudeVector, Partition};
use crate::bounds::compute_mixing_bounds;
use crate::ensemble::{Ensemble, EnsembleOptions};
use crate::error::{Error, Result};
use crate::metrics::{ensemble_trace_distance, truncation_error};
use crate::scalar::Real;

pub const COLUMNS: [&str; 12] = [
    "threshold",
    "k_kept",
    "eps",
    "ell1_tail",
    "c_ratio",
    "a_max",
    "b_bias",
    "lemma_bound",
    "theory_curve",
    "dist_det",
    "dist_rand",
    "note",
];

/// Slack allowed when re-verifying rows.
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct RowValues {
    pub k_kept: usize,
    pub eps: f64,
    pub ell1_tail: f64,
    pub c_ratio: f64,
    pub a_max: f64,
    pub b_bias: f64,
    pub lemma_bound: f64,
    pub theory_curve: f64,
    pub dist_det: f64,
    pub dist_rand: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    /// `None` when the threshold leaves either set empty; see `note`.
    pub values: Option<RowValues>,
    pub note: String,
}

/// Parses `t_min:t_max:count` into `count` geometrically spaced thresholds,
/// largest first. A bare number is a one-point grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: &str| Error::InvalidGrid(format!("{spec:?}: {msg}"));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad("not a number"));
    let (lo, hi, count) = match parts.as_slice() {
        [t] => (num(t)?, num(t)?, 1),
        [lo, hi, n] => (num(lo)?, num(hi)?, n.parse::<usize>().map_err(|_| bad("count must be a positive integer"))?),
        _ => return Err(bad("expected t_min:t_max:count")),
    };
    geometric_grid(lo, hi, count).map_err(|e| match e {
        Error::InvalidGrid(m) => bad(&m),
        other => other,
    })
}

pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0) {
        return Err(Error::InvalidGrid("thresholds must be finite and positive".into()));
    }
    if lo > hi {
        return Err(Error::InvalidGrid("t_min exceeds t_max".into()));
    }
    match count {
        0 => Err(Error::InvalidGrid("count must be at least 1".into())),
        1 if lo != hi => Err(Error::InvalidGrid("a one-point grid needs t_min = t_max".into())),
        1 => Ok(vec![hi]),
        _ => {
            let step = (lo / hi).ln() / (count - 1) as f64;
            Ok((0..count)
                .map(|i| match i {
                    0 => hi,
                    i if i == count - 1 => lo,
                    i => hi * (step * i as f64).exp(),
                })
                .collect())
        }
    }
}

fn lazy_ensemble<T: Real>(p: &Partition<T>, psi: &AmplitudeVector<T>) -> Result<Ensemble<T>> {
    Ensemble::build(p, psi, EnsembleOptions { eager_limit: 0 })
}

pub fn sweep_row<T: Real>(psi: &AmplitudeVector<T>, threshold: f64) -> Result<SweepRow> {
    let p = match Partition::new(psi, T::lit(threshold)) {
        Ok(p) => p,
        Err(Error::EmptyKeptSet { .. }) => {
            return Ok(SweepRow { threshold, values: None, note: "empty A".into() })
        }
        Err(e) => return Err(e),
    };
    if p.tail_is_empty() {
        return Ok(SweepRow { threshold, values: None, note: "empty B".into() });
    }
    let e = lazy_ensemble(&p, psi)?;
    let b = compute_mixing_bounds(&e, psi)?;
    let dist_rand = ensemble_trace_distance(&e, psi)?;
    let values = RowValues {
        k_kept: p.k_kept,
        eps: p.eps.as_f64(),
        ell1_tail: p.ell1_tail.as_f64(),
        c_ratio: p.c_ratio.as_f64(),
        a_max: b.a_max.as_f64(),
        b_bias: b.b_bias.as_f64(),
        lemma_bound: b.lemma_bound.as_f64(),
        theory_curve: b.theory_curve.as_f64(),
        dist_det: truncation_error(&p, psi)?.as_f64(),
        dist_rand: dist_rand.as_f64(),
    };
    Ok(SweepRow { threshold, values: Some(values), note: String::new() })
}

/// Rows for every threshold, sorted by decreasing threshold.
pub fn sweep<T: Real>(psi: &AmplitudeVector<T>, thresholds: &[f64]) -> Result<Vec<SweepRow>> {
    let mut ts = thresholds.to_vec();
    ts.sort_by(|a, b| b.partial_cmp(a).expect("grid thresholds are finite"));
    ts.par_iter().map(|&t| sweep_row(psi, t)).collect()
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        let mut rec = vec![fmt17(row.threshold)];
        match &row.values {
            Some(v) => {
                rec.push(v.k_kept.to_string());
                rec.extend(
                    [
                        v.eps,
                        v.ell1_tail,
                        v.c_ratio,
                        v.a_max,
                        v.b_bias,
                        v.lemma_bound,
                        v.theory_curve,
                        v.dist_det,
                        v.dist_rand,
                    ]
                    .map(fmt17),
                );
            }
            None => rec.extend(std::iter::repeat_n(String::new(), 10)),
        }
        rec.push(row.note.clone());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(COLUMNS) {
        return Err(Error::Parse("unexpected sweep CSV header".into()));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| {
            field(i)
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("column {}: {:?}", COLUMNS[i], field(i))))
        };
        let threshold = num(0)?;
        let note = field(11).to_string();
        let values = if (1..11).all(|i| field(i).is_empty()) {
            None
        } else {
            Some(RowValues {
                k_kept: field(1)
                    .parse()
                    .map_err(|_| Error::Parse(format!("column k_kept: {:?}", field(1))))?,
                eps: num(2)?,
                ell1_tail: num(3)?,
                c_ratio: num(4)?,
                a_max: num(5)?,
                b_bias: num(6)?,
                lemma_bound: num(7)?,
                theory_curve: num(8)?,
                dist_det: num(9)?,
                dist_rand: num(10)?,
            })
        };
        rows.push(SweepRow { threshold, values, note });
    }
    Ok(rows)
}

/// Checks `dist_rand ≤ lemma_bound` and `dist_det = 2ε` on every populated row.
pub fn verify_rows(rows: &[SweepRow]) -> Result<()> {
    for row in rows {
        let Some(v) = &row.values else {
            if row.note.is_empty() {
                return Err(Error::Invalid(format!("row at t = {} has no values and no note", row.threshold)));
            }
            continue;
        };
        if v.dist_rand > v.lemma_bound + VERIFY_TOL {
            return Err(Error::Invalid(format!(
                "t = {}: dist_rand {} exceeds lemma bound {}",
                row.threshold, v.dist_rand, v.lemma_bound
            )));
        }
        if (v.dist_det - 2.0 * v.eps).abs() > VERIFY_TOL {
            return Err(Error::Invalid(format!(
                "t = {}: dist_det {} differs from 2 eps = {}",
                row.threshold,
                v.dist_det,
                2.0 * v.eps
            )));
        }
    }
    Ok(())
}

/// Thresholds of rows with `c ≤ 4` and `ε ≤ 0.2` where `dist_rand` exceeds the
/// theory curve.
pub fn theory_violations(rows: &[SweepRow]) -> Vec<f64> {
    rows.iter()
        .filter_map(|r| r.values.as_ref().map(|v| (r.threshold, v)))
        .filter(|(_, v)| v.c_ratio <= 4.0 && v.eps <= 0.2 && v.dist_rand > v.theory_curve + VERIFY_TOL)
        .map(|(t, _)| t)
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Distances when keeping the `k` largest-magnitude amplitudes (ties at the
/// cut are kept too). Returns `(dist_det, dist_rand)`.
pub fn distances_at_kept<T: Real>(psi: &AmplitudeVector<T>, k: usize) -> Result<(f64, f64)> {
    let mags = psi.sorted_magnitudes();
    if k == 0 || k > mags.len() {
        return Err(Error::Domain { name: "k", value: k as f64, domain: "1..=nonzero count" });
    }
    let p = Partition::new(psi, mags[k - 1])?;
    if p.tail_is_empty() {
        return Ok((0.0, 0.0));
    }
    let det = truncation_error(&p, psi)?.as_f64();
    let rand = ensemble_trace_distance(&lazy_ensemble(&p, psi)?, psi)?.as_f64();
    Ok((det, rand))
}

/// Kept-amplitude counts reaching `target` trace distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeptReduction {
    pub k_det: usize,
    pub k_rand: usize,
    /// `1 − k_rand / k_det`.
    pub reduction: f64,
}

/// Smallest kept counts whose deterministic and randomized distances are at
/// most `target`, found by bisection over the sorted magnitudes.
pub fn kept_reduction_at<T: Real>(psi: &AmplitudeVector<T>, target: f64) -> Result<KeptReduction> {
    let n = psi.nonzero_count();
    let smallest = |pick: fn((f64, f64)) -> f64| -> Result<usize> {
        let (mut lo, mut hi) = (1, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if pick(distances_at_kept(psi, mid)?) <= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    };
    let k_det = smallest(|d| d.0)?;
    let k_rand = smallest(|d| d.1)?;
    Ok(KeptReduction { k_det, k_rand, reduction: 1.0 - k_rand as f64 / k_det as f64 })
}
