//! Real amplitude vectors and threshold partitions of their support.

use crate::error::{Error, Result};
use crate::scalar::{norm_sq, Real};

/// Largest register handled with dense storage.
pub const MAX_QUBITS: u32 = 26;

/// Squared-norm tolerance for a vector to count as normalized.
pub(crate) fn unit_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::machine_eps() * T::lit(1e3))
}

/// A normalized real state `Σ_i α_i |i⟩` over `2^n_qubits` computational basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeVector<T> {
    n_qubits: u32,
    values: Vec<T>,
    label: String,
}

impl<T: Real> AmplitudeVector<T> {
    /// Pads `raw` with zeros to `2^n_qubits` entries and rescales it to unit norm.
    pub fn normalize(raw: &[T], n_qubits: u32, label: impl Into<String>) -> Result<Self> {
        let dim = checked_dim(n_qubits)?;
        if raw.len() > dim {
            return Err(Error::DimensionOverflow { len: raw.len(), n_qubits });
        }
        check_finite(raw)?;
        let nrm = norm_sq(raw).sqrt();
        if nrm == T::zero() {
            return Err(Error::ZeroVector);
        }
        let mut values = vec![T::zero(); dim];
        for (dst, &src) in values.iter_mut().zip(raw) {
            *dst = src / nrm;
        }
        Ok(Self { n_qubits, values, label: label.into() })
    }

    /// Wraps values that are already normalized, keeping them bit-for-bit.
    ///
    /// `values` may be shorter than `2^n_qubits`; it is zero padded.
    pub fn from_normalized(
        mut values: Vec<T>,
        n_qubits: u32,
        label: impl Into<String>,
    ) -> Result<Self> {
        let dim = checked_dim(n_qubits)?;
        if values.len() > dim {
            return Err(Error::DimensionOverflow { len: values.len(), n_qubits });
        }
        check_finite(&values)?;
        let nsq = norm_sq(&values);
        if (nsq - T::one()).abs() > unit_tolerance::<T>() {
            return Err(Error::NotNormalized { norm_sq: nsq.as_f64() });
        }
        values.resize(dim, T::zero());
        Ok(Self { n_qubits, values, label: label.into() })
    }

    /// Keeps values verbatim when they are already unit norm to within a few
    /// ulps, otherwise rescales.
    pub fn normalize_if_needed(
        raw: Vec<T>,
        n_qubits: u32,
        label: impl Into<String>,
    ) -> Result<Self> {
        check_finite(&raw)?;
        let nsq = norm_sq(&raw);
        if (nsq - T::one()).abs() <= T::machine_eps() * T::lit(64.0) {
            Self::from_normalized(raw, n_qubits, label)
        } else {
            Self::normalize(&raw, n_qubits, label)
        }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: u32, index: usize) -> Result<Self> {
        let dim = checked_dim(n_qubits)?;
        if index >= dim {
            return Err(Error::DimensionOverflow { len: index + 1, n_qubits });
        }
        let mut values = vec![T::zero(); dim];
        values[index] = T::one();
        Ok(Self { n_qubits, values, label: format!("basis:{index}") })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn norm_sq(&self) -> T {
        norm_sq(&self.values)
    }

    /// Real inner product `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(crate::scalar::dot(&self.values, &other.values))
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|v| **v != T::zero()).count()
    }

    pub fn max_magnitude(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn min_nonzero_magnitude(&self) -> Option<T> {
        self.values
            .iter()
            .filter(|v| **v != T::zero())
            .map(|v| v.abs())
            .fold(None, |m: Option<T>, v| Some(m.map_or(v, |m| m.min(v))))
    }

    /// Nonzero magnitudes sorted in decreasing order.
    pub fn sorted_magnitudes(&self) -> Vec<T> {
        let mut mags: Vec<T> =
            self.values.iter().filter(|v| **v != T::zero()).map(|v| v.abs()).collect();
        mags.sort_by(|a, b| b.partial_cmp(a).expect("finite amplitudes"));
        mags
    }
}

fn checked_dim(n_qubits: u32) -> Result<usize> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Domain {
            name: "n_qubits",
            value: n_qubits as f64,
            domain: "1..=26",
        });
    }
    Ok(1usize << n_qubits)
}

fn check_finite<T: Real>(values: &[T]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite_value()) {
        Some(index) => Err(Error::InvalidAmplitude { index, value: values[index].as_f64() }),
        None => Ok(()),
    }
}

/// Free-function form of [`AmplitudeVector::normalize`] with a synthetic label.
pub fn normalize<T: Real>(raw: &[T], n_qubits: u32) -> Result<AmplitudeVector<T>> {
    AmplitudeVector::normalize(raw, n_qubits, "synthetic")
}

/// Split of the support at a magnitude threshold `t`.
///
/// `set_a` holds `|α_i| ≥ t`, `set_b` holds `0 < |α_j| < t`; exact zeros are in
/// neither. Tail statistics are computed over `set_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition<T> {
    pub threshold: T,
    pub set_a: Vec<usize>,
    pub set_b: Vec<usize>,
    /// `ε = sqrt(Σ_{j∈B} α_j²)`.
    pub eps: T,
    /// `S = Σ_{j∈B} |α_j|`.
    pub ell1_tail: T,
    /// `c = S/ε`, zero when the tail is empty.
    pub c_ratio: T,
    pub k_kept: usize,
    /// `Σ_{i∈A} α_i²`.
    pub kept_norm_sq: T,
    pub dim: usize,
}

impl<T: Real> Partition<T> {
    pub fn new(psi: &AmplitudeVector<T>, threshold: T) -> Result<Self> {
        if !(threshold > T::zero()) {
            return Err(Error::NonPositiveThreshold(threshold.as_f64()));
        }
        let mut set_a = Vec::new();
        let mut set_b = Vec::new();
        let mut kept_norm_sq = T::zero();
        let mut tail_sq = T::zero();
        let mut ell1_tail = T::zero();
        for (i, &v) in psi.values().iter().enumerate() {
            let mag = v.abs();
            if mag >= threshold {
                set_a.push(i);
                kept_norm_sq += v * v;
            } else if mag > T::zero() {
                set_b.push(i);
                tail_sq += v * v;
                ell1_tail += mag;
            }
        }
        if set_a.is_empty() {
            return Err(Error::EmptyKeptSet { threshold: threshold.as_f64() });
        }
        let eps = tail_sq.sqrt();
        let c_ratio = if set_b.is_empty() { T::zero() } else { ell1_tail / eps };
        Ok(Self {
            threshold,
            k_kept: set_a.len(),
            set_a,
            set_b,
            eps,
            ell1_tail,
            c_ratio,
            kept_norm_sq,
            dim: psi.dim(),
        })
    }

    pub fn tail_is_empty(&self) -> bool {
        self.set_b.is_empty()
    }

    /// `√|B|·ε − S`, non-negative by Cauchy–Schwarz.
    pub fn cauchy_schwarz_gap(&self) -> Result<T> {
        if self.set_b.is_empty() {
            return Err(Error::EmptyTail);
        }
        Ok(T::from_count(self.set_b.len()).sqrt() * self.eps - self.ell1_tail)
    }

    pub(crate) fn check_matches(&self, psi: &AmplitudeVector<T>) -> Result<()> {
        if self.dim != psi.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim, found: psi.dim() });
        }
        Ok(())
    }
}

pub fn partition<T: Real>(psi: &AmplitudeVector<T>, t: T) -> Result<Partition<T>> {
    Partition::new(psi, t)
}

pub fn cauchy_schwarz_check<T: Real>(p: &Partition<T>) -> Result<T> {
    p.cauchy_schwarz_gap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy() -> AmplitudeVector<f64> {
        AmplitudeVector::normalize(&[0.98f64.sqrt(), 0.1, 0.1, 0.0], 2, "toy").unwrap()
    }

    #[test]
    fn normalize_scales_and_pads() {
        let v = normalize(&[3.0f64, 4.0], 1).unwrap();
        assert!((v.values()[0] - 0.6).abs() < 1e-15);
        assert!((v.values()[1] - 0.8).abs() < 1e-15);

        let v = normalize(&[1.0f64], 2).unwrap();
        assert_eq!(v.values(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn normalize_errors() {
        assert!(matches!(normalize(&[0.0f64, 0.0], 1), Err(Error::ZeroVector)));
        assert!(matches!(
            normalize(&[1.0f64, f64::NAN], 1),
            Err(Error::InvalidAmplitude { index: 1, .. })
        ));
        assert!(matches!(
            normalize(&[1.0f64, 1.0, 1.0], 1),
            Err(Error::DimensionOverflow { len: 3, n_qubits: 1 })
        ));
        assert!(normalize(&[1.0f64], 0).is_err());
    }

    #[test]
    fn toy_partition_statistics() {
        // exhaustive summation over the tail {1, 2}
        let psi = toy();
        let p = partition(&psi, 0.2).unwrap();
        assert_eq!(p.set_a, vec![0]);
        assert_eq!(p.set_b, vec![1, 2]);
        assert_eq!(p.k_kept, 1);
        let tail = [psi.values()[1], psi.values()[2]];
        let eps_sq: f64 = tail.iter().map(|x| x * x).sum();
        let s: f64 = tail.iter().map(|x| x.abs()).sum();
        assert!((eps_sq - 0.02).abs() < 1e-15);
        assert!((p.eps * p.eps - eps_sq).abs() < 1e-15);
        assert!((p.ell1_tail - s).abs() < 1e-15);
        assert!((p.ell1_tail - 0.2).abs() < 1e-15);
        assert!((p.c_ratio - 2f64.sqrt()).abs() < 1e-12);
        assert!(p.cauchy_schwarz_gap().unwrap().abs() < 1e-12);
    }

    #[test]
    fn no_tail_partition() {
        let psi = normalize(&[1.0f64, 0.0, 0.0, 0.0], 2).unwrap();
        let p = partition(&psi, 0.5).unwrap();
        assert_eq!(p.set_a, vec![0]);
        assert!(p.set_b.is_empty());
        assert_eq!(p.eps, 0.0);
        assert_eq!(p.ell1_tail, 0.0);
        assert_eq!(p.c_ratio, 0.0);
        assert!(matches!(p.cauchy_schwarz_gap(), Err(Error::EmptyTail)));
    }

    #[test]
    fn ties_go_to_kept_set() {
        let psi = normalize(&[0.5f64, 0.5, 0.5, 0.5], 2).unwrap();
        let p = partition(&psi, 0.5).unwrap();
        assert_eq!(p.k_kept, 4);
        assert!(p.set_b.is_empty());
    }

    #[test]
    fn threshold_errors() {
        let psi = toy();
        assert!(matches!(partition(&psi, 0.0), Err(Error::NonPositiveThreshold(_))));
        assert!(matches!(partition(&psi, -1.0), Err(Error::NonPositiveThreshold(_))));
        assert!(matches!(partition(&psi, 1.5), Err(Error::EmptyKeptSet { .. })));
    }

    #[test]
    fn geometric_tail_strict_cauchy_schwarz() {
        // direct summation over |B| = 20 terms 0.5^k
        let raw: Vec<f64> = (0..32).map(|k| 0.5f64.powi(k)).collect();
        let psi = normalize(&raw, 5).unwrap();
        let t = psi.values()[12] * 1.0000001;
        let p = partition(&psi, t).unwrap();
        assert_eq!(p.set_b.len(), 20);
        let tail = &psi.values()[12..32];
        let eps: f64 = tail.iter().map(|x| x * x).sum::<f64>().sqrt();
        let s: f64 = tail.iter().sum();
        let expected = (20f64).sqrt() * eps - s;
        assert!(expected > 0.0);
        assert!((p.cauchy_schwarz_gap().unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn single_precision_partition() {
        let psi = AmplitudeVector::<f32>::normalize(&[3.0, 4.0, 0.0, 0.1], 2, "f32").unwrap();
        let p = partition(&psi, 0.5f32).unwrap();
        assert_eq!(p.set_a, vec![0, 1]);
        assert_eq!(p.set_b, vec![3]);
    }

    fn arb_state() -> impl Strategy<Value = AmplitudeVector<f64>> {
        (1u32..=6).prop_flat_map(|n| {
            prop::collection::vec(
                prop_oneof![3 => -1.0f64..1.0, 1 => Just(0.0)],
                1usize << n,
            )
            .prop_filter_map("nonzero", move |raw| normalize(&raw, n).ok())
        })
    }

    proptest! {
        #[test]
        fn partition_invariants(psi in arb_state(), frac in 0.01f64..1.0) {
            let t = psi.max_magnitude() * frac;
            let p = partition(&psi, t).unwrap();
            let v = psi.values();
            let mut seen = vec![false; psi.dim()];
            for &i in p.set_a.iter().chain(&p.set_b) {
                prop_assert!(!seen[i]);
                seen[i] = true;
            }
            for (i, &s) in seen.iter().enumerate() {
                prop_assert_eq!(s, v[i] != 0.0);
            }
            let min_a = p.set_a.iter().map(|&i| v[i].abs()).fold(f64::INFINITY, f64::min);
            let max_b = p.set_b.iter().map(|&i| v[i].abs()).fold(0.0, f64::max);
            prop_assert!(min_a >= t && t > max_b);
            let kept: f64 = p.set_a.iter().map(|&i| v[i] * v[i]).sum();
            prop_assert!((p.eps * p.eps + kept - 1.0).abs() < 1e-10);
            let eps: f64 = p.set_b.iter().map(|&i| v[i] * v[i]).sum::<f64>().sqrt();
            let s: f64 = p.set_b.iter().map(|&i| v[i].abs()).sum();
            prop_assert!((eps - p.eps).abs() < 1e-12);
            prop_assert!((s - p.ell1_tail).abs() < 1e-12);
            if !p.set_b.is_empty() {
                prop_assert!((p.c_ratio * p.eps - p.ell1_tail).abs() < 1e-10);
                prop_assert!(p.cauchy_schwarz_gap().unwrap() >= -1e-12);
            }
        }

        #[test]
        fn lowering_threshold_is_monotone(psi in arb_state(), f1 in 0.01f64..1.0, f2 in 0.01f64..1.0) {
            let (hi, lo) = if f1 >= f2 { (f1, f2) } else { (f2, f1) };
            let m = psi.max_magnitude();
            let p_hi = partition(&psi, m * hi).unwrap();
            let p_lo = partition(&psi, m * lo).unwrap();
            prop_assert!(p_lo.k_kept >= p_hi.k_kept);
            prop_assert!(p_lo.eps <= p_hi.eps + 1e-15);
            prop_assert!(p_lo.ell1_tail <= p_hi.ell1_tail + 1e-15);
        }
    }
}
