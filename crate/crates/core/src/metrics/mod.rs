//! Trace distances between the target state and its approximations.
//!
//! Pure-state distances use the closed form `2√(1 − ⟨ψ|φ⟩²)`. Mixtures are
//! handled exactly by projecting onto the span of the states involved, and a
//! dense eigendecomposition serves as an independent oracle for small
//! registers.

mod observable;
pub(crate) mod subspace;

use nalgebra::{DMatrix, DVector};

pub use observable::{Observable, MAX_OBSERVABLE_QUBITS};
pub use subspace::{DEPENDENCE_TOL, EIGEN_CLAMP};

use crate::amplitudes::{AmplitudeVector, Partition};
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::scalar::{dot, Real};

/// Largest register the dense oracle will materialize.
pub const ORACLE_MAX_QUBITS: u32 = 10;

/// A density operator `Σ_k w_k |φ_k⟩⟨φ_k|` kept as weighted pure states.
#[derive(Clone, Debug)]
pub struct DensityRepr<T> {
    pairs: Vec<(T, AmplitudeVector<T>)>,
}

impl<T: Real> DensityRepr<T> {
    pub fn new(pairs: Vec<(T, AmplitudeVector<T>)>) -> Result<Self> {
        let Some((_, first)) = pairs.first() else {
            return Err(Error::Invalid("density representation needs at least one state".into()));
        };
        let dim = first.dim();
        let mut total = T::zero();
        for (w, s) in &pairs {
            if !(*w >= T::zero()) {
                return Err(Error::Invalid(format!("negative weight {w}")));
            }
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
            }
            total += *w;
        }
        let tol = T::lit(1e-12).max(T::machine_eps() * T::from_count(4 * pairs.len()));
        if (total - T::one()).abs() > tol {
            return Err(Error::Invalid(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { pairs })
    }

    pub fn pure(psi: AmplitudeVector<T>) -> Self {
        Self { pairs: vec![(T::one(), psi)] }
    }

    pub fn pairs(&self) -> &[(T, AmplitudeVector<T>)] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.pairs[0].1.dim()
    }

    pub fn n_qubits(&self) -> u32 {
        self.pairs[0].1.n_qubits()
    }

    /// `Σ_k w_k ‖φ_k‖²`.
    pub fn trace(&self) -> T {
        self.pairs.iter().fold(T::zero(), |acc, (w, s)| acc + *w * s.norm_sq())
    }

    /// `Tr[ρ O]`.
    pub fn expectation(&self, obs: &Observable<T>) -> Result<T> {
        self.pairs.iter().try_fold(T::zero(), |acc, (w, s)| Ok(acc + *w * obs.expectation(s)?))
    }

    /// Dense `2^n × 2^n` matrix; only sensible for small registers.
    pub fn to_dense(&self) -> DMatrix<T> {
        let d = self.dim();
        let mut m = DMatrix::<T>::zeros(d, d);
        for (w, s) in &self.pairs {
            let v = DVector::from_column_slice(s.values());
            m.ger(*w, &v, &v, T::one());
        }
        m
    }
}

/// `‖|ψ⟩⟨ψ| − |φ⟩⟨φ|‖₁ = 2√(1 − ⟨ψ|φ⟩²)`, clamped to `[0, 2]`.
pub fn pure_trace_distance<T: Real>(psi: &AmplitudeVector<T>, phi: &AmplitudeVector<T>) -> Result<T> {
    let ov = psi.overlap(phi)?;
    // 1 − |ov| from ‖ψ ∓ φ‖²/2 avoids cancellation for nearly equal states.
    let sgn = if ov < T::zero() { -T::one() } else { T::one() };
    let half_diff = psi
        .values()
        .iter()
        .zip(phi.values())
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - sgn * b) * (a - sgn * b))
        / T::lit(2.0);
    let one_minus = half_diff.max(T::zero()).min(T::one());
    let infidelity = one_minus * (T::lit(2.0) - one_minus);
    Ok((T::lit(2.0) * infidelity.max(T::zero()).sqrt()).min(T::lit(2.0)))
}

/// Distance from `ψ` to its renormalized truncation `ψ_A/‖ψ_A‖`, which is `2ε`
/// for a unit-norm `ψ`.
pub fn truncation_error<T: Real>(p: &Partition<T>, psi: &AmplitudeVector<T>) -> Result<T> {
    p.check_matches(psi)?;
    if p.set_a.is_empty() {
        return Err(Error::EmptyKeptSet { threshold: p.threshold.as_f64() });
    }
    let eps_sq = p.eps * p.eps;
    Ok(T::lit(2.0) * (eps_sq / (p.kept_norm_sq + eps_sq)).sqrt())
}

/// Normalized truncated state `ψ_A/‖ψ_A‖`.
pub fn truncated_state<T: Real>(p: &Partition<T>, psi: &AmplitudeVector<T>) -> Result<AmplitudeVector<T>> {
    p.check_matches(psi)?;
    let mut kept = vec![T::zero(); psi.dim()];
    for &i in &p.set_a {
        kept[i] = psi.values()[i];
    }
    AmplitudeVector::normalize(&kept, psi.n_qubits(), format!("{}:truncated", psi.label()))
}

/// Exact `‖ρ − σ‖₁` via projection onto the span of all states involved.
pub fn trace_distance_between<T: Real>(rho: &DensityRepr<T>, sigma: &DensityRepr<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let terms: Vec<(T, &[T])> = rho
        .pairs()
        .iter()
        .map(|(w, s)| (*w, s.values()))
        .chain(sigma.pairs().iter().map(|(w, s)| (-*w, s.values())))
        .collect();
    Ok(subspace::trace_norm(&terms))
}

/// Exact `‖ρ − |ψ⟩⟨ψ|‖₁` for a mixture given as weighted pure states.
pub fn mixed_trace_distance<T: Real>(rho: &DensityRepr<T>, psi: &AmplitudeVector<T>) -> Result<T> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: psi.dim() });
    }
    let terms: Vec<(T, &[T])> = std::iter::once((-T::one(), psi.values()))
        .chain(rho.pairs().iter().map(|(w, s)| (*w, s.values())))
        .collect();
    Ok(subspace::trace_norm(&terms))
}

/// Root of a function decreasing on `(0, 1]` that is positive near zero.
fn decreasing_root<T: Real>(f: impl Fn(T) -> T) -> T {
    let two = T::lit(2.0);
    let mut hi = T::one();
    let mut lo = hi / two;
    while f(lo) <= T::zero() {
        hi = lo;
        lo /= two;
        if lo == T::zero() {
            return T::zero();
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi || hi - lo <= T::machine_eps() * hi {
            break;
        }
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Exact `‖ρ_mix − |ψ⟩⟨ψ|‖₁` for an ensemble without forming any member state.
///
/// The difference is traceless with a single negative eigenvalue `−μ`, so the
/// distance is `2μ`, with `μ` the root of a secular equation costing `O(|B|)`
/// per evaluation.
///
/// For the canonical ensemble the difference is `Z/Γ² − γ|ψ⟩⟨ψ|` with
/// `Z = S·diag(|α_B|) − ψ_B ψ_Bᵀ ⪰ 0` and `γ = (S² − ε²)/Γ²`; every term of the
/// resulting equation is positive, so the result keeps relative accuracy even
/// when the distance is far below machine epsilon. Other probabilities use the
/// arrowhead form of the mixture in the basis `{ψ_A/‖ψ_A‖} ∪ {|m⟩ : m ∈ B}`.
pub fn ensemble_trace_distance<T: Real>(e: &Ensemble<T>, psi: &AmplitudeVector<T>) -> Result<T> {
    let p = e.partition();
    p.check_matches(psi)?;
    let v = psi.values();
    let mu = if e.is_canonical() {
        let s = p.ell1_tail;
        let g2 = e.gamma() * e.gamma();
        let mags: Vec<T> = p.set_b.iter().map(|&m| v[m].abs()).collect();
        // S² − ε² = Σ_m |α_m| (S − |α_m|)
        let cross = mags.iter().fold(T::zero(), |acc, &a| acc + a * (s - a));
        let gamma = cross / g2;
        let kept = p.kept_norm_sq;
        decreasing_root(|mu: T| {
            let (mut r, mut inv) = (T::zero(), T::zero());
            for &a in &mags {
                let den = s + g2 * mu / a;
                r += a / den;
                inv += T::one() / den;
            }
            // 1 − r = (Γ²μ/S) Σ 1/(S + Γ²μ/|α_m|)
            let one_minus_r = g2 * mu / s * inv;
            gamma * (kept / mu + g2 * r / one_minus_r) - T::one()
        })
    } else {
        let pa = p.kept_norm_sq.sqrt();
        // (b_m, d_m, q_m): arrow entries, diagonal entries and target components
        let terms: Vec<(T, T, T)> = e
            .members()
            .iter()
            .map(|m| {
                let c = m.amplified_coefficient;
                let w = m.probability / (m.gamma_m * m.gamma_m);
                (pa * c * w, c * c * w, v[m.index_m])
            })
            .collect();
        // value at μ = 0: Σ p_m Γ_m² − 1 = Σ_m α_m² (1 − p_m)/p_m
        let base = e.members().iter().fold(T::zero(), |acc, m| {
            let a = v[m.index_m];
            acc + a * a * (T::one() - m.probability) / m.probability
        });
        decreasing_root(|mu: T| {
            let (mut s, mut t1, mut t2) = (T::zero(), T::zero(), T::zero());
            for &(b, d, q) in &terms {
                let dd = d * (d + mu);
                s += b * b / dd;
                t1 += b * q / dd;
                t2 += q * q / dd;
            }
            base + mu * (t1 * t1 / (T::one() + s) - t2)
        })
    };
    Ok(T::lit(2.0) * mu)
}

/// Independent check of [`mixed_trace_distance`]: materializes both operators
/// and sums the absolute eigenvalues of their difference.
pub fn dense_trace_distance_oracle<T: Real>(rho: &DensityRepr<T>, psi: &AmplitudeVector<T>) -> Result<T> {
    if psi.n_qubits() > ORACLE_MAX_QUBITS {
        return Err(Error::OracleSizeLimit { n_qubits: psi.n_qubits(), limit: ORACLE_MAX_QUBITS });
    }
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: psi.dim() });
    }
    let mut diff = rho.to_dense();
    let v = DVector::from_column_slice(psi.values());
    diff.ger(-T::one(), &v, &v, T::one());
    Ok(subspace::sum_abs_eigenvalues(diff))
}

/// `|Tr[(|ψ⟩⟨ψ| − ρ) O]|`.
pub fn observable_error<T: Real>(
    rho: &DensityRepr<T>,
    psi: &AmplitudeVector<T>,
    obs: &Observable<T>,
) -> Result<T> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: psi.dim() });
    }
    Ok((obs.expectation(psi)? - rho.expectation(obs)?).abs())
}

/// Plain inner product helper re-exported for callers working on raw slices.
pub fn real_overlap<T: Real>(a: &[T], b: &[T]) -> T {
    dot(a, b)
}
