//! Exact trace norm of a real combination `Σ_k w_k |v_k⟩⟨v_k|` by projection
//! onto the span of the `v_k`.
//!
//! The operator vanishes on the orthogonal complement of the span, so its
//! nonzero spectrum is that of the `d × d` compression onto an orthonormal
//! basis of the span.

use nalgebra::DMatrix;

use crate::scalar::Real;

/// Relative residual below which a spanning vector counts as dependent.
pub const DEPENDENCE_TOL: f64 = 1e-10;

/// Eigenvalues smaller than this in magnitude are treated as round-off.
pub const EIGEN_CLAMP: f64 = 1e-14;

struct BasisVector<T> {
    values: Vec<T>,
    support: Vec<usize>,
}

impl<T: Real> BasisVector<T> {
    #[inline]
    fn project_out(&self, r: &mut [T]) -> T {
        let c = self.support.iter().fold(T::zero(), |acc, &k| acc + self.values[k] * r[k]);
        if c != T::zero() {
            for &k in &self.support {
                r[k] -= c * self.values[k];
            }
        }
        c
    }
}

/// Orthonormal basis of the span plus each input's coordinates in it.
pub(crate) struct Projection<T> {
    pub dim: usize,
    pub coords: Vec<Vec<T>>,
}

/// Modified Gram–Schmidt with one full re-orthogonalization pass.
///
/// Inputs are processed sparsest first; dot products and updates run only over
/// each basis vector's support, so ensembles whose members share a small kept
/// set stay cheap.
pub(crate) fn project<T: Real>(vectors: &[&[T]]) -> Projection<T> {
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    let nnz: Vec<usize> =
        vectors.iter().map(|v| v.iter().filter(|x| **x != T::zero()).count()).collect();
    order.sort_by_key(|&i| nnz[i]);

    let tol = T::lit(DEPENDENCE_TOL);
    let mut basis: Vec<BasisVector<T>> = Vec::new();
    let mut coords = vec![Vec::new(); vectors.len()];
    for idx in order {
        let v = vectors[idx];
        let mut r = v.to_vec();
        let mut c = vec![T::zero(); basis.len()];
        let norm0 = crate::scalar::norm_sq(v).sqrt();
        if norm0 == T::zero() {
            coords[idx] = c;
            continue;
        }
        for _ in 0..2 {
            for (ci, q) in c.iter_mut().zip(&basis) {
                *ci += q.project_out(&mut r);
            }
        }
        let res = crate::scalar::norm_sq(&r).sqrt();
        if res > tol * norm0 {
            let support: Vec<usize> = (0..r.len()).filter(|&k| r[k] != T::zero()).collect();
            for &k in &support {
                r[k] /= res;
            }
            basis.push(BasisVector { values: r, support });
            c.push(res);
        }
        coords[idx] = c;
    }
    Projection { dim: basis.len(), coords }
}

/// `Σ_k w_k c_k c_kᵀ` in the projected basis.
pub(crate) fn compressed_operator<T: Real>(proj: &Projection<T>, weights: &[T]) -> DMatrix<T> {
    let d = proj.dim;
    let mut m = DMatrix::<T>::zeros(d, d);
    for (c, &w) in proj.coords.iter().zip(weights) {
        let len = c.len();
        for j in 0..len {
            let wcj = w * c[j];
            if wcj == T::zero() {
                continue;
            }
            for i in 0..=j {
                m[(i, j)] += wcj * c[i];
            }
        }
    }
    for j in 0..d {
        for i in 0..j {
            m[(j, i)] = m[(i, j)];
        }
    }
    m
}

pub(crate) fn sum_abs_eigenvalues<T: Real>(m: DMatrix<T>) -> T {
    if m.nrows() == 0 {
        return T::zero();
    }
    let clamp = T::lit(EIGEN_CLAMP);
    m.symmetric_eigenvalues()
        .iter()
        .map(|l| l.abs())
        .filter(|&a| a >= clamp)
        .fold(T::zero(), |acc, a| acc + a)
}

/// `‖Σ_k w_k |v_k⟩⟨v_k|‖₁`.
pub(crate) fn trace_norm<T: Real>(terms: &[(T, &[T])]) -> T {
    let vectors: Vec<&[T]> = terms.iter().map(|(_, v)| *v).collect();
    let weights: Vec<T> = terms.iter().map(|(w, _)| *w).collect();
    let proj = project(&vectors);
    sum_abs_eigenvalues(compressed_operator(&proj, &weights))
}
