//! Lanczos iteration with full re-orthogonalization and explicit restarts for
//! the lowest eigenpair of a real symmetric operator given as a matvec.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{dot, norm_sq, Real};

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    pub max_krylov: usize,
    /// Target residual `‖Hx − θx‖`.
    pub tol: f64,
    pub max_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { max_krylov: 200, tol: 1e-10, max_restarts: 30 }
    }
}

#[derive(Clone, Debug)]
pub struct LanczosResult<T> {
    pub value: T,
    pub vector: Vec<T>,
    pub residual: T,
    pub matvecs: usize,
}

fn lowest_ritz<T: Real>(alphas: &[T], betas: &[T]) -> (T, Vec<T>) {
    let m = alphas.len();
    let mut t = DMatrix::<T>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let (k, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, T::max_value().unwrap()), |(bk, bv), (k, &v)| if v < bv { (k, v) } else { (bk, bv) });
    (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
}

/// Lowest eigenpair of the operator `matvec` starting from `start`.
///
/// `constrain` is applied to every new Krylov vector; pass a projector onto a
/// symmetry sector to keep the iteration inside it, or a no-op.
pub fn lowest_eigenpair<T, M, P>(
    start: Vec<T>,
    matvec: M,
    constrain: P,
    opts: LanczosOptions,
) -> Result<LanczosResult<T>>
where
    T: Real,
    M: Fn(&[T], &mut [T]),
    P: Fn(&mut [T]),
{
    let dim = start.len();
    let tol = T::lit(opts.tol);
    let mut v = start;
    constrain(&mut v);
    let mut matvecs = 0;
    let mut best: Option<LanczosResult<T>> = None;
    let mut w = vec![T::zero(); dim];

    for _ in 0..=opts.max_restarts {
        let nv = norm_sq(&v).sqrt();
        if nv == T::zero() {
            return Err(Error::Invalid("Lanczos start vector is zero".into()));
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let mut basis: Vec<Vec<T>> = vec![v.clone()];
        let mut alphas: Vec<T> = Vec::new();
        let mut betas: Vec<T> = Vec::new();
        let m = opts.max_krylov.min(dim);
        for j in 0..m {
            matvec(&basis[j], &mut w);
            matvecs += 1;
            constrain(&mut w);
            let alpha = dot(&basis[j], &w);
            alphas.push(alpha);
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(x, &qi)| *x -= c * qi);
                }
            }
            let beta = norm_sq(&w).sqrt();
            let scale = alphas.iter().fold(T::one(), |a, x| a.max(x.abs()));
            let invariant = beta <= T::machine_eps() * scale * T::lit(16.0);
            let check = invariant || j + 1 == m || (j + 1) % 10 == 0;
            if check {
                let (_, y) = lowest_ritz(&alphas, &betas);
                let est = beta * y[y.len() - 1].abs();
                if invariant || est <= tol * T::lit(0.1) || j + 1 == m {
                    break;
                }
            }
            betas.push(beta);
            basis.push(w.iter().map(|&x| x / beta).collect());
        }
        let (theta, y) = lowest_ritz(&alphas, &betas);
        let mut x = vec![T::zero(); dim];
        for (q, &c) in basis.iter().zip(&y) {
            x.iter_mut().zip(q).for_each(|(xi, &qi)| *xi += c * qi);
        }
        let nx = norm_sq(&x).sqrt();
        x.iter_mut().for_each(|xi| *xi /= nx);
        matvec(&x, &mut w);
        matvecs += 1;
        let residual = w
            .iter()
            .zip(&x)
            .fold(T::zero(), |a, (&hx, &xi)| a + (hx - theta * xi) * (hx - theta * xi))
            .sqrt();
        let result = LanczosResult { value: theta, vector: x.clone(), residual, matvecs };
        if residual <= tol {
            return Ok(result);
        }
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(result);
        }
        v = x;
    }
    let best = best.expect("at least one restart");
    Err(Error::NotConverged { residual: best.residual.as_f64() })
}
