//! Ground states of the periodic transverse-field Ising chain
//! `H = −J Σ Z_i Z_{i+1} − h Σ X_i`.
//!
//! Qubit `i` is bit `i` of the basis index; `Z_i = +1` on a clear bit.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::lanczos::{lowest_eigenpair, LanczosOptions};
use crate::amplitudes::AmplitudeVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MIN_SITES: u32 = 3;
pub const MAX_SITES: u32 = 14;
/// Largest chain diagonalized densely under [`Eigensolver::Auto`].
pub const DENSE_MAX_SITES: u32 = 10;
/// Ground spaces with a smaller spectral gap are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfimSpec<T> {
    pub n_sites: u32,
    pub coupling_j: T,
    pub field_h: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Eigensolver {
    #[default]
    Auto,
    Dense,
    Lanczos,
}

#[derive(Clone, Debug)]
pub struct GroundState<T> {
    pub state: AmplitudeVector<T>,
    pub energy: T,
    /// Distance to the next level (for Lanczos, the lowest level of the other
    /// spin-flip sector).
    pub gap: T,
    pub residual: T,
}

impl<T: Real> TfimSpec<T> {
    pub fn new(n_sites: u32, coupling_j: T, field_h: T) -> Result<Self> {
        let spec = Self { n_sites, coupling_j, field_h };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_SITES..=MAX_SITES).contains(&self.n_sites) {
            return Err(Error::Domain {
                name: "n_sites",
                value: self.n_sites as f64,
                domain: "3..=14 (periodic N = 2 double-counts its bond)",
            });
        }
        if !self.coupling_j.is_finite_value() || !self.field_h.is_finite_value() {
            return Err(Error::Invalid("couplings must be finite".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_sites
    }

    /// `−J Σ_i z_i z_{i+1}` for basis state `index`.
    pub fn diagonal(&self, index: usize) -> T {
        let n = self.n_sites;
        // z_i z_{i+1} = −1 exactly where bits i and i+1 differ
        let rotated = ((index >> 1) | ((index & 1) << (n - 1))) & (self.dim() - 1);
        let anti = (index ^ rotated).count_ones();
        let sum = T::from_count((n - anti) as usize) - T::from_count(anti as usize);
        -self.coupling_j * sum
    }

    /// `y = H x` without storing `H`.
    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        let n = self.n_sites;
        let h = self.field_h;
        y.par_chunks_mut(1024).enumerate().for_each(|(chunk, ys)| {
            let base = chunk * 1024;
            for (off, yi) in ys.iter_mut().enumerate() {
                let i = base + off;
                let mut flips = T::zero();
                for q in 0..n {
                    flips += x[i ^ (1 << q)];
                }
                *yi = self.diagonal(i) * x[i] - h * flips;
            }
        });
    }

    pub fn dense_hamiltonian(&self) -> DMatrix<T> {
        let d = self.dim();
        let mut m = DMatrix::<T>::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = self.diagonal(i);
            for q in 0..self.n_sites {
                m[(i, i ^ (1 << q))] = -self.field_h;
            }
        }
        m
    }

    fn label(&self) -> String {
        format!("tfim:N={},J={},h={}", self.n_sites, self.coupling_j, self.field_h)
    }
}

fn fix_sign<T: Real>(v: &mut [T]) {
    let (k, _) = v
        .iter()
        .enumerate()
        .fold((0, T::zero()), |(bk, bm), (k, x)| if x.abs() > bm { (k, x.abs()) } else { (bk, bm) });
    if v[k] < T::zero() {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn residual<T: Real>(spec: &TfimSpec<T>, v: &[T], energy: T) -> T {
    let mut hv = vec![T::zero(); v.len()];
    spec.matvec(v, &mut hv);
    hv.iter()
        .zip(v)
        .fold(T::zero(), |a, (&x, &y)| a + (x - energy * y) * (x - energy * y))
        .sqrt()
}

fn finish<T: Real>(spec: &TfimSpec<T>, mut v: Vec<T>, energy: T, gap: T) -> Result<GroundState<T>> {
    if gap < T::lit(DEGENERACY_GAP) {
        return Err(Error::DegenerateGroundState { gap: gap.as_f64() });
    }
    let nrm = v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    fix_sign(&mut v);
    let res = residual(spec, &v, energy);
    let tol = T::lit(RESIDUAL_TOL).max(T::machine_eps() * T::lit(1e4));
    if res > tol {
        return Err(Error::NotConverged { residual: res.as_f64() });
    }
    let state = AmplitudeVector::normalize(&v, spec.n_sites, spec.label())?;
    Ok(GroundState { state, energy, gap, residual: res })
}

fn dense_ground_state<T: Real>(spec: &TfimSpec<T>) -> Result<GroundState<T>> {
    let eig = spec.dense_hamiltonian().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).expect("finite"));
    let e0 = eig.eigenvalues[order[0]];
    let gap = eig.eigenvalues[order[1]] - e0;
    let v: Vec<T> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    finish(spec, v, e0, gap)
}

/// Deterministic start vector with components in both spin-flip sectors.
fn start_vector<T: Real>(dim: usize) -> Vec<T> {
    (0..dim)
        .map(|i| T::lit(1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract()))
        .collect()
}

fn lanczos_ground_state<T: Real>(spec: &TfimSpec<T>) -> Result<GroundState<T>> {
    if spec.field_h == T::zero() {
        // classical chain: the global spin flip maps every ground state to a
        // distinct one with the same energy
        return Err(Error::DegenerateGroundState { gap: 0.0 });
    }
    let mask = spec.dim() - 1;
    let sector = |sign: T| {
        move |v: &mut [T]| {
            for i in 0..v.len() {
                let j = i ^ mask;
                if i < j {
                    let a = (v[i] + sign * v[j]) / T::lit(2.0);
                    v[i] = a;
                    v[j] = sign * a;
                }
            }
        }
    };
    let opts = LanczosOptions::default();
    let mv = |x: &[T], y: &mut [T]| spec.matvec(x, y);
    let even = lowest_eigenpair(start_vector(spec.dim()), mv, sector(T::one()), opts)?;
    let odd = lowest_eigenpair(start_vector(spec.dim()), mv, sector(-T::one()), opts)?;
    let (ground, other) = if even.value <= odd.value { (even, odd) } else { (odd, even) };
    finish(spec, ground.vector, ground.value, other.value - ground.value)
}

/// Ground state with the solver chosen by chain length.
pub fn tfim_ground_state<T: Real>(spec: &TfimSpec<T>) -> Result<AmplitudeVector<T>> {
    Ok(tfim_ground_state_with(spec, Eigensolver::Auto)?.state)
}

pub fn tfim_ground_state_with<T: Real>(spec: &TfimSpec<T>, solver: Eigensolver) -> Result<GroundState<T>> {
    spec.validate()?;
    match solver {
        Eigensolver::Dense => dense_ground_state(spec),
        Eigensolver::Lanczos => lanczos_ground_state(spec),
        Eigensolver::Auto if spec.n_sites <= DENSE_MAX_SITES => dense_ground_state(spec),
        Eigensolver::Auto => lanczos_ground_state(spec),
    }
}

/// Index of the basis state after cyclically shifting every site by one.
pub fn rotate_sites(index: usize, n_sites: u32) -> usize {
    let mask = (1usize << n_sites) - 1;
    ((index << 1) | (index >> (n_sites - 1))) & mask
}
