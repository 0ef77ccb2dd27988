use nalgebra::DMatrix;
use rand::Rng;

use crate::amplitudes::AmplitudeVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest number of qubits an observable may act on directly.
pub const MAX_OBSERVABLE_QUBITS: u32 = 10;

/// Real-symmetric observable on the first `k_qubits` qubits, identity elsewhere.
///
/// Qubit `q` is bit `q` of the basis index, so the observable acts on the low
/// `k_qubits` bits.
#[derive(Clone, Debug)]
pub struct Observable<T: Real> {
    k_qubits: u32,
    matrix: DMatrix<T>,
    spectral_norm: T,
}

impl<T: Real> Observable<T> {
    pub fn new(k_qubits: u32, matrix: DMatrix<T>) -> Result<Self> {
        if k_qubits == 0 || k_qubits > MAX_OBSERVABLE_QUBITS {
            return Err(Error::Domain {
                name: "k_qubits",
                value: k_qubits as f64,
                domain: "1..=10",
            });
        }
        let side = 1usize << k_qubits;
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::DimensionMismatch { expected: side, found: matrix.nrows() });
        }
        if matrix.iter().any(|x| !x.is_finite_value()) {
            return Err(Error::Invalid("observable has non-finite entries".into()));
        }
        let mut deviation = T::zero();
        for i in 0..side {
            for j in 0..i {
                deviation = deviation.max((matrix[(i, j)] - matrix[(j, i)]).abs());
            }
        }
        if deviation > T::lit(1e-12) {
            return Err(Error::NotSymmetric { deviation: deviation.as_f64() });
        }
        let spectral_norm = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(T::zero(), |m, l| m.max(l.abs()));
        Ok(Self { k_qubits, matrix, spectral_norm })
    }

    pub fn identity(k_qubits: u32) -> Result<Self> {
        let side = 1usize << k_qubits.min(MAX_OBSERVABLE_QUBITS);
        Self::new(k_qubits, DMatrix::identity(side, side))
    }

    /// Pauli Z on `qubit`.
    pub fn pauli_z(qubit: u32) -> Result<Self> {
        let k = qubit + 1;
        let side = 1usize << k.min(MAX_OBSERVABLE_QUBITS);
        let m = DMatrix::from_fn(side, side, |i, j| {
            if i != j {
                T::zero()
            } else if (i >> qubit) & 1 == 0 {
                T::one()
            } else {
                -T::one()
            }
        });
        Self::new(k, m)
    }

    /// Pauli X on `qubit`.
    pub fn pauli_x(qubit: u32) -> Result<Self> {
        let k = qubit + 1;
        let side = 1usize << k.min(MAX_OBSERVABLE_QUBITS);
        let m = DMatrix::from_fn(side, side, |i, j| {
            if i ^ j == 1 << qubit {
                T::one()
            } else {
                T::zero()
            }
        });
        Self::new(k, m)
    }

    /// Symmetric matrix with i.i.d. entries uniform in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(k_qubits: u32, rng: &mut R) -> Result<Self> {
        let side = 1usize << k_qubits.min(MAX_OBSERVABLE_QUBITS);
        let mut m = DMatrix::<T>::zeros(side, side);
        for i in 0..side {
            for j in 0..=i {
                let x = T::lit(rng.gen_range(-1.0..=1.0));
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        Self::new(k_qubits, m)
    }

    pub fn k_qubits(&self) -> u32 {
        self.k_qubits
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    /// `‖O‖`, the largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> T {
        self.spectral_norm
    }

    /// `⟨φ|O ⊗ I|φ⟩`.
    pub fn expectation(&self, state: &AmplitudeVector<T>) -> Result<T> {
        if self.k_qubits > state.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: state.n_qubits() as usize,
                found: self.k_qubits as usize,
            });
        }
        let side = 1usize << self.k_qubits;
        let mut total = T::zero();
        for block in state.values().chunks_exact(side) {
            if block.iter().all(|x| *x == T::zero()) {
                continue;
            }
            for (i, &bi) in block.iter().enumerate() {
                if bi == T::zero() {
                    continue;
                }
                let row = self.matrix.column(i);
                let s = block.iter().zip(row.iter()).fold(T::zero(), |a, (&x, &o)| a + x * o);
                total += bi * s;
            }
        }
        Ok(total)
    }
}
