use num_complex::Complex;
use num_traits::Zero;

use super::matrix::{vector, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which factor of a bipartite space to keep (or act on).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Pure state of a `dim_a x dim_b` composite system.
///
/// Amplitudes use the index convention `i_a * dim_b + i_b`. The state does
/// not have to be normalized (no-jump evolution shrinks the norm) but it must
/// not vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState<T> {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> BipartiteState<T> {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch { expected: dim_a * dim_b, found: amplitudes.len() });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state"));
        }
        if vector::norm_sqr(&amplitudes) <= T::zero() {
            return Err(Error::ZeroState);
        }
        Ok(Self { dim_a, dim_b, amplitudes })
    }

    /// |a> ⊗ |b>.
    pub fn product(a: &[Complex<T>], b: &[Complex<T>]) -> Result<Self> {
        Self::new(a.len(), b.len(), vector::kron(a, b))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn amplitude(&self, i_a: usize, i_b: usize) -> Complex<T> {
        self.amplitudes[i_a * self.dim_b + i_b]
    }

    pub fn norm_sqr(&self) -> T {
        vector::norm_sqr(&self.amplitudes)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            amplitudes: self.amplitudes.iter().map(|z| z.unscale(n)).collect(),
        }
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        vector::inner(&self.amplitudes, &other.amplitudes)
    }

    /// Same dimensions, new amplitudes (validated).
    pub fn with_amplitudes(&self, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        Self::new(self.dim_a, self.dim_b, amplitudes)
    }

    pub fn scaled(&self, s: Complex<T>) -> Result<Self> {
        self.with_amplitudes(vector::scale(&self.amplitudes, s))
    }

    /// Coefficient matrix C with C[i_a][i_b] = amplitude.
    pub fn coefficient_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.dim_a, self.dim_b, |i, j| self.amplitude(i, j))
    }

    /// Density matrix |self><self|.
    pub fn density_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Tr_other |first><second|.
///
/// With `first == second` this is the ordinary reduced density matrix; with
/// a right/left eigenvector pair it is the non-Hermitian reduced operator
/// used for open-system subsystem phases.
pub fn partial_trace<T: Real>(
    first: &BipartiteState<T>,
    second: &BipartiteState<T>,
    keep: Subsystem,
) -> Result<ComplexMatrix<T>> {
    let (da, db) = first.dims();
    if second.dims() != (da, db) {
        let (sa, sb) = second.dims();
        return Err(Error::DimensionMismatch { expected: da * db, found: sa * sb });
    }
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, k| {
            (0..db).fold(Complex::zero(), |acc, j| acc + first.amplitude(i, j) * second.amplitude(k, j).conj())
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |j, l| {
            (0..da).fold(Complex::zero(), |acc, i| acc + first.amplitude(i, j) * second.amplitude(i, l).conj())
        }),
    };
    Ok(out)
}
