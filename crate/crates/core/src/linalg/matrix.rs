use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Rank-one matrix |u><v|.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| *z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half))
    }

    /// (M - M^dagger)/2, the anti-Hermitian part.
    pub fn anti_hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] - self[(j, i)].conj()).scale(half))
    }

    /// Max-entry deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(Complex::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// Kronecker product, self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Max-entry difference between two equally shaped matrices.
    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    pub(crate) fn check_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

/// Helpers for plain complex vectors.
pub mod vector {
    use num_complex::Complex;
    use num_traits::Zero;

    use crate::scalar::Real;

    /// <u|v>, conjugate-linear in the first argument.
    pub fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        debug_assert_eq!(u.len(), v.len());
        u.iter().zip(v).fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b)
    }

    pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
        v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm<T: Real>(v: &[Complex<T>]) -> T {
        norm_sqr(v).sqrt()
    }

    pub fn scale<T: Real>(v: &[Complex<T>], s: Complex<T>) -> Vec<Complex<T>> {
        v.iter().map(|z| *z * s).collect()
    }

    pub fn axpy<T: Real>(y: &[Complex<T>], a: Complex<T>, x: &[Complex<T>]) -> Vec<Complex<T>> {
        y.iter().zip(x).map(|(yi, xi)| *yi + a * *xi).collect()
    }

    pub fn sub<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
        u.iter().zip(v).map(|(a, b)| *a - *b).collect()
    }

    pub fn max_abs<T: Real>(v: &[Complex<T>]) -> T {
        v.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn kron<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
        u.iter().flat_map(|a| v.iter().map(move |b| *a * *b)).collect()
    }

    /// Unit vector in the same direction; returns `None` for the zero vector.
    pub fn normalized<T: Real>(v: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
        let n = norm(v);
        if n > T::zero() && n.is_finite() {
            Some(v.iter().map(|z| z.unscale(n)).collect())
        } else {
            None
        }
    }

    /// Index of the entry with the largest modulus (first one on ties).
    pub fn argmax_abs<T: Real>(v: &[Complex<T>]) -> usize {
        let mut best = 0;
        for (i, z) in v.iter().enumerate() {
            if z.norm() > v[best].norm() {
                best = i;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        assert!(matches!(
            M::from_row_major(2, 2, vec![c(1.0, 0.0); 3]),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
        assert!(matches!(
            M::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = M::identity(2).kron(&M::identity(3));
        assert_eq!(k, M::identity(6));
    }

    #[test]
    fn hermitian_and_anti_hermitian_parts_sum_back() {
        let m = M::from_fn(3, 3, |i, j| c(i as f64 + 0.5 * j as f64, (i * j) as f64 - 1.0));
        let back = &m.hermitian_part() + &m.anti_hermitian_part();
        assert!(back.max_diff(&m) < 1e-15);
        assert!(m.hermitian_part().is_hermitian(0.0));
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = M::from_row_major(2, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let b = a.adjoint();
        let p = &a * &b;
        assert_eq!(p[(0, 0)], c(2.0, 0.0));
        assert_eq!(p[(0, 1)], c(2.0, 0.0));
        assert_eq!(p[(1, 1)], c(4.0, 0.0));
    }
}
