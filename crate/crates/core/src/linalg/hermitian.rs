//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Unlike [`super::eig::eig_general`] this accepts degenerate spectra, which is
//! what Gram matrices of maximally entangled states produce.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with orthonormal eigenvectors (columns of
/// the returned vectors list, one `Vec` per eigenvalue).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<Complex<T>>>,
}

pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = m.check_square()?;
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix"));
    }
    let mut a = m.hermitian_part();
    let mut w = ComplexMatrix::<T>::identity(n);
    let scale = a.frobenius_norm();
    let threshold = T::epsilon() * scale;

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut w, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold * T::lit(16.0) {
        return Err(Error::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order.iter().map(|&i| w.column(i)).collect();
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates a[p][q] with a unitary rotation in the (p, q) plane.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, w: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let n = a.rows();
    let phase = apq.unscale(g);
    let tau = (a[(q, q)].re - a[(p, p)].re) / (T::lit(2.0) * g);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // V columns: v_p = c e_p - s phase* e_q, v_q = s e_p + c phase* e_q
    let vpp = Complex::new(c, T::zero());
    let vqp = -phase.conj().scale(s);
    let vpq = Complex::new(s, T::zero());
    let vqq = phase.conj().scale(c);

    // A <- A V
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * vpp + aiq * vqp;
        a[(i, q)] = aip * vpq + aiq * vqq;
    }
    // A <- V^dagger A
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = vpp.conj() * apj + vqp.conj() * aqj;
        a[(q, j)] = vpq.conj() * apj + vqq.conj() * aqj;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
    for i in 0..n {
        let wip = w[(i, p)];
        let wiq = w[(i, q)];
        w[(i, p)] = wip * vpp + wiq * vqp;
        w[(i, q)] = wip * vpq + wiq * vqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::vector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_accepted() {
        let e = eigh(&ComplexMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn random_hermitian_decomposes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = ComplexMatrix::<f64>::from_fn(5, 5, |_, _| {
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .hermitian_part();
        let e = eigh(&m).unwrap();
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let r = vector::axpy(&m.matvec(v), Complex::new(-lam, 0.0), v);
            assert!(vector::norm(&r) < 1e-12);
        }
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((vector::inner(&e.vectors[i], &e.vectors[j]) - expected).norm() < 1e-13);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
