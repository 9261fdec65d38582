use num_complex::Complex;
use num_traits::Zero;

use super::hermitian::eigh;
use super::matrix::{vector, ComplexMatrix};
use super::state::BipartiteState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Weights (relative to the state norm) at or below this are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// `|ψ> = Σ_j weights[j] |vectors_a[j]> ⊗ |vectors_b[j]>`, weights descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition<T> {
    pub weights: Vec<T>,
    pub vectors_a: Vec<Vec<Complex<T>>>,
    pub vectors_b: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SchmidtDecomposition<T> {
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn reconstruct(&self) -> Vec<Complex<T>> {
        let da = self.vectors_a.first().map_or(0, Vec::len);
        let db = self.vectors_b.first().map_or(0, Vec::len);
        let mut out = vec![Complex::zero(); da * db];
        for ((w, e), f) in self.weights.iter().zip(&self.vectors_a).zip(&self.vectors_b) {
            for (k, z) in vector::kron(e, f).into_iter().enumerate() {
                out[k] = out[k] + z.scale(*w);
            }
        }
        out
    }
}

/// Schmidt decomposition from the Hermitian eigenproblem of the Gram matrix CC†.
///
/// The b-side vectors are `C^T e_j*` normalized; their norms are the weights,
/// which keeps small weights accurate to round-off instead of sqrt(round-off).
pub fn schmidt<T: Real>(state: &BipartiteState<T>) -> Result<SchmidtDecomposition<T>> {
    let norm = state.norm();
    if norm <= T::zero() {
        return Err(Error::ZeroState);
    }
    let c = state.coefficient_matrix();
    let gram = &c * &c.adjoint();
    let eig = eigh(&gram)?;
    let ct = c.transpose();
    let cutoff = T::lit(SCHMIDT_CUTOFF) * norm;

    let mut terms: Vec<(T, Vec<Complex<T>>, Vec<Complex<T>>)> = Vec::new();
    for e in eig.vectors {
        let conj_e: Vec<Complex<T>> = e.iter().map(|z| z.conj()).collect();
        let f = ct.matvec(&conj_e);
        let w = vector::norm(&f);
        if w > cutoff {
            let f = f.iter().map(|z| z.unscale(w)).collect();
            terms.push((w, e, f));
        }
    }
    terms.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let mut out = SchmidtDecomposition { weights: vec![], vectors_a: vec![], vectors_b: vec![] };
    for (w, e, f) in terms {
        out.weights.push(w);
        out.vectors_a.push(e);
        out.vectors_b.push(f);
    }
    Ok(out)
}

/// Gram matrix helper kept separate for diagnostics: C C†.
pub fn gram_a<T: Real>(state: &BipartiteState<T>) -> ComplexMatrix<T> {
    let c = state.coefficient_matrix();
    &c * &c.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn product_state_has_one_term() {
        let psi = BipartiteState::new(2, 2, vec![c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        let s = schmidt(&psi).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_state_has_equal_weights() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = BipartiteState::new(2, 2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let s = schmidt(&psi).unwrap();
        assert_eq!(s.rank(), 2);
        for w in &s.weights {
            assert!((w - h).abs() < 1e-15);
        }
        assert!(vector::max_abs(&vector::sub(&s.reconstruct(), psi.amplitudes())) < 1e-15);
    }

    #[test]
    fn random_state_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (da, db) in [(2, 2), (2, 3), (3, 2)] {
            let amps = (0..da * db)
                .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let psi = BipartiteState::new(da, db, amps).unwrap();
            let s = schmidt(&psi).unwrap();
            assert!(vector::max_abs(&vector::sub(&s.reconstruct(), psi.amplitudes())) < 1e-12);
            let total: f64 = s.weights.iter().map(|w| w * w).sum();
            assert!((total - psi.norm_sqr()).abs() < 1e-12 * psi.norm_sqr());
            for side in [&s.vectors_a, &s.vectors_b] {
                for i in 0..side.len() {
                    for j in 0..side.len() {
                        let expected = if i == j { 1.0 } else { 0.0 };
                        assert!((vector::inner(&side[i], &side[j]) - expected).norm() < 1e-12);
                    }
                }
            }
        }
    }
}
