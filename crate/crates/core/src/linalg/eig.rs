//! Non-Hermitian eigendecomposition for small dense complex matrices.
//!
//! Eigenvalues come from Householder reduction to upper Hessenberg form
//! followed by Wilkinson-shifted QR sweeps with deflation. Eigenvectors are
//! obtained by inverse iteration; left eigenvectors by running the same
//! procedure on the adjoint and pairing each adjoint eigenvalue with the
//! nearest conjugate. Pairs are then scaled so that `<left_n|right_n> = 1`.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::{vector, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_DIM: usize = 64;

/// Relative spectral gap below which a spectrum counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

const QR_ITERS_PER_EIGENVALUE: usize = 60;
const INVERSE_ITERATION_SWEEPS: usize = 4;

/// Right/left eigenvector pairs normalized so that `<lefts[m]|rights[n]> = δ_mn`.
///
/// Rights have unit Euclidean norm. `condition[n]` holds `|<l|r>|` for the
/// unit-normalized pair before rescaling; small values flag a nearly
/// defective branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalEigensystem<T> {
    pub eigenvalues: Vec<Complex<T>>,
    pub rights: Vec<Vec<Complex<T>>>,
    pub lefts: Vec<Vec<Complex<T>>>,
    pub condition: Vec<T>,
}

impl<T: Real> BiorthogonalEigensystem<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest `|<l_m|r_n> - δ_mn|` over all pairs.
    pub fn biorthogonality_defect(&self) -> T {
        let mut worst = T::zero();
        for (m, l) in self.lefts.iter().enumerate() {
            for (n, r) in self.rights.iter().enumerate() {
                let target = if m == n { Complex::one() } else { Complex::zero() };
                worst = worst.max((vector::inner(l, r) - target).norm());
            }
        }
        worst
    }

    /// `(max_n ‖M r_n − λ_n r_n‖, max_n ‖M† l_n − λ_n* l_n‖)`.
    pub fn residuals(&self, m: &ComplexMatrix<T>) -> (T, T) {
        let adj = m.adjoint();
        let mut right = T::zero();
        let mut left = T::zero();
        for n in 0..self.dim() {
            let lam = self.eigenvalues[n];
            let r = &self.rights[n];
            let l = &self.lefts[n];
            right = right.max(vector::norm(&vector::axpy(&m.matvec(r), -lam, r)));
            left = left.max(vector::norm(&vector::axpy(&adj.matvec(l), -lam.conj(), l)));
        }
        (right, left)
    }
}

/// Full biorthogonal eigensystem of a square matrix with non-degenerate spectrum.
///
/// Eigenvalues are sorted by descending real part, ties (within 1e-10‖m‖)
/// broken by descending imaginary part.
pub fn eig_general<T: Real>(m: &ComplexMatrix<T>) -> Result<BiorthogonalEigensystem<T>> {
    let n = m.check_square()?;
    if n > MAX_DIM {
        return Err(Error::TooLarge(n));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix"));
    }
    if n == 0 {
        return Ok(BiorthogonalEigensystem {
            eigenvalues: vec![],
            rights: vec![],
            lefts: vec![],
            condition: vec![],
        });
    }
    let norm = m.frobenius_norm();
    let mut values = eigenvalues(m)?;

    let tol = T::lit(DEGENERACY_TOL) * norm;
    let gap = min_gap(&values);
    if n > 1 && (gap < tol || gap == T::zero()) {
        return Err(Error::Degenerate { gap: gap.to_f64_lossy(), tol: tol.to_f64_lossy() });
    }

    let tie = T::lit(1e-10) * norm;
    values.sort_by(|a, b| {
        if (a.re - b.re).abs() > tie {
            b.re.partial_cmp(&a.re).unwrap()
        } else {
            b.im.partial_cmp(&a.im).unwrap()
        }
    });

    let adj = m.adjoint();
    let mut adj_values = eigenvalues(&adj)?;

    let mut eigenvalues_out = Vec::with_capacity(n);
    let mut rights = Vec::with_capacity(n);
    let mut lefts = Vec::with_capacity(n);
    let mut condition = Vec::with_capacity(n);
    for lam in values {
        // nearest conjugate among the remaining adjoint eigenvalues
        let target = lam.conj();
        let (j, _) = adj_values
            .iter()
            .enumerate()
            .map(|(j, mu)| (j, (*mu - target).norm()))
            .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best });
        let mu = adj_values.swap_remove(j);

        let r = inverse_iteration(m, lam, norm);
        let l = inverse_iteration(&adj, mu, norm);
        let overlap = vector::inner(&l, &r);
        condition.push(overlap.norm());
        if overlap.norm() == T::zero() {
            return Err(Error::Degenerate { gap: 0.0, tol: tol.to_f64_lossy() });
        }
        // <l|r> = 1 with r kept at unit norm
        let l = vector::scale(&l, Complex::new(T::one(), T::zero()) / overlap.conj());
        eigenvalues_out.push(lam);
        rights.push(r);
        lefts.push(l);
    }

    Ok(BiorthogonalEigensystem { eigenvalues: eigenvalues_out, rights, lefts, condition })
}

fn min_gap<T: Real>(values: &[Complex<T>]) -> T {
    let mut gap = T::infinity();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Eigenvalues only, in no particular order.
pub fn eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.check_square()?;
    let mut h = hessenberg(m);
    let eps = T::epsilon();
    let norm = m.frobenius_norm();
    let mut out = vec![Complex::zero(); n];
    if n == 0 {
        return Ok(out);
    }

    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        // locate the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let scale = if scale == T::zero() { norm } else { scale };
            if h[(lo, lo - 1)].norm() <= eps * scale {
                h[(lo, lo - 1)] = Complex::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > QR_ITERS_PER_EIGENVALUE {
            return Err(Error::NoConvergence);
        }

        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex::new(h[(hi, hi - 1)].norm() * T::lit(0.75), T::zero())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    out[0] = h[(0, 0)];
    Ok(out)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let mean = (a + d).scale(half);
    let disc = ((a - d).scale(half).powi(2) + b * c).sqrt();
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// One explicitly shifted QR step on the active block `lo..=hi` of an upper
/// Hessenberg matrix, using Givens rotations.
fn qr_sweep<T: Real>(h: &mut ComplexMatrix<T>, lo: usize, hi: usize, shift: Complex<T>) {
    for k in lo..=hi {
        h[(k, k)] = h[(k, k)] - shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == T::zero() {
            (Complex::one(), Complex::zero())
        } else {
            (x.unscale(r), y.unscale(r))
        };
        // G = [[c*, s*], [-s, c]] applied to rows k, k+1
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c.conj() * a + s.conj() * b;
            h[(k + 1, j)] = -s * a + c * b;
        }
        rotations.push((c, s));
    }
    for (offset, (c, s)) in rotations.into_iter().enumerate() {
        let k = lo + offset;
        // right-multiply by G^dagger = [[c, -s*], [s, c*]] on columns k, k+1
        for i in lo..=(k + 1).min(hi) {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s;
            h[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] = h[(k, k)] + shift;
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
pub fn hessenberg<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = m.rows();
    let mut a = m.clone();
    if n < 3 {
        return a;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = vector::norm(&x);
        if xnorm == T::zero() {
            continue;
        }
        let phase = if x[0].norm() == T::zero() { Complex::one() } else { x[0].unscale(x[0].norm()) };
        let alpha = -phase.scale(xnorm);
        let mut v = x.clone();
        v[0] = v[0] - alpha;
        let Some(v) = vector::normalized(&v) else { continue };
        let two = Complex::new(T::lit(2.0), T::zero());
        for j in 0..n {
            let s = (k + 1..n).fold(Complex::zero(), |acc, i| acc + v[i - k - 1].conj() * a[(i, j)]);
            for i in k + 1..n {
                a[(i, j)] = a[(i, j)] - two * v[i - k - 1] * s;
            }
        }
        for i in 0..n {
            let s = (k + 1..n).fold(Complex::zero(), |acc, l| acc + a[(i, l)] * v[l - k - 1]);
            for l in k + 1..n {
                a[(i, l)] = a[(i, l)] - two * s * v[l - k - 1].conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex::zero();
        }
    }
    a
}

/// Unit eigenvector for the (approximate) eigenvalue `sigma`.
fn inverse_iteration<T: Real>(m: &ComplexMatrix<T>, sigma: Complex<T>, norm: T) -> Vec<Complex<T>> {
    let n = m.rows();
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] = shifted[(i, i)] - sigma;
    }
    let floor = T::epsilon() * norm.max(T::min_positive_value());
    let lu = Lu::factor(shifted, floor);
    // a deterministic start vector with no special alignment
    let mut x: Vec<Complex<T>> = (0..n)
        .map(|i| Complex::new(T::one(), T::lit(0.1) * T::from_usize(i + 1).unwrap()))
        .collect();
    for _ in 0..INVERSE_ITERATION_SWEEPS {
        let y = lu.solve(&x);
        match vector::normalized(&y) {
            Some(u) => x = u,
            None => break,
        }
    }
    // fix the gauge: largest component real positive
    let k = vector::argmax_abs(&x);
    let phase = x[k].unscale(x[k].norm());
    vector::scale(&x, phase.conj())
}

struct Lu<T> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Partial-pivoting LU. Exactly singular pivots are replaced by `floor`,
    /// which is what inverse iteration needs at an exact eigenvalue.
    fn factor(mut a: ComplexMatrix<T>, floor: T) -> Self {
        let n = a.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap())
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            if a[(k, k)].norm() < floor {
                a[(k, k)] = Complex::new(floor, T::zero());
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                for j in k + 1..n {
                    a[(i, j)] = a[(i, j)] - f * a[(k, j)];
                }
            }
        }
        Self { lu: a, perm }
    }

    fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = b.len();
        let mut y: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i] - self.lu[(i, j)] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] = y[i] - self.lu[(i, j)] * y[j];
            }
            y[i] = y[i] / self.lu[(i, i)];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn random_matrix(n: usize, seed: u64) -> M {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        M::from_fn(n, n, |_, _| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn identity_is_degenerate() {
        assert!(matches!(eig_general(&M::identity(4)), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn diagonal_matrix_gives_standard_basis() {
        let m = M::from_diagonal(&[Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)]);
        let sys = eig_general(&m).unwrap();
        assert_eq!(sys.eigenvalues, vec![Complex::new(2.0, 0.0), Complex::new(1.0, 0.0)]);
        assert!((sys.rights[0][1] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!((sys.rights[1][0] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!(sys.biorthogonality_defect() < 1e-14);
    }

    #[test]
    fn random_matrix_residuals_are_tiny() {
        let m = random_matrix(4, 7);
        let sys = eig_general(&m).unwrap();
        let (r, l) = sys.residuals(&m);
        let scale = m.frobenius_norm();
        assert!(r < 1e-10 * scale, "right residual {r}");
        assert!(l < 1e-10 * scale, "left residual {l}");
        assert!(sys.biorthogonality_defect() < 1e-10);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(eig_general(&M::zeros(2, 3)), Err(Error::NonSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn ordering_breaks_real_ties_by_imaginary_part() {
        // eigenvalues ±i share the real part 0
        let m = M::from_row_major(
            2,
            2,
            vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0), Complex::new(0.0, 0.0)],
        )
        .unwrap();
        let sys = eig_general(&m).unwrap();
        assert!(sys.eigenvalues[0].im > 0.0 && sys.eigenvalues[1].im < 0.0);
    }

    #[test]
    fn large_dimension_converges() {
        let m = random_matrix(16, 3);
        let sys = eig_general(&m).unwrap();
        let (r, l) = sys.residuals(&m);
        assert!(r < 1e-10 * m.frobenius_norm() && l < 1e-10 * m.frobenius_norm());
    }

    #[test]
    fn hessenberg_is_similar() {
        let m = random_matrix(6, 11);
        let h = hessenberg(&m);
        for i in 2..6 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], Complex::new(0.0, 0.0));
            }
        }
        assert!((h.trace() - m.trace()).norm() < 1e-12);
        assert!((h.frobenius_norm() - m.frobenius_norm()).abs() < 1e-12);
    }
}
