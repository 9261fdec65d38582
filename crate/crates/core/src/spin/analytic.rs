//! Closed-form eigensystem of the two-spin effective Hamiltonian.
//!
//! With n_z = cosθ − iκ/2 the traceless operator H̃ + iκ/2 has energies
//! ±E_1, ±E_3 where E² = sin²θ + n_z² + g²/2 ± (g/2)√(g² + 4 sin²θ).
//! Right vectors are b|ee> + a|eg> + d|ge> + c|gg> with
//! a = sinθ e^{−iφ}, c = E − n_z, b = (E² − n_z² − sin²θ)/g and
//! d = sinθ e^{iφ} b / (E + n_z). Left vectors use the same formulas with
//! κ → −κ (and so E → E*).

use num_complex::Complex;

use super::hamiltonian::effective_hamiltonian;
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::linalg::{eig_general, vector, BiorthogonalEigensystem};
use crate::scalar::Real;

/// Coupling below which branches 1 and 3 merge.
pub const MIN_COUPLING: f64 = 1e-6;
/// Minimum separation between any two analytic energies.
pub const MIN_ENERGY_GAP: f64 = 1e-8;
/// Denominators and vector norms below this switch to another formula.
pub const DENOMINATOR_GUARD: f64 = 1e-10;

/// Which formula produced a branch's coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientPath {
    /// d from the (E + n_z) denominator.
    Primary,
    /// d from the (E² − n_z² − sin²θ) denominator.
    Alternate,
    /// Both denominators vanish; vectors from the numerical eigensolver.
    Numeric,
}

/// Coefficients (a, b, c, d) of a vector in the basis order
/// (|ee>, |eg>, |ge>, |gg>) = (b, a, d, c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Coefficients<T> {
    pub fn vector(&self) -> Vec<Complex<T>> {
        vec![self.b, self.a, self.d, self.c]
    }

    fn from_vector(v: &[Complex<T>]) -> Self {
        Self { b: v[0], a: v[1], d: v[2], c: v[3] }
    }

    fn scaled(&self, s: Complex<T>) -> Self {
        Self { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    fn norm_sqr(&self) -> T {
        vector::norm_sqr(&self.vector())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticBranch<T> {
    /// 1..=4 in the order E_1, E_2 = −E_1, E_3, E_4 = −E_3.
    pub index: usize,
    /// Energy of the traceless operator; the eigenvalue of H̃ is `E − iκ/2`.
    pub energy: Complex<T>,
    /// Right coefficients scaled to unit norm.
    pub right: Coefficients<T>,
    /// Squared norm of the right coefficients before scaling.
    pub norm_sqr: T,
    /// Left coefficients scaled so that <left|right> = 1.
    pub left: Coefficients<T>,
    pub path: CoefficientPath,
}

impl<T: Real> AnalyticBranch<T> {
    pub fn eigenvalue(&self, kappa: T) -> Complex<T> {
        self.energy - Complex::new(T::zero(), kappa * T::lit(0.5))
    }

    pub fn right_vector(&self) -> Vec<Complex<T>> {
        self.right.vector()
    }

    pub fn left_vector(&self) -> Vec<Complex<T>> {
        self.left.vector()
    }
}

/// Energies E_1..E_4 (principal square roots).
pub fn energies<T: Real>(p: &ModelParams<T>) -> [Complex<T>; 4] {
    let (s, c) = p.theta.sin_cos();
    let half = T::lit(0.5);
    let nz = Complex::new(c, -half * p.kappa);
    let base = nz * nz + Complex::new(s * s + half * p.g * p.g, T::zero());
    let r = half * p.g * (p.g * p.g + T::lit(4.0) * s * s).sqrt();
    let e1 = (base + Complex::new(r, T::zero())).sqrt();
    let e3 = (base - Complex::new(r, T::zero())).sqrt();
    [e1, -e1, e3, -e3]
}

/// Raw (unnormalized) coefficients for energy `e` with decay `kappa`; `None`
/// if both closed forms break down.
fn raw_coefficients<T: Real>(theta: T, phi: T, g: T, kappa: T, e: Complex<T>) -> Option<(Coefficients<T>, CoefficientPath)> {
    let (s, c) = theta.sin_cos();
    let nz = Complex::new(c, -T::lit(0.5) * kappa);
    let guard = T::lit(DENOMINATOR_GUARD);
    let a = Complex::from_polar(s, -phi);
    let cc = e - nz;
    let x = e * e - nz * nz - Complex::new(s * s, T::zero());
    let b = x / Complex::new(g, T::zero());
    let eip = Complex::from_polar(s, phi);
    let (d, path) = if (e + nz).norm() >= guard {
        (eip * b / (e + nz), CoefficientPath::Primary)
    } else if x.norm() >= guard {
        (eip * cc * Complex::new(g, T::zero()) / x, CoefficientPath::Alternate)
    } else {
        return None;
    };
    let coeffs = Coefficients { a, b, c: cc, d };
    if coeffs.norm_sqr().sqrt() < guard {
        return None;
    }
    Some((coeffs, path))
}

fn nearest<T: Real>(sys: &BiorthogonalEigensystem<T>, target: Complex<T>) -> usize {
    (0..sys.dim())
        .min_by(|&i, &j| {
            (sys.eigenvalues[i] - target).norm().partial_cmp(&(sys.eigenvalues[j] - target).norm()).unwrap()
        })
        .unwrap()
}

/// The four analytic branches at `p`.
pub fn analytic_eigensystem<T: Real>(p: &ModelParams<T>) -> Result<[AnalyticBranch<T>; 4]> {
    p.validate()?;
    if p.g < T::lit(MIN_COUPLING) {
        return Err(Error::Degenerate { gap: 0.0, tol: MIN_COUPLING });
    }
    let es = energies(p);
    let mut gap = T::infinity();
    for i in 0..4 {
        for j in i + 1..4 {
            gap = gap.min((es[i] - es[j]).norm());
        }
    }
    if gap < T::lit(MIN_ENERGY_GAP) {
        return Err(Error::Degenerate { gap: gap.to_f64_lossy(), tol: MIN_ENERGY_GAP });
    }

    let mut numeric: Option<BiorthogonalEigensystem<T>> = None;
    let shift = Complex::new(T::zero(), T::lit(0.5) * p.kappa);
    let mut out = Vec::with_capacity(4);
    for (n, &e) in es.iter().enumerate() {
        let right = raw_coefficients(p.theta, p.phi, p.g, p.kappa, e);
        let left = raw_coefficients(p.theta, p.phi, p.g, -p.kappa, e.conj());
        let (right, left, path) = match (right, left) {
            (Some((r, pr)), Some((l, pl))) => {
                let path = if pr == CoefficientPath::Primary && pl == CoefficientPath::Primary {
                    CoefficientPath::Primary
                } else {
                    CoefficientPath::Alternate
                };
                (r, l, path)
            }
            _ => {
                if numeric.is_none() {
                    numeric = Some(eig_general(&effective_hamiltonian(p))?);
                }
                let sys = numeric.as_ref().unwrap();
                let k = nearest(sys, e - shift);
                (
                    Coefficients::from_vector(&sys.rights[k]),
                    Coefficients::from_vector(&sys.lefts[k]),
                    CoefficientPath::Numeric,
                )
            }
        };
        let norm_sqr = right.norm_sqr();
        let right = right.scaled(Complex::new(T::one() / norm_sqr.sqrt(), T::zero()));
        let overlap = vector::inner(&left.vector(), &right.vector());
        if overlap.norm() < T::lit(DENOMINATOR_GUARD) {
            return Err(Error::Degenerate { gap: overlap.norm().to_f64_lossy(), tol: DENOMINATOR_GUARD });
        }
        let left = left.scaled(Complex::new(T::one(), T::zero()) / overlap.conj());
        out.push(AnalyticBranch { index: n + 1, energy: e, right, norm_sqr, left, path });
    }
    let mut it = out.into_iter();
    Ok([it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
}

/// Index in `eig_general` order of the eigenvalue nearest analytic branch `n`
/// (1-based), evaluated at `p`.
pub fn numeric_index<T: Real>(sys: &BiorthogonalEigensystem<T>, p: &ModelParams<T>, n: usize) -> Result<usize> {
    if !(1..=4).contains(&n) {
        return Err(Error::BranchOutOfRange { index: n, dim: 4 });
    }
    let e = energies(p)[n - 1];
    Ok(nearest(sys, e - Complex::new(T::zero(), T::lit(0.5) * p.kappa)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use std::f64::consts::PI;

    fn residual(h: &ComplexMatrix<f64>, v: &[Complex<f64>], lam: Complex<f64>) -> f64 {
        vector::norm(&vector::axpy(&h.matvec(v), -lam, v))
    }

    #[test]
    fn equatorial_closed_energy() {
        let p = ModelParams { theta: PI / 2.0, phi: 0.0, g: 2.0, kappa: 0.0 };
        let e = energies(&p);
        assert!((e[0].re - (1.0 + 2f64.sqrt())).abs() < 1e-12 && e[0].im.abs() < 1e-15);
    }

    #[test]
    fn energies_come_in_opposite_pairs() {
        let p = ModelParams { theta: 0.7, phi: 0.3, g: 1.1, kappa: 0.4 };
        let e = energies(&p);
        assert!((e[0] + e[1]).norm() < 1e-12 && (e[2] + e[3]).norm() < 1e-12);
    }

    #[test]
    fn branches_are_right_and_left_eigenvectors() {
        for (theta, phi, g, kappa) in [(0.9, 0.4, 1.3, 0.6), (2.5, -1.0, 0.5, 1.7), (0.1, 3.0, 2.0, 0.0)] {
            let p = ModelParams { theta, phi, g, kappa };
            let h = effective_hamiltonian(&p);
            for b in analytic_eigensystem(&p).unwrap() {
                let lam = b.eigenvalue(kappa);
                assert!(residual(&h, &b.right_vector(), lam) < 1e-10, "right {b:?}");
                assert!(residual(&h.adjoint(), &b.left_vector(), lam.conj()) < 1e-10, "left {b:?}");
                assert_eq!(b.path, CoefficientPath::Primary);
            }
        }
    }

    #[test]
    fn left_rule_is_kappa_reflection() {
        let p = ModelParams { theta: 1.2, phi: 0.8, g: 0.9, kappa: 0.5 };
        let e = energies(&p);
        let e_reflected = energies(&ModelParams { kappa: -p.kappa, ..p });
        for n in 0..4 {
            assert!((e[n].conj() - e_reflected[n]).norm() < 1e-14);
        }
    }

    #[test]
    fn polar_field_uses_numeric_fallback() {
        let p = ModelParams { theta: 0.0, phi: 0.0, g: 1.0, kappa: 0.3 };
        let branches = analytic_eigensystem(&p).unwrap();
        assert!(branches.iter().any(|b| b.path == CoefficientPath::Numeric));
        let h = effective_hamiltonian(&p);
        for b in branches {
            assert!(residual(&h, &b.right_vector(), b.eigenvalue(p.kappa)) < 1e-10);
        }
    }

    #[test]
    fn zero_coupling_is_degenerate() {
        let p = ModelParams { theta: 1.0, phi: 0.0, g: 0.0, kappa: 0.1 };
        assert!(matches!(analytic_eigensystem(&p), Err(Error::Degenerate { .. })));
    }
}
