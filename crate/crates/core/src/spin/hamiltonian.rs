use num_complex::Complex;
use num_traits::Zero;

use super::params::ModelParams;
use crate::linalg::{ComplexMatrix, Subsystem};
use crate::open_system::{embed, LindbladModel, Target};
use crate::scalar::Real;

// Single-spin basis (|e>, |g>); two-spin basis (|ee>, |eg>, |ge>, |gg>).

pub fn sigma_plus<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(2, 2, |i, j| if i == 0 && j == 1 { Complex::new(T::one(), T::zero()) } else { Complex::zero() })
}

pub fn sigma_minus<T: Real>() -> ComplexMatrix<T> {
    sigma_plus::<T>().transpose()
}

/// n̂(θ, φ)·σ with n̂ = (sinθ cosφ, sinθ sinφ, cosθ).
pub fn field_term<T: Real>(theta: T, phi: T) -> ComplexMatrix<T> {
    let (s, c) = theta.sin_cos();
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = Complex::new(c, T::zero());
    m[(1, 1)] = Complex::new(-c, T::zero());
    m[(0, 1)] = Complex::from_polar(s, -phi);
    m[(1, 0)] = Complex::from_polar(s, phi);
    m
}

/// H = n̂·σ_a ⊗ 1 + g(σ_a⁺σ_b⁺ + σ_a⁻σ_b⁻).
pub fn hamiltonian<T: Real>(p: &ModelParams<T>) -> ComplexMatrix<T> {
    let drive = embed(&field_term(p.theta, p.phi), (2, 2), Subsystem::A);
    let sp = sigma_plus::<T>();
    let sm = sigma_minus::<T>();
    let coupling = &sp.kron(&sp) + &sm.kron(&sm);
    &drive + &coupling.scale_real(p.g)
}

/// Decay of spin a: Γ = √(2κ) σ_a⁻ ⊗ 1, so that H̃ = H − iκ σ_a⁺σ_a⁻.
pub fn decay_operator<T: Real>(p: &ModelParams<T>) -> ComplexMatrix<T> {
    embed(&sigma_minus(), (2, 2), Subsystem::A).scale_real((T::lit(2.0) * p.kappa).sqrt())
}

/// The two-spin model as a Lindblad model over [`ModelParams`].
pub fn spin_model<T: Real>() -> LindbladModel<T, ModelParams<T>> {
    LindbladModel::new(2, 2, |p: &ModelParams<T>| hamiltonian(p)).with_jump(
        "decay_a",
        Target::Local(Subsystem::A),
        |p: &ModelParams<T>| decay_operator(p),
    )
}

/// Effective Hamiltonian of the model, assembled directly.
pub fn effective_hamiltonian<T: Real>(p: &ModelParams<T>) -> ComplexMatrix<T> {
    let mut h = hamiltonian(p);
    for i in 0..2 {
        h[(i, i)] = h[(i, i)] - Complex::new(T::zero(), p.kappa);
    }
    h
}

/// Spin a alone: n̂·σ − iκ|e><e|. At g = 0 the two-spin spectrum is doubly
/// degenerate, so closed single-spin checks use this instead.
pub fn a_spin_hamiltonian<T: Real>(theta: T, phi: T, kappa: T) -> ComplexMatrix<T> {
    let mut h = field_term(theta, phi);
    h[(0, 0)] = h[(0, 0)] - Complex::new(T::zero(), kappa);
    h
}
