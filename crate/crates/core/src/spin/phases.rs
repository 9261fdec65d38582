use num_complex::Complex;

use super::analytic::{analytic_eigensystem, numeric_index};
use super::hamiltonian::{decay_operator, effective_hamiltonian, sigma_minus};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::linalg::{eig_general, partial_trace, vector, BipartiteState, ComplexMatrix, Subsystem};
use crate::phase::{adiabatic_berry_phase, jump_phase_subsystem, subsystem_phase_split, LoopPath, PhaseReport, SubsystemPhaseSplit};
use crate::scalar::{arg, Real};

/// Default number of loop samples.
pub const DEFAULT_LOOP_POINTS: usize = 1024;

/// φ-loop 0 → 2π at the θ, g, κ of `p`.
pub fn phi_loop<T: Real>(points: usize) -> LoopPath<T> {
    LoopPath::new("phi", points, |s| T::lit(std::f64::consts::TAU * s))
}

fn phi_builder<T: Real>(p: ModelParams<T>) -> impl Fn(&T) -> Result<ComplexMatrix<T>> {
    move |phi: &T| Ok(effective_hamiltonian(&p.with_phi(*phi)))
}

/// Index in `eig_general` order of analytic branch `branch` at φ = 0.
pub fn loop_start_index<T: Real>(p: &ModelParams<T>, branch: usize) -> Result<usize> {
    let base = p.with_phi(T::zero());
    let sys = eig_general(&effective_hamiltonian(&base))?;
    numeric_index(&sys, &base, branch)
}

/// Berry phase of analytic branch `branch` (1..=4) over the φ-loop.
pub fn spin_berry_phase<T: Real>(p: &ModelParams<T>, branch: usize, points: usize) -> Result<PhaseReport<T>> {
    p.validate()?;
    let start = loop_start_index(p, branch)?;
    let mut report = adiabatic_berry_phase(phi_builder(*p), &phi_loop(points), start)?;
    report.branch = Some(branch);
    Ok(report)
}

/// Schmidt-term split of the φ-loop phase of analytic branch `branch`.
pub fn spin_phase_split<T: Real>(p: &ModelParams<T>, branch: usize, points: usize) -> Result<SubsystemPhaseSplit<T>> {
    p.validate()?;
    let start = loop_start_index(p, branch)?;
    subsystem_phase_split(phi_builder(*p), (2, 2), &phi_loop(points), start)
}

/// The two pieces `a_n C_n*` and `b_n D_n*` of the jump expectation, with
/// biorthonormal coefficients.
pub fn model_jump_terms<T: Real>(branch: usize, p: &ModelParams<T>) -> Result<(Complex<T>, Complex<T>)> {
    if !(1..=4).contains(&branch) {
        return Err(Error::BranchOutOfRange { index: branch, dim: 4 });
    }
    let b = &analytic_eigensystem(p)?[branch - 1];
    Ok((b.right.a * b.left.c.conj(), b.right.b * b.left.d.conj()))
}

/// Jump phase `arg{a_n C_n* + b_n D_n*}` of branch `branch` at the φ in `p`.
pub fn model_jump_phase<T: Real>(branch: usize, p: &ModelParams<T>) -> Result<T> {
    let (x, y) = model_jump_terms(branch, p)?;
    let z = x + y;
    let scale = x.norm() + y.norm();
    if z.norm() <= T::lit(1e-14) * scale.max(T::min_positive_value()) || z.norm() == T::zero() {
        return Err(Error::ZeroExpectation);
    }
    Ok(arg(z))
}

/// Same quantity through the reduced operator `Tr_b |φ_n><Φ_n|` and σ⁻.
pub fn model_jump_phase_reduced<T: Real>(branch: usize, p: &ModelParams<T>) -> Result<T> {
    if !(1..=4).contains(&branch) {
        return Err(Error::BranchOutOfRange { index: branch, dim: 4 });
    }
    let b = &analytic_eigensystem(p)?[branch - 1];
    let right = BipartiteState::new(2, 2, b.right_vector())?;
    let left = BipartiteState::new(2, 2, b.left_vector())?;
    let rho = partial_trace(&right, &left, Subsystem::A)?;
    jump_phase_subsystem(&rho, &sigma_minus())
}

/// Normalized branch state (right vector) as a bipartite state.
pub fn branch_state<T: Real>(branch: usize, p: &ModelParams<T>) -> Result<BipartiteState<T>> {
    if !(1..=4).contains(&branch) {
        return Err(Error::BranchOutOfRange { index: branch, dim: 4 });
    }
    let b = &analytic_eigensystem(p)?[branch - 1];
    BipartiteState::new(2, 2, vector::normalized(&b.right_vector()).ok_or(Error::ZeroState)?)
}

/// Jump operator of the model with unit rate, σ_a⁻ ⊗ 1.
pub fn unit_decay<T: Real>() -> ComplexMatrix<T> {
    let p = ModelParams { theta: T::zero(), phi: T::zero(), g: T::zero(), kappa: T::lit(0.5) };
    decay_operator(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::jump_phase_total;
    use crate::scalar::wrap_phase;
    use std::f64::consts::PI;

    #[test]
    fn closed_jump_phase_matches_expectation() {
        let p: ModelParams<f64> = ModelParams { theta: 1.1, phi: PI, g: 0.8, kappa: 0.0 };
        for n in 1..=4 {
            let psi = branch_state(n, &p).unwrap();
            let total = jump_phase_total(&psi, &unit_decay()).unwrap();
            assert!(wrap_phase(model_jump_phase(n, &p).unwrap() - total).abs() < 1e-10);
        }
    }

    #[test]
    fn jump_phase_equals_reduced_form() {
        let p: ModelParams<f64> = ModelParams { theta: 0.6, phi: 0.9, g: 1.4, kappa: 0.7 };
        for n in 1..=4 {
            let d = wrap_phase(model_jump_phase(n, &p).unwrap() - model_jump_phase_reduced(n, &p).unwrap());
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn both_terms_follow_phi() {
        let p: ModelParams<f64> = ModelParams { theta: 0.6, phi: 0.2, g: 1.4, kappa: 0.7 };
        let shift: f64 = 0.9;
        for n in 1..=4 {
            let (x0, y0) = model_jump_terms(n, &p).unwrap();
            let (x1, y1) = model_jump_terms(n, &p.with_phi(p.phi + shift)).unwrap();
            assert!(wrap_phase(arg(x1) - arg(x0) + shift).abs() < 1e-10);
            assert!(wrap_phase(arg(y1) - arg(y0) + shift).abs() < 1e-10);
            assert!((x1.norm() - x0.norm()).abs() < 1e-12 && (y1.norm() - y0.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn point_loop_has_no_phase() {
        let p: ModelParams<f64> = ModelParams { theta: 0.0, phi: 0.0, g: 1.0, kappa: 0.0 };
        let r = spin_berry_phase(&p, 1, 128).unwrap();
        assert!(r.geometric.abs() < 1e-12);
    }

    #[test]
    fn doubling_points_is_converged() {
        let p: ModelParams<f64> = ModelParams { theta: 1.0, phi: 0.0, g: 1.0, kappa: 0.4 };
        let a = spin_berry_phase(&p, 1, 256).unwrap();
        let b = spin_berry_phase(&p, 1, 512).unwrap();
        assert!(wrap_phase(a.geometric - b.geometric).abs() < 1e-6);
    }
}
