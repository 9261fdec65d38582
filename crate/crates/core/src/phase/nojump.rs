use num_complex::Complex;

use super::report::PhaseReport;
use crate::error::{Error, Result};
use crate::linalg::{vector, BipartiteState};
use crate::open_system::propagate::rk4_step;
use crate::open_system::LindbladModel;
use crate::scalar::{arg, wrap_phase, Real};

/// Relative size of `<ψ(0)|ψ(T)>` below which the total phase is undefined.
pub const MIN_FINAL_OVERLAP: f64 = 1e-12;

/// Geometric phase of the no-jump trajectory along `path(t)`, t ∈ [0, duration].
///
/// The dynamical part is the trapezoidal integral of `<ψ|H|ψ>/<ψ|ψ>` on the
/// integrator grid; the total part is `arg<ψ(0)|ψ(T)>`. The state is
/// renormalized after every step, which leaves all phases untouched and
/// keeps long damped runs away from underflow.
pub fn nojump_geometric_phase<T, X, P>(
    model: &LindbladModel<T, X>,
    path: P,
    psi0: &BipartiteState<T>,
    duration: T,
    steps: usize,
) -> Result<PhaseReport<T>>
where
    T: Real,
    P: Fn(T) -> X,
{
    if steps == 0 || !(duration > T::zero()) {
        return Err(Error::InvalidParameter("need steps >= 1 and a positive duration".into()));
    }
    if psi0.dims() != model.dims() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: psi0.dim() });
    }
    model.effective_hamiltonian(&path(T::zero()))?;
    model.effective_hamiltonian(&path(duration))?;
    let h_eff = |t: T| model.effective_hamiltonian_unchecked(&path(t));
    let energy = |t: T, psi: &[Complex<T>]| {
        let h = model.hamiltonian_unchecked(&path(t));
        vector::inner(psi, &h.matvec(psi)).re / vector::norm_sqr(psi)
    };

    let dt = duration / T::from_usize(steps).unwrap();
    let half = T::lit(0.5);
    let start = psi0.normalized().into_amplitudes();
    let mut psi = start.clone();
    let mut e_prev = energy(T::zero(), &psi);
    let mut dynamical = T::zero();
    let mut continuous = T::zero();
    for k in 0..steps {
        let t = dt * T::from_usize(k).unwrap();
        let next = rk4_step(&h_eff, &psi, t, dt)?;
        let next = vector::normalized(&next).ok_or(Error::ZeroState)?;
        let e_next = energy(t + dt, &next);
        dynamical = dynamical + half * dt * (e_prev + e_next);
        continuous = continuous + arg(vector::inner(&psi, &next));
        psi = next;
        e_prev = e_next;
    }

    let overlap = vector::inner(&start, &psi);
    if overlap.norm() < T::lit(MIN_FINAL_OVERLAP) {
        return Err(Error::ZeroOverlap);
    }
    let total = arg(overlap);
    let geometric = wrap_phase(dynamical + total);
    // continuous accumulation, corrected so it agrees with `geometric` mod 2π
    let unwrapped = dynamical + continuous + wrap_phase(total - continuous);
    Ok(PhaseReport {
        geometric,
        geometric_unwrapped: unwrapped,
        dynamical: Some(dynamical),
        total: Some(total),
        log_amplitude: None,
        branch: None,
        loop_label: "time".to_string(),
        points: steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use num_traits::Zero;
    use std::f64::consts::PI;

    type M = ComplexMatrix<f64>;

    /// Spin a in a field n̂(θ, φ), spin b idle with a small splitting.
    fn field_model(theta: f64) -> LindbladModel<f64, f64> {
        LindbladModel::new(2, 2, move |phi: &f64| {
            let (s, c) = theta.sin_cos();
            let a = M::from_row_major(
                2,
                2,
                vec![Complex::new(c, 0.0), Complex::from_polar(s, -phi), Complex::from_polar(s, *phi), Complex::new(-c, 0.0)],
            )
            .unwrap();
            a.kron(&M::identity(2))
        })
    }

    fn aligned_state(theta: f64) -> BipartiteState<f64> {
        let up = [Complex::new((theta / 2.0).cos(), 0.0), Complex::new((theta / 2.0).sin(), 0.0)];
        let g = [Complex::zero(), Complex::new(1.0, 0.0)];
        BipartiteState::product(&up, &g).unwrap()
    }

    #[test]
    fn no_evolution_no_phase() {
        let model = field_model(0.7);
        let r = nojump_geometric_phase(&model, |_| 0.0, &aligned_state(0.7), 1e-9, 1).unwrap();
        assert!(r.geometric.abs() < 1e-8);
    }

    #[test]
    fn slow_loop_approaches_solid_angle() {
        let theta = 1.0;
        let model = field_model(theta);
        let expected = -PI * (1.0 - theta.cos());
        let err = |duration: f64| {
            let path = move |t: f64| 2.0 * PI * t / duration;
            let r = nojump_geometric_phase(&model, path, &aligned_state(theta), duration, (duration * 50.0) as usize).unwrap();
            assert!(wrap_phase(r.geometric - r.geometric_unwrapped).abs() < 1e-10);
            wrap_phase(r.geometric - expected).abs()
        };
        // non-adiabatic error falls off like 1/T
        let (e1, e2) = (err(200.0), err(800.0));
        assert!(e2 < e1 / 3.0 && e2 < 2e-2, "{e1} {e2}");
    }
}
