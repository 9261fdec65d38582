//! Ensemble-level maps used to validate the trajectory unraveling.

use num_complex::Complex;

use super::model::{effective_from_parts, LindbladModel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// One step of the discrete unraveling: `Σ_k w_k ρ w_k†` with
/// `w_0 = 1 − i H̃ dt` and `w_k = Γ_k √dt`.
pub fn discrete_step_map<T: Real, X>(
    rho: &ComplexMatrix<T>,
    model: &LindbladModel<T, X>,
    x: &X,
    dt: T,
) -> Result<ComplexMatrix<T>> {
    if !(dt > T::zero()) {
        return Err(Error::InvalidParameter("dt must be positive".into()));
    }
    let h_eff = model.effective_hamiltonian(x)?;
    let jumps = model.jump_operators(x)?;
    check_rho(rho, model.dim())?;
    let n = model.dim();
    let w0 = &ComplexMatrix::identity(n) - &h_eff.scale(Complex::new(T::zero(), dt));
    let mut out = &(&w0 * rho) * &w0.adjoint();
    for g in &jumps {
        out = &out + &(&(g * rho) * &g.adjoint()).scale_real(dt);
    }
    // the sum is Hermitian in exact arithmetic; remove round-off asymmetry
    Ok(out.hermitian_part())
}

/// Right-hand side of the master equation,
/// `−i[H, ρ] + Σ_k (Γ_k ρ Γ_k† − ½{Γ_k†Γ_k, ρ})`.
pub fn lindblad_rhs<T: Real, X>(rho: &ComplexMatrix<T>, model: &LindbladModel<T, X>, x: &X) -> Result<ComplexMatrix<T>> {
    let h = model.hamiltonian(x)?;
    let jumps = model.jump_operators(x)?;
    check_rho(rho, model.dim())?;
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut out = (&(&h * rho) - &(rho * &h)).scale(minus_i);
    let half = T::lit(0.5);
    for g in &jumps {
        let gdg = &g.adjoint() * g;
        let anti = &(&gdg * rho) + &(rho * &gdg);
        out = &(&out + &(&(g * rho) * &g.adjoint())) - &anti.scale_real(half);
    }
    Ok(out)
}

/// `ρ̇ = −i(H̃ρ − ρH̃†) + Σ_k Γ_k ρ Γ_k†`, the same generator written through H̃.
pub fn lindblad_rhs_effective<T: Real>(
    rho: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    jumps: &[ComplexMatrix<T>],
) -> ComplexMatrix<T> {
    let h_eff = effective_from_parts(h, jumps);
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut out = (&(&h_eff * rho) - &(rho * &h_eff.adjoint())).scale(minus_i);
    for g in jumps {
        out = &out + &(&(g * rho) * &g.adjoint());
    }
    out
}

fn check_rho<T: Real>(rho: &ComplexMatrix<T>, dim: usize) -> Result<()> {
    let n = rho.check_square()?;
    if n != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: n });
    }
    if !rho.is_finite() {
        return Err(Error::NonFinite("density matrix"));
    }
    Ok(())
}

/// Integrates the master equation with fixed-step RK4 on the matrix ODE.
pub fn integrate_master_equation<T: Real, X>(
    rho0: &ComplexMatrix<T>,
    model: &LindbladModel<T, X>,
    x: &X,
    duration: T,
    steps: usize,
) -> Result<ComplexMatrix<T>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let h = model.hamiltonian(x)?;
    let jumps = model.jump_operators(x)?;
    check_rho(rho0, model.dim())?;
    let dt = duration / T::from_usize(steps).unwrap();
    let half = dt * T::lit(0.5);
    let f = |r: &ComplexMatrix<T>| lindblad_rhs_effective(r, &h, &jumps);
    let mut rho = rho0.clone();
    for _ in 0..steps {
        let k1 = f(&rho);
        let k2 = f(&(&rho + &k1.scale_real(half)));
        let k3 = f(&(&rho + &k2.scale_real(half)));
        let k4 = f(&(&rho + &k3.scale_real(dt)));
        let incr = &(&k1 + &k2.scale_real(T::lit(2.0))) + &(&k3.scale_real(T::lit(2.0)) + &k4);
        rho = &rho + &incr.scale_real(dt / T::lit(6.0));
    }
    Ok(rho)
}

/// Iterates [`discrete_step_map`] `steps` times with step `dt`.
pub fn iterate_step_map<T: Real, X>(
    rho0: &ComplexMatrix<T>,
    model: &LindbladModel<T, X>,
    x: &X,
    dt: T,
    steps: usize,
) -> Result<ComplexMatrix<T>> {
    let mut rho = rho0.clone();
    for _ in 0..steps {
        rho = discrete_step_map(&rho, model, x, dt)?;
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subsystem;
    use crate::open_system::model::{embed, Target};
    use num_traits::Zero;

    type M = ComplexMatrix<f64>;

    fn sigma_minus() -> M {
        M::from_fn(2, 2, |i, j| if i == 1 && j == 0 { Complex::new(1.0, 0.0) } else { Complex::zero() })
    }

    fn toy_model() -> LindbladModel<f64, ()> {
        let h = M::from_fn(4, 4, |i, j| Complex::new(0.3 * (i + j) as f64, 0.2 * (i as f64 - j as f64)));
        LindbladModel::new(2, 2, move |_| h.clone())
            .with_jump("decay", Target::Local(Subsystem::A), |_| embed(&sigma_minus(), (2, 2), Subsystem::A).scale_real(0.6))
    }

    fn mixed_state() -> M {
        let v = [Complex::new(0.5, 0.1), Complex::new(0.2, -0.3), Complex::new(0.4, 0.0), Complex::new(-0.1, 0.6)];
        let p = M::outer(&v, &v);
        let q = M::identity(4).scale_real(0.1);
        let r = &p + &q;
        let tr = r.trace().re;
        r.scale_real(1.0 / tr)
    }

    #[test]
    fn trivial_model_leaves_rho_unchanged() {
        let model = LindbladModel::new(2, 2, |_: &()| M::zeros(4, 4));
        let rho = mixed_state();
        assert_eq!(discrete_step_map(&rho, &model, &(), 1e-2).unwrap(), rho);
    }

    #[test]
    fn trace_defect_is_second_order() {
        let model = toy_model();
        let rho = mixed_state();
        let defect = |dt: f64| (discrete_step_map(&rho, &model, &(), dt).unwrap().trace().re - 1.0).abs();
        let ratio = defect(1e-2) / defect(5e-3);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn difference_quotient_tends_to_generator() {
        let model = toy_model();
        let rho = mixed_state();
        let rhs = lindblad_rhs(&rho, &model, &()).unwrap();
        let err = |dt: f64| {
            let step = discrete_step_map(&rho, &model, &(), dt).unwrap();
            (&step - &rho).scale_real(1.0 / dt).max_diff(&rhs)
        };
        assert!(err(1e-4) < 1e-3);
        assert!(err(1e-5) < err(1e-4) / 5.0);
    }

    #[test]
    fn generator_forms_agree() {
        let model = toy_model();
        let rho = mixed_state();
        let h = model.hamiltonian(&()).unwrap();
        let jumps = model.jump_operators(&()).unwrap();
        let a = lindblad_rhs(&rho, &model, &()).unwrap();
        let b = lindblad_rhs_effective(&rho, &h, &jumps);
        assert!(a.max_diff(&b) < 1e-14);
    }

    #[test]
    fn step_map_output_is_hermitian() {
        let model = toy_model();
        let out = discrete_step_map(&mixed_state(), &model, &(), 1e-3).unwrap();
        assert_eq!(out.hermiticity_defect(), 0.0);
    }
}
