use crate::error::{Error, Result};
use crate::linalg::{vector, BipartiteState, ComplexMatrix};
use crate::scalar::{arg, Real};

/// Relative size below which an expectation value counts as zero.
pub const ZERO_EXPECTATION_TOL: f64 = 1e-14;

/// `arg <ψ|Γ|ψ>`, the phase a jump imprints on the whole system.
pub fn jump_phase_total<T: Real>(psi: &BipartiteState<T>, gamma: &ComplexMatrix<T>) -> Result<T> {
    let n = gamma.check_square()?;
    if n != psi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: n });
    }
    let v = vector::inner(psi.amplitudes(), &gamma.matvec(psi.amplitudes()));
    if v.norm() <= T::lit(ZERO_EXPECTATION_TOL) * gamma.frobenius_norm() * psi.norm_sqr() {
        return Err(Error::ZeroExpectation);
    }
    Ok(arg(v))
}

/// `arg Tr[ρ Γ]` for a (reduced) density operator of one subsystem.
pub fn jump_phase_subsystem<T: Real>(rho: &ComplexMatrix<T>, gamma: &ComplexMatrix<T>) -> Result<T> {
    let n = rho.check_square()?;
    if gamma.check_square()? != n {
        return Err(Error::DimensionMismatch { expected: n, found: gamma.rows() });
    }
    let v = (rho * gamma).trace();
    if v.norm() <= T::lit(ZERO_EXPECTATION_TOL) * rho.frobenius_norm() * gamma.frobenius_norm() {
        return Err(Error::ZeroExpectation);
    }
    Ok(arg(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, Subsystem};
    use crate::open_system::embed;
    use num_complex::Complex;
    use num_traits::Zero;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn sigma_minus() -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(2, 2, |i, j| if i == 1 && j == 0 { Complex::new(1.0, 0.0) } else { Complex::zero() })
    }

    fn state(e: Complex<f64>, g: Complex<f64>) -> BipartiteState<f64> {
        BipartiteState::product(&[e, g], &[Complex::zero(), Complex::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn real_superposition_has_zero_phase() {
        let s = Complex::new(FRAC_1_SQRT_2, 0.0);
        let psi = state(s, s);
        let g = embed(&sigma_minus(), (2, 2), Subsystem::A);
        assert!(jump_phase_total(&psi, &g).unwrap().abs() < 1e-15);
        let rho = ComplexMatrix::outer(&[s, s], &[s, s]);
        assert!(jump_phase_subsystem(&rho, &sigma_minus()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn imaginary_ground_amplitude_gives_minus_half_pi() {
        let psi = state(Complex::new(FRAC_1_SQRT_2, 0.0), Complex::new(0.0, FRAC_1_SQRT_2));
        let g = embed(&sigma_minus(), (2, 2), Subsystem::A);
        assert!((jump_phase_total(&psi, &g).unwrap() + PI / 2.0).abs() < 1e-15);
        let rho = partial_trace(&psi, &psi, Subsystem::A).unwrap();
        assert!((jump_phase_subsystem(&rho, &sigma_minus()).unwrap() + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn excited_state_has_no_jump_phase() {
        let psi = state(Complex::new(1.0, 0.0), Complex::zero());
        let g = embed(&sigma_minus(), (2, 2), Subsystem::A);
        assert_eq!(jump_phase_total(&psi, &g), Err(Error::ZeroExpectation));
    }

    #[test]
    fn maximally_mixed_state_has_no_jump_phase() {
        let rho = ComplexMatrix::<f64>::identity(2).scale_real(0.5);
        assert_eq!(jump_phase_subsystem(&rho, &sigma_minus()), Err(Error::ZeroExpectation));
    }

    #[test]
    fn phase_ignores_global_phase_and_scale() {
        let psi = BipartiteState::new(
            2,
            2,
            vec![Complex::new(0.3, 0.2), Complex::new(-0.1, 0.5), Complex::new(0.4, -0.2), Complex::new(0.1, 0.1)],
        )
        .unwrap();
        let g = embed(&sigma_minus(), (2, 2), Subsystem::A);
        let p0 = jump_phase_total(&psi, &g).unwrap();
        let p1 = jump_phase_total(&psi.scaled(Complex::from_polar(3.5, 1.2)).unwrap(), &g).unwrap();
        assert!((p0 - p1).abs() < 1e-14);
    }
}
