use crate::error::{Error, Result};
use crate::linalg::{vector, BipartiteState, ComplexMatrix};
use crate::scalar::Real;

/// Below this relative size `Γψ` counts as annihilated.
pub const ANNIHILATION_TOL: f64 = 1e-14;

/// Applies an instantaneous jump. Returns the unnormalized `Γ|ψ>` and the
/// relative weight `‖Γψ‖² / ‖ψ‖²`.
pub fn apply_jump<T: Real>(psi: &BipartiteState<T>, gamma: &ComplexMatrix<T>) -> Result<(BipartiteState<T>, T)> {
    let n = gamma.check_square()?;
    if n != psi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: n });
    }
    let out = gamma.matvec(psi.amplitudes());
    let out_norm = vector::norm(&out);
    if out_norm <= T::lit(ANNIHILATION_TOL) * gamma.frobenius_norm() * psi.norm() {
        return Err(Error::AnnihilatedState);
    }
    let weight = out_norm * out_norm / psi.norm_sqr();
    Ok((psi.with_amplitudes(out)?, weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use num_traits::Zero;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sigma_minus_a() -> ComplexMatrix<f64> {
        // |e·> -> |g·> in the basis (ee, eg, ge, gg)
        ComplexMatrix::from_fn(4, 4, |i, j| if i == j + 2 { c(1.0, 0.0) } else { Complex::zero() })
    }

    #[test]
    fn identity_jump_is_trivial() {
        let psi = BipartiteState::new(2, 2, vec![c(0.3, 0.1), c(0.0, 0.5), c(0.2, 0.0), c(0.1, -0.4)]).unwrap();
        let (out, w) = apply_jump(&psi, &ComplexMatrix::identity(4)).unwrap();
        assert_eq!(out, psi);
        assert!((w - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ground_state_is_annihilated() {
        let gg = BipartiteState::new(2, 2, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(apply_jump(&gg, &sigma_minus_a()), Err(Error::AnnihilatedState));
    }

    #[test]
    fn superposition_loses_half_weight() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = BipartiteState::new(2, 2, vec![c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
        let (out, w) = apply_jump(&psi, &sigma_minus_a()).unwrap();
        assert!((w - 0.5).abs() < 1e-15);
        let expected = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        assert!(vector::max_abs(&vector::sub(out.amplitudes(), &expected)) < 1e-15);
    }

    #[test]
    fn weight_ignores_phase_and_scale() {
        let psi = BipartiteState::new(2, 2, vec![c(0.3, 0.1), c(0.0, 0.5), c(0.2, 0.0), c(0.1, -0.4)]).unwrap();
        let (_, w0) = apply_jump(&psi, &sigma_minus_a()).unwrap();
        let (_, w1) = apply_jump(&psi.scaled(c(-1.7, 2.2)).unwrap(), &sigma_minus_a()).unwrap();
        assert!((w0 - w1).abs() < 1e-14);
    }
}
