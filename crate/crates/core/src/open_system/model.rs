use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem};
use crate::scalar::Real;

/// Tolerance for the Hermiticity and locality checks, relative to max(1, ‖M‖).
pub const STRUCTURE_TOL: f64 = 1e-12;

/// What a jump operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Local(Subsystem),
    Global,
}

pub type MatrixFn<T, X> = Box<dyn Fn(&X) -> ComplexMatrix<T> + Send + Sync>;

pub struct JumpOperator<T, X> {
    pub label: String,
    pub target: Target,
    op: MatrixFn<T, X>,
}

/// Hermitian Hamiltonian H(X) plus jump operators Γ_k(X) on a bipartite space.
pub struct LindbladModel<T, X> {
    dim_a: usize,
    dim_b: usize,
    hamiltonian: MatrixFn<T, X>,
    jumps: Vec<JumpOperator<T, X>>,
}

impl<T: Real, X> LindbladModel<T, X> {
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        hamiltonian: impl Fn(&X) -> ComplexMatrix<T> + Send + Sync + 'static,
    ) -> Self {
        Self { dim_a, dim_b, hamiltonian: Box::new(hamiltonian), jumps: Vec::new() }
    }

    pub fn with_jump(
        mut self,
        label: impl Into<String>,
        target: Target,
        op: impl Fn(&X) -> ComplexMatrix<T> + Send + Sync + 'static,
    ) -> Self {
        self.jumps.push(JumpOperator { label: label.into(), target, op: Box::new(op) });
        self
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn jumps(&self) -> &[JumpOperator<T, X>] {
        &self.jumps
    }

    /// H(X), checked for shape, finiteness and Hermiticity.
    pub fn hamiltonian(&self, x: &X) -> Result<ComplexMatrix<T>> {
        let h = (self.hamiltonian)(x);
        self.check_shape(&h, "hamiltonian")?;
        let tol = T::lit(STRUCTURE_TOL) * h.max_abs().max(T::one());
        if !h.is_hermitian(tol) {
            return Err(Error::InvalidModel(format!(
                "hamiltonian not Hermitian (defect {:.3e})",
                h.hermiticity_defect().to_f64_lossy()
            )));
        }
        Ok(h)
    }

    /// Γ_k(X) for every jump operator, checked against its declared target.
    pub fn jump_operators(&self, x: &X) -> Result<Vec<ComplexMatrix<T>>> {
        self.jumps
            .iter()
            .map(|j| {
                let g = (j.op)(x);
                self.check_shape(&g, "jump operator")?;
                if let Target::Local(side) = j.target {
                    let local = local_factor(&g, self.dims(), side)?;
                    let rebuilt = embed(&local, self.dims(), side);
                    let tol = T::lit(STRUCTURE_TOL) * g.max_abs().max(T::one());
                    if rebuilt.max_diff(&g) > tol {
                        return Err(Error::InvalidModel(format!(
                            "jump operator '{}' does not act on subsystem {:?} alone",
                            j.label, side
                        )));
                    }
                }
                Ok(g)
            })
            .collect()
    }

    /// H̃ = H − (i/2) Σ_k Γ_k†Γ_k.
    pub fn effective_hamiltonian(&self, x: &X) -> Result<ComplexMatrix<T>> {
        let h = self.hamiltonian(x)?;
        let jumps = self.jump_operators(x)?;
        Ok(effective_from_parts(&h, &jumps))
    }

    /// H̃ without the Hermiticity and locality checks, for inner loops over
    /// points where the model has already been validated.
    pub fn effective_hamiltonian_unchecked(&self, x: &X) -> ComplexMatrix<T> {
        let jumps: Vec<_> = self.jumps.iter().map(|j| (j.op)(x)).collect();
        effective_from_parts(&(self.hamiltonian)(x), &jumps)
    }

    pub fn hamiltonian_unchecked(&self, x: &X) -> ComplexMatrix<T> {
        (self.hamiltonian)(x)
    }

    pub fn jump_operators_unchecked(&self, x: &X) -> Vec<ComplexMatrix<T>> {
        self.jumps.iter().map(|j| (j.op)(x)).collect()
    }

    fn check_shape(&self, m: &ComplexMatrix<T>, what: &'static str) -> Result<()> {
        let n = m.check_square()?;
        if n != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: n });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite(what));
        }
        Ok(())
    }
}

pub fn effective_from_parts<T: Real>(h: &ComplexMatrix<T>, jumps: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let n = h.rows();
    let mut decay = ComplexMatrix::zeros(n, n);
    for g in jumps {
        decay = &decay + &(&g.adjoint() * g);
    }
    h - &decay.scale(Complex::new(T::zero(), T::lit(0.5)))
}

/// `op ⊗ 1` (side A) or `1 ⊗ op` (side B).
pub fn embed<T: Real>(op: &ComplexMatrix<T>, dims: (usize, usize), side: Subsystem) -> ComplexMatrix<T> {
    match side {
        Subsystem::A => op.kron(&ComplexMatrix::identity(dims.1)),
        Subsystem::B => ComplexMatrix::identity(dims.0).kron(op),
    }
}

/// Reads the local factor out of an operator assumed to be `op ⊗ 1` or
/// `1 ⊗ op`. No structure check; compare against [`embed`] for that.
pub fn local_factor<T: Real>(
    g: &ComplexMatrix<T>,
    dims: (usize, usize),
    side: Subsystem,
) -> Result<ComplexMatrix<T>> {
    let (da, db) = dims;
    if g.rows() != da * db || g.cols() != da * db {
        return Err(Error::DimensionMismatch { expected: da * db, found: g.rows() });
    }
    Ok(match side {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| g[(i * db, j * db)]),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| g[(i, j)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    type M = ComplexMatrix<f64>;

    fn sigma_minus() -> M {
        // basis (|e>, |g>): σ⁻ = |g><e|
        M::from_fn(2, 2, |i, j| if i == 1 && j == 0 { Complex::new(1.0, 0.0) } else { Complex::zero() })
    }

    #[test]
    fn no_jumps_leaves_hamiltonian_unchanged() {
        let h = M::from_fn(4, 4, |i, j| Complex::new((i + j) as f64, 0.0));
        let model = LindbladModel::new(2, 2, move |_: &()| h.clone());
        let eff = model.effective_hamiltonian(&()).unwrap();
        assert_eq!(eff, model.hamiltonian(&()).unwrap());
    }

    #[test]
    fn single_decay_gives_imaginary_excited_energy() {
        let kappa: f64 = 0.7;
        let model = LindbladModel::new(2, 1, |_: &()| M::zeros(2, 2))
            .with_jump("decay", Target::Local(Subsystem::A), move |_| sigma_minus().scale_real(kappa.sqrt()));
        let eff = model.effective_hamiltonian(&()).unwrap();
        let expected = M::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 { Complex::new(0.0, -kappa / 2.0) } else { Complex::zero() }
        });
        assert!(eff.max_diff(&expected) < 1e-15);
    }

    #[test]
    fn anti_hermitian_part_is_the_decay_term() {
        let h = M::from_fn(4, 4, |i, j| Complex::new((i * j) as f64, i as f64 - j as f64));
        let model = LindbladModel::new(2, 2, move |_: &()| h.clone())
            .with_jump("a", Target::Local(Subsystem::A), |_| embed(&sigma_minus(), (2, 2), Subsystem::A))
            .with_jump("b", Target::Local(Subsystem::B), |_| embed(&sigma_minus(), (2, 2), Subsystem::B));
        let eff = model.effective_hamiltonian(&()).unwrap();
        let gs = model.jump_operators(&()).unwrap();
        let mut decay = M::zeros(4, 4);
        for g in &gs {
            decay = &decay + &(&g.adjoint() * g);
        }
        let expected = decay.scale(Complex::new(0.0, -0.5));
        assert!(eff.anti_hermitian_part().max_diff(&expected) < 1e-15);
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        let model = LindbladModel::new(1, 2, |_: &()| sigma_minus());
        assert!(matches!(model.hamiltonian(&()), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn mislabelled_jump_is_rejected() {
        let model = LindbladModel::new(2, 2, |_: &()| M::zeros(4, 4))
            .with_jump("wrong", Target::Local(Subsystem::A), |_| embed(&sigma_minus(), (2, 2), Subsystem::B));
        assert!(matches!(model.jump_operators(&()), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn local_factor_inverts_embed() {
        let op = M::from_fn(2, 2, |i, j| Complex::new(i as f64, j as f64 + 1.0));
        for side in [Subsystem::A, Subsystem::B] {
            let g = embed(&op, (2, 2), side);
            assert_eq!(local_factor(&g, (2, 2), side).unwrap(), op);
        }
    }
}
