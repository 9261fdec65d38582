//! Fixed-step RK4 integration of `i dψ/dt = H̃(t) ψ`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{vector, BipartiteState, ComplexMatrix};
use crate::scalar::Real;

/// Largest tolerated local error estimate `(‖H̃‖ dt)^5 / 120` per step.
pub const LOCAL_ERROR_LIMIT: f64 = 1e-6;

/// Derivative `-i H ψ`.
fn rhs<T: Real>(h: &ComplexMatrix<T>, psi: &[Complex<T>]) -> Vec<Complex<T>> {
    let minus_i = Complex::new(T::zero(), -T::one());
    h.matvec(psi).into_iter().map(|z| z * minus_i).collect()
}

/// Local truncation estimate for one RK4 step of size `dt` under `h`.
pub fn local_error_estimate<T: Real>(h: &ComplexMatrix<T>, dt: T) -> T {
    (h.frobenius_norm() * dt.abs()).powi(5) / T::lit(120.0)
}

/// One classical RK4 step from `t` to `t + dt`.
///
/// Errors with `StepUnderflow` if the local error estimate at the step start
/// exceeds [`LOCAL_ERROR_LIMIT`].
pub fn rk4_step<T, F>(h_eff: &F, psi: &[Complex<T>], t: T, dt: T) -> Result<Vec<Complex<T>>>
where
    T: Real,
    F: Fn(T) -> ComplexMatrix<T>,
{
    let half = T::lit(0.5);
    let h0 = h_eff(t);
    let estimate = local_error_estimate(&h0, dt);
    if estimate > T::lit(LOCAL_ERROR_LIMIT) {
        return Err(Error::StepUnderflow { estimate: estimate.to_f64_lossy() });
    }
    let hm = h_eff(t + half * dt);
    let h1 = h_eff(t + dt);
    let dtc = Complex::new(dt, T::zero());
    let halfc = Complex::new(half * dt, T::zero());

    let k1 = rhs(&h0, psi);
    let k2 = rhs(&hm, &vector::axpy(psi, halfc, &k1));
    let k3 = rhs(&hm, &vector::axpy(psi, halfc, &k2));
    let k4 = rhs(&h1, &vector::axpy(psi, dtc, &k3));
    let sixth = Complex::new(dt / T::lit(6.0), T::zero());
    let two = Complex::new(T::lit(2.0), T::zero());
    Ok(psi
        .iter()
        .enumerate()
        .map(|(i, p)| *p + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect())
}

/// Integrates over `[t0, t1]` in `steps` equal steps, calling `visit(k, t_k, ψ_k)`
/// at every grid point including both ends.
pub fn propagate_with<T, F, V>(
    h_eff: F,
    psi0: &BipartiteState<T>,
    t0: T,
    t1: T,
    steps: usize,
    mut visit: V,
) -> Result<BipartiteState<T>>
where
    T: Real,
    F: Fn(T) -> ComplexMatrix<T>,
    V: FnMut(usize, T, &[Complex<T>]),
{
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if !(t1 > t0) {
        return Err(Error::InvalidParameter("t1 must exceed t0".into()));
    }
    let dt = (t1 - t0) / T::from_usize(steps).unwrap();
    let mut psi = psi0.amplitudes().to_vec();
    visit(0, t0, &psi);
    for k in 0..steps {
        let t = t0 + dt * T::from_usize(k).unwrap();
        psi = rk4_step(&h_eff, &psi, t, dt)?;
        visit(k + 1, t0 + dt * T::from_usize(k + 1).unwrap(), &psi);
    }
    psi0.with_amplitudes(psi)
}

/// Unnormalized no-jump state at `t1`.
pub fn propagate_nojump<T, F>(h_eff: F, psi0: &BipartiteState<T>, t0: T, t1: T, steps: usize) -> Result<BipartiteState<T>>
where
    T: Real,
    F: Fn(T) -> ComplexMatrix<T>,
{
    propagate_with(h_eff, psi0, t0, t1, steps, |_, _, _| {})
}

/// Squared norm of the no-jump state sampled on the integrator grid. This is
/// the probability that no jump has happened by time t.
#[derive(Debug, Clone, PartialEq)]
pub struct NormCurve<T> {
    pub times: Vec<T>,
    pub norm_sqr: Vec<T>,
}

impl<T: Real> NormCurve<T> {
    pub fn compute<F>(h_eff: F, psi0: &BipartiteState<T>, t0: T, t1: T, steps: usize) -> Result<Self>
    where
        F: Fn(T) -> ComplexMatrix<T>,
    {
        let mut times = Vec::with_capacity(steps + 1);
        let mut norm_sqr = Vec::with_capacity(steps + 1);
        let n0 = psi0.norm_sqr();
        propagate_with(h_eff, psi0, t0, t1, steps, |_, t, psi| {
            times.push(t);
            norm_sqr.push(vector::norm_sqr(psi) / n0);
        })?;
        Ok(Self { times, norm_sqr })
    }

    /// First time at which the survival probability drops to `u`, or `None`
    /// if it stays above `u` over the whole interval.
    ///
    /// Bisection over grid points (the curve is non-increasing), then linear
    /// interpolation of ln‖ψ‖² inside the bracketing step, which is exact for
    /// a pure exponential decay.
    pub fn first_crossing(&self, u: T) -> Option<T> {
        let last = self.norm_sqr.len() - 1;
        if self.norm_sqr[last] > u {
            return None;
        }
        if self.norm_sqr[0] <= u {
            return Some(self.times[0]);
        }
        let (mut lo, mut hi) = (0, last);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.norm_sqr[mid] > u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (ya, yb) = (self.norm_sqr[lo].ln(), self.norm_sqr[hi].ln());
        let (ta, tb) = (self.times[lo], self.times[hi]);
        let frac = if ya == yb { T::one() } else { (ya - u.ln()) / (ya - yb) };
        Some(ta + frac.max(T::zero()).min(T::one()) * (tb - ta))
    }

    /// Jump-time CDF `1 - ‖ψ(t)‖²` at grid point `k`.
    pub fn cdf_at(&self, k: usize) -> T {
        T::one() - self.norm_sqr[k]
    }
}

/// Waiting time to the first jump for a uniform draw `u ∈ (0, 1)`; `None`
/// means no jump within `[0, duration]`.
pub fn sample_jump_time<T, F>(h_eff: F, psi0: &BipartiteState<T>, duration: T, u: T, steps: usize) -> Result<Option<T>>
where
    T: Real,
    F: Fn(T) -> ComplexMatrix<T>,
{
    if !(u > T::zero() && u < T::one()) {
        return Err(Error::InvalidParameter("uniform draw must lie in (0, 1)".into()));
    }
    let curve = NormCurve::compute(h_eff, psi0, T::zero(), duration, steps)?;
    Ok(curve.first_crossing(u))
}
