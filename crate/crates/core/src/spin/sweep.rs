use rayon::prelude::*;

use super::params::ModelParams;
use super::phases::spin_berry_phase;
use crate::error::{Error, Result};
use crate::phase::PhaseReport;
use crate::scalar::{wrap_phase, Real};

/// One grid point of a (θ, κ) Berry phase sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub theta: T,
    pub kappa: T,
    pub g: T,
    pub branch: usize,
    pub result: Result<PhaseReport<T>>,
}

/// φ-loop Berry phase over every (θ, κ) pair, θ outer and κ inner.
///
/// Grid points run in parallel on the current rayon pool; row order does not
/// depend on scheduling.
pub fn berry_sweep<T: Real>(theta_grid: &[T], kappa_grid: &[T], g: T, branch: usize, points: usize) -> Vec<SweepRow<T>> {
    let nk = kappa_grid.len();
    (0..theta_grid.len() * nk)
        .into_par_iter()
        .map(|idx| {
            let (theta, kappa) = (theta_grid[idx / nk], kappa_grid[idx % nk]);
            let result = ModelParams::new(theta, T::zero(), g, kappa).and_then(|p| spin_berry_phase(&p, branch, points));
            SweepRow { theta, kappa, g, branch, result }
        })
        .collect()
}

/// Settings for the θ = π/2 discontinuity indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscontinuityConfig<T> {
    pub epsilon: T,
    pub threshold: T,
    pub kappa_max: T,
    pub points: usize,
}

impl<T: Real> Default for DiscontinuityConfig<T> {
    fn default() -> Self {
        Self { epsilon: T::lit(1e-3), threshold: T::lit(0.5), kappa_max: T::lit(5.0), points: 1024 }
    }
}

/// `|γ(π/2 + ε) − γ(π/2 − ε)|` with the difference reduced to (−π, π].
pub fn discontinuity_indicator<T: Real>(g: T, branch: usize, kappa: T, cfg: &DiscontinuityConfig<T>) -> Result<T> {
    let half_pi = T::FRAC_PI_2();
    let at = |theta: T| -> Result<T> {
        let p = ModelParams::new(theta, T::zero(), g, kappa)?;
        Ok(spin_berry_phase(&p, branch, cfg.points)?.geometric)
    };
    let (hi, lo) = rayon::join(|| at(half_pi + cfg.epsilon), || at(half_pi - cfg.epsilon));
    Ok(wrap_phase(hi? - lo?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalKappa<T> {
    pub kappa0: T,
    pub bracket: (T, T),
    pub evaluations: usize,
}

/// Smallest κ at which the indicator crosses the threshold, by bisection on
/// [0, κ_max]; returns the bracket midpoint once narrower than `tol`.
pub fn critical_kappa<T: Real>(g: T, branch: usize, tol: T, cfg: &DiscontinuityConfig<T>) -> Result<CriticalKappa<T>> {
    if !(g > T::zero()) || !(tol > T::zero()) {
        return Err(Error::InvalidParameter("critical_kappa needs g > 0 and tol > 0".into()));
    }
    let above = |kappa: T| -> Result<bool> { Ok(discontinuity_indicator(g, branch, kappa, cfg)? > cfg.threshold) };
    let mut evaluations = 2;
    if above(T::zero())? || !above(cfg.kappa_max)? {
        return Err(Error::NoTransition { kappa_max: cfg.kappa_max.to_f64_lossy() });
    }
    let (mut lo, mut hi) = (T::zero(), cfg.kappa_max);
    while hi - lo >= tol {
        let mid = (lo + hi) * T::lit(0.5);
        evaluations += 1;
        if above(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalKappa { kappa0: (lo + hi) * T::lit(0.5), bracket: (lo, hi), evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_rows_follow_grid_order() {
        let thetas = [0.3, 1.0, 2.0];
        let kappas = [0.0, 0.5];
        let rows = berry_sweep(&thetas, &kappas, 1.0, 1, 64);
        assert_eq!(rows.len(), 6);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!((r.theta, r.kappa), (thetas[i / 2], kappas[i % 2]));
            assert!(r.result.is_ok());
        }
    }

    #[test]
    fn invalid_grid_point_is_reported_in_its_row() {
        let rows = berry_sweep(&[1.0], &[-1.0, 0.2], 1.0, 1, 64);
        assert!(matches!(rows[0].result, Err(Error::InvalidParameter(_))));
        assert!(rows[1].result.is_ok());
    }

    #[test]
    fn branch_three_jumps_past_the_exceptional_point() {
        let cfg = DiscontinuityConfig { points: 256, ..Default::default() };
        assert!(discontinuity_indicator(1.0, 3, 0.01, &cfg).unwrap() < 0.05);
        assert!(discontinuity_indicator(1.0, 3, 1.5, &cfg).unwrap() > 0.5);
    }
}
