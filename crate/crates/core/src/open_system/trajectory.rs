use num_complex::Complex;
use rand::Rng;

use super::model::LindbladModel;
use super::propagate::rk4_step;
use crate::error::{Error, Result};
use crate::linalg::{vector, BipartiteState};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent<T> {
    pub time: T,
    /// Index into the model's jump operator list.
    pub operator: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub jump_events: Vec<JumpEvent<T>>,
    pub duration: T,
    /// Integrator steps actually taken (partial steps to jump times included).
    pub steps: usize,
    pub final_state: BipartiteState<T>,
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Samples one quantum-jump trajectory over `[0, duration]` with a nominal
/// grid of `steps` RK4 steps. Jump times come from the no-jump survival
/// probability; the operator is chosen with probability ∝ ‖Γ_k ψ‖².
pub fn simulate_trajectory<T, X, P, R>(
    model: &LindbladModel<T, X>,
    path: P,
    psi0: &BipartiteState<T>,
    duration: T,
    steps: usize,
    rng: &mut R,
) -> Result<TrajectoryRecord<T>>
where
    T: Real,
    P: Fn(T) -> X,
    R: Rng + ?Sized,
{
    if steps == 0 || !(duration > T::zero()) {
        return Err(Error::InvalidParameter("need steps >= 1 and a positive duration".into()));
    }
    model.effective_hamiltonian(&path(T::zero()))?;
    model.effective_hamiltonian(&path(duration))?;
    let h_eff = |t: T| model.effective_hamiltonian_unchecked(&path(t));

    let dt_nominal = duration / T::from_usize(steps).unwrap();
    let mut psi = psi0.normalized().into_amplitudes();
    let mut t = T::zero();
    let mut u = T::lit(open_unit(rng));
    let mut events = Vec::new();
    let mut taken = 0usize;
    // stop once the remaining interval is below round-off of the grid
    let tiny = dt_nominal * T::lit(1e-9);

    while duration - t > tiny {
        let dt = dt_nominal.min(duration - t);
        let next = rk4_step(&h_eff, &psi, t, dt)?;
        taken += 1;
        let (n_now, n_next) = (vector::norm_sqr(&psi), vector::norm_sqr(&next));
        if n_next > u {
            psi = next;
            t = t + dt;
            continue;
        }
        let frac = if n_now <= u || n_now == n_next {
            T::zero()
        } else {
            ((n_now.ln() - u.ln()) / (n_now.ln() - n_next.ln())).max(T::zero()).min(T::one())
        };
        let t_jump = t + frac * dt;
        let at_jump = if frac > T::zero() { rk4_step(&h_eff, &psi, t, frac * dt)? } else { psi.clone() };

        let gammas = model.jump_operators_unchecked(&path(t_jump));
        let outcomes: Vec<Vec<Complex<T>>> = gammas.iter().map(|g| g.matvec(&at_jump)).collect();
        let weights: Vec<T> = outcomes.iter().map(|v| vector::norm_sqr(v)).collect();
        let total = weights.iter().fold(T::zero(), |a, w| a + *w);
        if !(total > T::zero()) {
            return Err(Error::AnnihilatedState);
        }
        let mut r = T::lit(open_unit(rng)) * total;
        let mut chosen = weights.len() - 1;
        for (k, w) in weights.iter().enumerate() {
            if r < *w {
                chosen = k;
                break;
            }
            r = r - *w;
        }
        psi = vector::normalized(&outcomes[chosen]).ok_or(Error::AnnihilatedState)?;
        events.push(JumpEvent { time: t_jump, operator: chosen });
        t = t_jump;
        u = T::lit(open_unit(rng));
    }

    let final_state = psi0.with_amplitudes(psi)?.normalized();
    Ok(TrajectoryRecord { jump_events: events, duration, steps: taken, final_state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, Subsystem};
    use crate::open_system::model::{embed, Target};
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn decay_model(kappa: f64) -> LindbladModel<f64, f64> {
        let sm = M::from_fn(2, 2, |i, j| if i == 1 && j == 0 { Complex::new(1.0, 0.0) } else { Complex::zero() });
        let h = M::from_fn(4, 4, |i, j| if i == j { Complex::new(if i < 2 { 0.5 } else { -0.5 }, 0.0) } else { Complex::zero() });
        LindbladModel::new(2, 2, move |_: &f64| h.clone()).with_jump("decay", Target::Local(Subsystem::A), move |_| {
            embed(&sm, (2, 2), Subsystem::A).scale_real(kappa.sqrt())
        })
    }

    fn excited() -> BipartiteState<f64> {
        let e = [Complex::new(1.0, 0.0), Complex::zero()];
        let g = [Complex::zero(), Complex::new(1.0, 0.0)];
        BipartiteState::product(&e, &g).unwrap()
    }

    #[test]
    fn excited_state_decays_exactly_once() {
        let model = decay_model(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rec = simulate_trajectory(&model, |t| t, &excited(), 50.0, 20_000, &mut rng).unwrap();
        assert_eq!(rec.jump_events.len(), 1);
        let gg = rec.final_state.amplitudes()[3].norm();
        assert!((gg - 1.0).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_trajectory() {
        let model = decay_model(0.4);
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            simulate_trajectory(&model, |t| t, &excited(), 5.0, 2000, &mut rng).unwrap()
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn jump_times_lie_in_range() {
        let model = decay_model(2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let rec = simulate_trajectory(&model, |t| t, &excited(), 3.0, 600, &mut rng).unwrap();
            let times: Vec<f64> = rec.jump_events.iter().map(|e| e.time).collect();
            assert!(times.windows(2).all(|w| w[0] < w[1]));
            assert!(times.iter().all(|t| (0.0..=3.0).contains(t)));
        }
    }
}
