//! Two coupled spins: spin a driven by a rotating field and decaying,
//! spin b coupled through g(σ⁺σ⁺ + σ⁻σ⁻).

pub mod analytic;
pub mod hamiltonian;
pub mod params;
pub mod phases;
pub mod sweep;

pub use analytic::{analytic_eigensystem, energies, AnalyticBranch, CoefficientPath, Coefficients};
pub use hamiltonian::{a_spin_hamiltonian, effective_hamiltonian, hamiltonian, sigma_minus, sigma_plus, spin_model};
pub use params::ModelParams;
pub use phases::{
    branch_state, model_jump_phase, model_jump_phase_reduced, model_jump_terms, phi_loop, spin_berry_phase,
    spin_phase_split, unit_decay, DEFAULT_LOOP_POINTS,
};
pub use sweep::{berry_sweep, critical_kappa, discontinuity_indicator, CriticalKappa, DiscontinuityConfig, SweepRow};
