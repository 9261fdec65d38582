//! Lindblad models, no-jump propagation, jumps and the discrete unraveling.

pub mod jump;
pub mod model;
pub mod propagate;
pub mod trajectory;
pub mod unravel;

pub use jump::apply_jump;
pub use model::{embed, local_factor, LindbladModel, Target};
pub use propagate::{propagate_nojump, propagate_with, sample_jump_time, NormCurve};
pub use trajectory::{simulate_trajectory, JumpEvent, TrajectoryRecord};
pub use unravel::{discrete_step_map, integrate_master_equation, iterate_step_map, lindblad_rhs};
