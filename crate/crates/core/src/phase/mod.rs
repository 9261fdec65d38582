//! Phase functionals: no-jump phases, loop holonomies, subsystem splits and
//! jump phases.

pub mod holonomy;
pub mod jump;
pub mod nojump;
pub mod report;
pub mod split;

pub use holonomy::{adiabatic_berry_phase, holonomy_from_frames, track_branch, wilson_loop_product, Frame, TrackedBranch};
pub use jump::{jump_phase_subsystem, jump_phase_total};
pub use nojump::nojump_geometric_phase;
pub use report::{LoopPath, PhaseReport};
pub use split::{subsystem_phase_split, SplitTerm, SubsystemPhaseSplit};
