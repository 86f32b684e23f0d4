//! The two-stage coordination strategy and the cyclic schedule it leads to.
//!
//! Everything here is a pure function of the public transcript plus, for the
//! per-agent parts, the agent's own choices and draws.

mod agent;
mod cyclic;
mod stage_one;
mod stage_two;
mod state;

pub use agent::{Agent, Knowledge, Membership};
pub use cyclic::{cyclic_attendance_a, cyclic_choice};
pub use stage_one::{stage_one_decision, StageOneState};
pub use stage_two::{
    infer_split, split_resolution, stage_two_decision, PendingSet, Resolved, SplitOutcome, StageTwoState,
};
pub use state::{replay_protocol_state, Phase, ProtocolState, Transition};
