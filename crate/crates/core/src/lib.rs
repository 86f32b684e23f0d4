//! Co-action minority game coordination.
//!
//! `2N + 1` agents who cannot talk to each other reach the perfectly efficient
//! period-`(2N+1)` state using only the public attendance record:
//!
//! * [`protocol`]: stage one (exact `(N, N+1)` split), stage two (recursive
//!   coin-flip ID assignment) and the cyclic schedule, as a replayable state
//!   machine.
//! * [`exact`]: exact expected stage-two times `T_n`, the generating function
//!   and its functional equation, least-squares fits.
//! * [`asymptotics`]: the log-periodic limit function `H*`, its Fourier
//!   amplitude and the closed-form oscillation amplitude.
//! * [`sim`]: Monte Carlo driver, payoff accounting, cyclic validation and the
//!   random phase-shift baseline.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod exact;
pub mod model;
pub mod protocol;
pub mod sim;

pub use error::{AnalysisError, ModelError, ProtocolError, SimError};
pub use model::{AgentId, AgentView, Choice, DayRecord, GameConfig, PublicTranscript};
