//! Stage one: converge from a random opening split to an exact `(N, N+1)` split.

use serde::{Deserialize, Serialize};

use crate::error::ProtocolError;
use crate::model::{Choice, DayRecord, DrawSource, PrivateView};

/// Public stage-one state after at least one day: the minority restaurant
/// holds `N - delta` agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageOneState {
    pub delta: u64,
    pub minority_restaurant: Choice,
}

impl StageOneState {
    /// Reads the shortfall off a day's attendance.
    pub fn from_record(record: &DayRecord, n_big: u64) -> Self {
        let minority = record.minority();
        Self { delta: n_big.saturating_sub(record.attendance(minority)), minority_restaurant: minority }
    }

    pub fn majority_restaurant(&self) -> Choice {
        self.minority_restaurant.other()
    }

    /// `delta / (N + delta + 1)`: each majority agent's shift probability.
    pub fn shift_probability(&self, n_big: u64) -> f64 {
        self.delta as f64 / (n_big + self.delta + 1) as f64
    }

    pub fn is_complete(&self) -> bool {
        self.delta == 0
    }
}

/// One agent's stage-one move.
///
/// `state` is `None` on day 1, when every agent picks A iff her draw is at
/// most 1/2. Afterwards minority agents stay put and majority agents shift
/// with probability `delta / (N + delta + 1)`.
pub fn stage_one_decision<R: DrawSource>(
    state: Option<&StageOneState>,
    n_big: u64,
    view: PrivateView<'_, R>,
) -> Result<Choice, ProtocolError> {
    let Some(state) = state else {
        let u = view.rng.uniform();
        return Ok(if u <= 0.5 { Choice::A } else { Choice::B });
    };
    if state.is_complete() {
        return Err(ProtocolError::WrongPhase("stage one already ended (delta = 0)"));
    }
    let previous = view.previous_choice();
    if previous == state.minority_restaurant {
        return Ok(previous);
    }
    let p = state.shift_probability(n_big);
    let u = view.rng.uniform();
    Ok(if u < p { previous.other() } else { previous })
}
