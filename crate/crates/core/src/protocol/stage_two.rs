//! Stage two: recursive fair-coin splitting that hands out IDs `1..=N+1`.
//!
//! Pending sets live on an explicit stack, first set on top. Only the top set
//! flips coins; everybody else repeats yesterday's choice, so the change in
//! attendance at the top set's restaurant reveals how many of its members
//! shifted.

use serde::{Deserialize, Serialize};

use crate::error::ProtocolError;
use crate::model::{Choice, DayRecord, DrawSource, PrivateView};

/// Agents waiting for the IDs `first_id ..= first_id + size - 1`, all
/// currently sitting in `location`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PendingSet {
    pub size: u64,
    pub first_id: u64,
    pub location: Choice,
}

impl PendingSet {
    pub fn last_id(&self) -> u64 {
        self.first_id + self.size - 1
    }

    pub fn id_range(&self) -> std::ops::RangeInclusive<u64> {
        self.first_id..=self.first_id + self.size.saturating_sub(1)
    }
}

/// What the attendance revealed about one splitting day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitOutcome {
    /// Members that shifted.
    pub j: u64,
    /// `min(j, r - j)`.
    pub first_set_size: u64,
    /// True when `j = r/2`, in which case the shifted half is the first set.
    pub tie_broken_by_shift: bool,
    /// True when the first set is made of the members that shifted.
    pub first_is_shifted: bool,
}

impl SplitOutcome {
    /// Splits `set` into (first, second). Either side may be empty.
    pub fn partition(&self, set: &PendingSet) -> (PendingSet, PendingSet) {
        let shifted_at = set.location.other();
        let (first_loc, second_loc) =
            if self.first_is_shifted { (shifted_at, set.location) } else { (set.location, shifted_at) };
        let first = PendingSet { size: self.first_set_size, first_id: set.first_id, location: first_loc };
        let second = PendingSet {
            size: set.size - self.first_set_size,
            first_id: set.first_id + self.first_set_size,
            location: second_loc,
        };
        (first, second)
    }
}

/// Infers `j` from two consecutive days while `set` was splitting.
pub fn infer_split(prev: &DayRecord, cur: &DayRecord, set: &PendingSet) -> Result<SplitOutcome, ProtocolError> {
    let moved = prev.attendance(set.location) as i64 - cur.attendance(set.location) as i64;
    if moved < 0 || moved as u64 > set.size {
        return Err(ProtocolError::InconsistentSplit { moved, set_size: set.size });
    }
    let j = moved as u64;
    let rest = set.size - j;
    let tie = 2 * j == set.size;
    Ok(SplitOutcome { j, first_set_size: j.min(rest), tie_broken_by_shift: tie, first_is_shifted: j <= rest })
}

/// Stack of pending sets plus the number of nonzero IDs already fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTwoState {
    pub stack: Vec<PendingSet>,
    pub assigned: u64,
}

/// An ID fixed without spending a day, because its set shrank to one member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolved {
    pub id: u64,
    pub location: Choice,
}

impl StageTwoState {
    /// All `N + 1` majority agents waiting for IDs `1..=N+1` in `location`.
    pub fn start(n_big: u64, location: Choice) -> Self {
        let mut state = Self { stack: vec![PendingSet { size: n_big + 1, first_id: 1, location }], assigned: 0 };
        state.cascade(&mut Vec::new());
        state
    }

    pub fn top(&self) -> Option<&PendingSet> {
        self.stack.last()
    }

    pub fn is_finished(&self) -> bool {
        self.stack.is_empty()
    }

    pub fn pending_total(&self) -> u64 {
        self.stack.iter().map(|s| s.size).sum()
    }

    /// Pops sets of size 0 and 1 off the top without consuming a day.
    fn cascade(&mut self, resolved: &mut Vec<Resolved>) {
        while let Some(top) = self.stack.last() {
            match top.size {
                0 => {
                    self.stack.pop();
                }
                1 => {
                    resolved.push(Resolved { id: top.first_id, location: top.location });
                    self.assigned += 1;
                    self.stack.pop();
                }
                _ => break,
            }
        }
    }
}

/// Replaces the top set by its two parts (first set on top) and resolves any
/// singletons or empty sets that surface.
pub fn split_resolution(
    state: &StageTwoState,
    outcome: &SplitOutcome,
) -> Result<(StageTwoState, Vec<Resolved>), ProtocolError> {
    let mut next = state.clone();
    let set = next.stack.pop().ok_or(ProtocolError::WrongPhase("split resolution with an empty stack"))?;
    if outcome.j > set.size {
        return Err(ProtocolError::InconsistentSplit { moved: outcome.j as i64, set_size: set.size });
    }
    let (first, second) = outcome.partition(&set);
    next.stack.push(second);
    next.stack.push(first);
    let mut resolved = Vec::new();
    next.cascade(&mut resolved);
    Ok((next, resolved))
}

/// One agent's stage-two move. `in_splitting_set` comes from the agent's own
/// replay of her membership.
pub fn stage_two_decision<R: DrawSource>(
    state: &StageTwoState,
    in_splitting_set: bool,
    view: PrivateView<'_, R>,
) -> Result<Choice, ProtocolError> {
    if state.is_finished() {
        return Err(ProtocolError::WrongPhase("stage two already finished"));
    }
    let previous = view.previous_choice();
    if !in_splitting_set {
        return Ok(previous);
    }
    let u = view.rng.uniform();
    Ok(if u < 0.5 { previous.other() } else { previous })
}
