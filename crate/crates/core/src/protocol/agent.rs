//! An agent's own replay: the shared public state plus what she can infer
//! about herself from her own choices.

use serde::{Deserialize, Serialize};

use super::cyclic::cyclic_choice;
use super::stage_one::stage_one_decision;
use super::stage_two::{stage_two_decision, PendingSet};
use super::state::{Phase, ProtocolState, Transition};
use crate::error::ProtocolError;
use crate::model::{AgentView, Choice, DayRecord, DrawSource, GameConfig, PublicTranscript};

/// Where an agent stands in the ID assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    /// Stage one still running.
    Undetermined,
    /// Waiting in the pending set that owns `first_id ..= first_id + size - 1`.
    Pending {
        first_id: u64,
        size: u64,
    },
    Assigned(u64),
}

impl Membership {
    pub fn id(&self) -> Option<u64> {
        match *self {
            Membership::Assigned(id) => Some(id),
            _ => None,
        }
    }

    fn is_in(&self, set: &PendingSet) -> bool {
        matches!(*self, Membership::Pending { first_id, size } if first_id == set.first_id && size == set.size)
    }
}

/// Public state and private membership, both derived by replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Knowledge {
    public: ProtocolState,
    membership: Membership,
}

impl Knowledge {
    pub fn new(config: &GameConfig) -> Self {
        Self { public: ProtocolState::new(config), membership: Membership::Undetermined }
    }

    pub fn public(&self) -> &ProtocolState {
        &self.public
    }

    pub fn membership(&self) -> Membership {
        self.membership
    }

    /// Updates on a published day, given the agent's own choice that day.
    pub fn observe(&mut self, record: DayRecord, own_choice: Choice) -> Result<(), ProtocolError> {
        match self.public.observe(record)? {
            Transition::StageOne(_) | Transition::Cyclic => {}
            Transition::StageOneComplete { zero_side } => {
                self.membership = if own_choice == zero_side {
                    Membership::Assigned(0)
                } else {
                    Membership::Pending { first_id: 1, size: self.public.n_big() + 1 }
                };
            }
            Transition::Split { set, outcome, .. } => {
                if self.membership.is_in(&set) {
                    let shifted = own_choice != set.location;
                    let (first, second) = outcome.partition(&set);
                    let mine = if shifted == outcome.first_is_shifted { first } else { second };
                    self.membership = if mine.size == 1 {
                        Membership::Assigned(mine.first_id)
                    } else {
                        Membership::Pending { first_id: mine.first_id, size: mine.size }
                    };
                }
            }
        }
        Ok(())
    }

    /// The choice for the upcoming day.
    pub fn decide<R: DrawSource>(&self, view: &mut AgentView<R>) -> Result<Choice, ProtocolError> {
        let n_big = self.public.n_big();
        match self.public.phase() {
            Phase::Opening => stage_one_decision(None, n_big, view.private()),
            Phase::StageOne(s1) => stage_one_decision(Some(s1), n_big, view.private()),
            Phase::StageTwo(s2) => {
                let splitting = s2.top().is_some_and(|top| self.membership.is_in(top));
                stage_two_decision(s2, splitting, view.private())
            }
            Phase::Cyclic { .. } => {
                let id = self.membership.id().ok_or(ProtocolError::WrongPhase("cyclic phase reached without an id"))?;
                let offset = self.public.next_cyclic_offset().expect("cyclic phase has an offset");
                cyclic_choice(id, offset, n_big)
            }
        }
    }

    /// Rebuilds an agent's knowledge from scratch out of the transcript and
    /// her own choice history only.
    pub fn replay(
        config: &GameConfig,
        transcript: &PublicTranscript,
        own_choices: &[Choice],
    ) -> Result<Self, ProtocolError> {
        let mut k = Self::new(config);
        for (record, &choice) in transcript.days().iter().zip(own_choices) {
            k.observe(*record, choice)?;
        }
        Ok(k)
    }
}

/// A compliant agent: private view plus her own replay of the protocol.
#[derive(Debug, Clone)]
pub struct Agent<R> {
    view: AgentView<R>,
    knowledge: Knowledge,
}

impl<R: DrawSource> Agent<R> {
    pub fn new(config: &GameConfig, view: AgentView<R>) -> Self {
        Self { view, knowledge: Knowledge::new(config) }
    }

    pub fn view(&self) -> &AgentView<R> {
        &self.view
    }

    pub fn view_mut(&mut self) -> &mut AgentView<R> {
        &mut self.view
    }

    pub fn knowledge(&self) -> &Knowledge {
        &self.knowledge
    }

    /// Chooses for tomorrow and remembers the choice.
    pub fn act(&mut self) -> Result<Choice, ProtocolError> {
        let choice = self.knowledge.decide(&mut self.view)?;
        self.view.record_choice(choice);
        Ok(choice)
    }

    pub fn observe(&mut self, record: DayRecord) -> Result<(), ProtocolError> {
        let own =
            *self.view.own_choices().last().ok_or(ProtocolError::WrongPhase("observe before the first choice"))?;
        self.knowledge.observe(record, own)
    }
}
