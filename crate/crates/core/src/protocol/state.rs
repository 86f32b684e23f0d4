use serde::{Deserialize, Serialize};

use super::cyclic::cyclic_attendance_a;
use super::stage_one::StageOneState;
use super::stage_two::{infer_split, split_resolution, PendingSet, Resolved, SplitOutcome, StageTwoState};
use crate::error::ProtocolError;
use crate::model::{Choice, DayRecord, GameConfig, PublicTranscript};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum Phase {
    /// Nothing published yet; day 1 is the random opening move.
    Opening,
    StageOne(StageOneState),
    StageTwo(StageTwoState),
    Cyclic {
        start_day: u64,
    },
}

impl Phase {
    fn rank(&self) -> u8 {
        match self {
            Phase::Opening => 0,
            Phase::StageOne(_) => 1,
            Phase::StageTwo(_) => 2,
            Phase::Cyclic { .. } => 3,
        }
    }
}

/// What one published day did to the public state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transition {
    StageOne(StageOneState),
    /// Exact split reached; the minority side took ID 0.
    StageOneComplete {
        zero_side: Choice,
    },
    Split {
        set: PendingSet,
        outcome: SplitOutcome,
        resolved: Vec<Resolved>,
    },
    Cyclic,
}

/// Public protocol state. A pure function of the transcript, so every agent
/// replaying the same attendance history holds an identical copy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolState {
    n_big: u64,
    day: u64,
    last: Option<DayRecord>,
    #[serde(flatten)]
    phase: Phase,
    zero_side: Option<Choice>,
    stage_one_end: Option<u64>,
}

impl ProtocolState {
    pub fn new(config: &GameConfig) -> Self {
        Self { n_big: config.n_big(), day: 0, last: None, phase: Phase::Opening, zero_side: None, stage_one_end: None }
    }

    pub fn n_big(&self) -> u64 {
        self.n_big
    }

    /// Days observed so far.
    pub fn day(&self) -> u64 {
        self.day
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    /// Restaurant of the ID-0 agents once stage one is over.
    pub fn zero_side(&self) -> Option<Choice> {
        self.zero_side
    }

    pub fn stage_one_end(&self) -> Option<u64> {
        self.stage_one_end
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.phase, Phase::Cyclic { .. })
    }

    /// 1-based offset of the upcoming day inside the cyclic schedule.
    pub fn next_cyclic_offset(&self) -> Option<u64> {
        match self.phase {
            Phase::Cyclic { start_day } => Some(self.day + 1 - start_day + 1),
            _ => None,
        }
    }

    /// Days spent in stage two, once it has finished.
    pub fn stage_two_days(&self) -> Option<u64> {
        match (self.phase.clone(), self.stage_one_end) {
            (Phase::Cyclic { start_day }, Some(end)) => Some(start_day - 1 - end),
            _ => None,
        }
    }

    fn deviation(&self, reason: impl Into<String>) -> ProtocolError {
        ProtocolError::Deviation { day: self.day + 1, reason: reason.into() }
    }

    /// Folds one published day into the state.
    pub fn observe(&mut self, record: DayRecord) -> Result<Transition, ProtocolError> {
        let expected = 2 * self.n_big + 1;
        if record.total() != expected {
            return Err(ProtocolError::BadAttendance { record, expected });
        }
        let before = self.phase.rank();
        let transition = match &self.phase {
            Phase::Opening => self.enter_stage_one(&record),
            Phase::StageOne(s1) => {
                // minority agents never leave
                if record.attendance(s1.minority_restaurant) < self.n_big - s1.delta {
                    return Err(self.deviation("minority restaurant lost agents during stage one"));
                }
                self.enter_stage_one(&record)
            }
            Phase::StageTwo(s2) => {
                let set = *s2.top().ok_or_else(|| self.deviation("empty stage-two stack"))?;
                let prev = self.last.expect("stage two always follows a published day");
                let outcome = infer_split(&prev, &record, &set).map_err(|e| self.deviation(e.to_string()))?;
                let (next, resolved) = split_resolution(s2, &outcome)?;
                if next.is_finished() {
                    self.phase = Phase::Cyclic { start_day: self.day + 2 };
                } else {
                    self.phase = Phase::StageTwo(next);
                }
                Transition::Split { set, outcome, resolved }
            }
            Phase::Cyclic { start_day } => {
                let offset = self.day + 1 - start_day + 1;
                if record.attendance_a != cyclic_attendance_a(offset, self.n_big) {
                    return Err(self.deviation("attendance off the cyclic schedule"));
                }
                Transition::Cyclic
            }
        };
        debug_assert!(self.phase.rank() >= before);
        self.day += 1;
        self.last = Some(record);
        Ok(transition)
    }

    fn enter_stage_one(&mut self, record: &DayRecord) -> Transition {
        let s1 = StageOneState::from_record(record, self.n_big);
        if s1.is_complete() {
            self.zero_side = Some(s1.minority_restaurant);
            self.stage_one_end = Some(self.day + 1);
            self.phase = Phase::StageTwo(StageTwoState::start(self.n_big, s1.majority_restaurant()));
            Transition::StageOneComplete { zero_side: s1.minority_restaurant }
        } else {
            self.phase = Phase::StageOne(s1);
            Transition::StageOne(s1)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("protocol state is always serializable")
    }
}

/// Public state after replaying the whole transcript.
pub fn replay_protocol_state(
    transcript: &PublicTranscript,
    config: &GameConfig,
) -> Result<ProtocolState, ProtocolError> {
    let mut state = ProtocolState::new(config);
    for record in transcript.days() {
        state.observe(*record)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64) -> GameConfig {
        GameConfig::new(n, 0).unwrap()
    }

    #[test]
    fn empty_transcript_is_opening() {
        let s = replay_protocol_state(&PublicTranscript::new(), &cfg(3)).unwrap();
        assert_eq!(s.phase(), &Phase::Opening);
        assert_eq!(s.day(), 0);
    }

    #[test]
    fn n_one_two_one_enters_stage_two() {
        let t = PublicTranscript::from_days(vec![DayRecord::new(2, 1)]);
        let s = replay_protocol_state(&t, &cfg(1)).unwrap();
        assert_eq!(s.zero_side(), Some(Choice::B));
        match s.phase() {
            Phase::StageTwo(s2) => {
                assert_eq!(s2.stack, vec![PendingSet { size: 2, first_id: 1, location: Choice::A }]);
            }
            other => panic!("unexpected phase {other:?}"),
        }
    }

    // b,c,g,j,k in A (ID 0); a,e,h shift on day 2; a shifts on day 3; e on day 4.
    fn eleven_agent_days() -> Vec<DayRecord> {
        vec![DayRecord::new(5, 6), DayRecord::new(8, 3), DayRecord::new(7, 4), DayRecord::new(6, 5)]
    }

    #[test]
    fn eleven_agent_prefix() {
        let days = eleven_agent_days();
        let t = PublicTranscript::from_days(days[..2].to_vec());
        let s = replay_protocol_state(&t, &cfg(5)).unwrap();
        let Phase::StageTwo(s2) = s.phase() else { panic!() };
        assert_eq!(
            s2.stack,
            vec![
                PendingSet { size: 3, first_id: 4, location: Choice::B },
                PendingSet { size: 3, first_id: 1, location: Choice::A },
            ]
        );
        let t = PublicTranscript::from_days(days);
        let s = replay_protocol_state(&t, &cfg(5)).unwrap();
        let Phase::StageTwo(s2) = s.phase() else { panic!() };
        assert_eq!(s2.assigned, 3);
        assert_eq!(s2.stack, vec![PendingSet { size: 3, first_id: 4, location: Choice::B }]);
    }

    #[test]
    fn stage_one_regression_is_a_deviation() {
        // minority A had 1 of N=2, cannot drop to 0
        let t = PublicTranscript::from_days(vec![DayRecord::new(1, 4), DayRecord::new(0, 5)]);
        assert!(matches!(replay_protocol_state(&t, &cfg(2)), Err(ProtocolError::Deviation { day: 2, .. })));
    }

    #[test]
    fn bad_total_is_rejected() {
        let t = PublicTranscript::from_days(vec![DayRecord::new(2, 2)]);
        assert!(matches!(replay_protocol_state(&t, &cfg(1)), Err(ProtocolError::BadAttendance { .. })));
    }

    #[test]
    fn full_run_to_cyclic_and_schedule_check() {
        // N=1: day 1 2:1 (B minority), pair in A; day 2 one shifts -> done.
        let mut days = vec![DayRecord::new(2, 1), DayRecord::new(1, 2)];
        let s = replay_protocol_state(&PublicTranscript::from_days(days.clone()), &cfg(1)).unwrap();
        assert_eq!(s.phase(), &Phase::Cyclic { start_day: 3 });
        assert_eq!(s.stage_two_days(), Some(1));
        assert_eq!(s.next_cyclic_offset(), Some(1));
        // cyclic: offsets 1,2,3 -> A attendance 2,1,2
        days.extend([DayRecord::new(2, 1), DayRecord::new(1, 2), DayRecord::new(2, 1)]);
        assert!(replay_protocol_state(&PublicTranscript::from_days(days.clone()), &cfg(1)).is_ok());
        let mut off = days.clone();
        days.push(DayRecord::new(2, 1));
        assert!(replay_protocol_state(&PublicTranscript::from_days(days), &cfg(1)).is_ok());
        off.push(DayRecord::new(1, 2));
        assert!(replay_protocol_state(&PublicTranscript::from_days(off), &cfg(1)).is_err());
        let bad = vec![DayRecord::new(2, 1), DayRecord::new(1, 2), DayRecord::new(1, 2)];
        assert!(replay_protocol_state(&PublicTranscript::from_days(bad), &cfg(1)).is_err());
    }

    #[test]
    fn json_dump_has_phase_tag() {
        let t = PublicTranscript::from_days(vec![DayRecord::new(5, 6), DayRecord::new(8, 3)]);
        let s = replay_protocol_state(&t, &cfg(5)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["phase"], "stage_two");
        assert_eq!(v["assigned"], 0);
        assert_eq!(v["stack"][1]["first_id"], 1);
        let back: ProtocolState = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);

        let t = PublicTranscript::from_days(vec![DayRecord::new(0, 11)]);
        let s = replay_protocol_state(&t, &cfg(5)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["phase"], "stage_one");
        assert_eq!(v["delta"], 5);
    }
}
