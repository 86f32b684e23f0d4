//! Domain types shared by the protocol, the simulator and the analysis code.
//!
//! The split between public and private information is enforced here: the
//! [`PublicTranscript`] is the only thing every agent sees, while an
//! [`AgentView`] holds what a single agent remembers about herself.

use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Size parameters of one game: `2N + 1` agents choosing between A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    n_big: u64,
    master_seed: u64,
}

impl GameConfig {
    pub fn new(n_big: u64, master_seed: u64) -> Result<Self, ModelError> {
        if n_big == 0 {
            return Err(ModelError::InvalidConfig("N must be at least 1".into()));
        }
        if n_big > (u64::MAX - 1) / 2 {
            return Err(ModelError::InvalidConfig(format!("N = {n_big} overflows 2N+1")));
        }
        Ok(Self { n_big, master_seed })
    }

    /// `N`: the minority size in a perfectly efficient day.
    pub fn n_big(&self) -> u64 {
        self.n_big
    }

    /// `2N + 1`.
    pub fn n_agents(&self) -> u64 {
        2 * self.n_big + 1
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn with_seed(self, master_seed: u64) -> Self {
        Self { master_seed, ..self }
    }
}

/// One of the two restaurants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    A,
    B,
}

impl Choice {
    pub fn other(self) -> Self {
        match self {
            Choice::A => Choice::B,
            Choice::B => Choice::A,
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Choice::A => "A",
            Choice::B => "B",
        })
    }
}

/// Attendance published at the end of one day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DayRecord {
    pub attendance_a: u64,
    pub attendance_b: u64,
}

impl DayRecord {
    pub fn new(attendance_a: u64, attendance_b: u64) -> Self {
        Self { attendance_a, attendance_b }
    }

    pub fn attendance(&self, choice: Choice) -> u64 {
        match choice {
            Choice::A => self.attendance_a,
            Choice::B => self.attendance_b,
        }
    }

    pub fn total(&self) -> u64 {
        self.attendance_a + self.attendance_b
    }

    /// The strictly less crowded restaurant. With an odd total there is never a tie.
    pub fn minority(&self) -> Choice {
        if self.attendance_a < self.attendance_b {
            Choice::A
        } else {
            Choice::B
        }
    }

    /// True when the day's attendance sums to `2N + 1`.
    pub fn is_valid_for(&self, config: &GameConfig) -> bool {
        self.attendance_a.checked_add(self.attendance_b) == Some(config.n_agents())
    }
}

/// The public attendance history. Day `k` (1-based) is `days()[k - 1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicTranscript {
    days: Vec<DayRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TranscriptRow {
    day: u64,
    attendance_a: u64,
    attendance_b: u64,
}

impl PublicTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_days(days: Vec<DayRecord>) -> Self {
        Self { days }
    }

    pub fn push(&mut self, record: DayRecord) {
        self.days.push(record);
    }

    pub fn days(&self) -> &[DayRecord] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    /// Record for a 1-based day index.
    pub fn day(&self, day: u64) -> Option<&DayRecord> {
        let idx = usize::try_from(day).ok()?.checked_sub(1)?;
        self.days.get(idx)
    }

    pub fn last(&self) -> Option<&DayRecord> {
        self.days.last()
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), ModelError> {
        let mut wtr = csv::Writer::from_writer(writer);
        for (i, d) in self.days.iter().enumerate() {
            wtr.serialize(TranscriptRow {
                day: i as u64 + 1,
                attendance_a: d.attendance_a,
                attendance_b: d.attendance_b,
            })?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: io::Read>(reader: R) -> Result<Self, ModelError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut days = Vec::new();
        for row in rdr.deserialize() {
            let row: TranscriptRow = row?;
            if row.day != days.len() as u64 + 1 {
                return Err(ModelError::Format(format!("expected day {}, found day {}", days.len() + 1, row.day)));
            }
            days.push(DayRecord::new(row.attendance_a, row.attendance_b));
        }
        Ok(Self { days })
    }

    pub fn to_json(&self) -> Result<String, ModelError> {
        let rows: Vec<TranscriptRow> = self
            .days
            .iter()
            .enumerate()
            .map(|(i, d)| TranscriptRow {
                day: i as u64 + 1,
                attendance_a: d.attendance_a,
                attendance_b: d.attendance_b,
            })
            .collect();
        Ok(serde_json::to_string(&rows)?)
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let rows: Vec<TranscriptRow> = serde_json::from_str(text)?;
        let mut days = Vec::with_capacity(rows.len());
        for row in rows {
            if row.day != days.len() as u64 + 1 {
                return Err(ModelError::Format(format!("non-contiguous day {}", row.day)));
            }
            days.push(DayRecord::new(row.attendance_a, row.attendance_b));
        }
        Ok(Self { days })
    }
}

/// True iff every day's attendance sums to `2N + 1`.
pub fn validate_transcript(transcript: &PublicTranscript, config: &GameConfig) -> bool {
    transcript.days().iter().all(|d| d.is_valid_for(config))
}

/// Source of uniform draws in `[0, 1)` for a single agent.
///
/// Implemented for every [`rand::RngCore`]; tests use [`ScriptedDraws`] to
/// replay hand-picked scenarios.
pub trait DrawSource {
    fn uniform(&mut self) -> f64;
}

impl<R: rand::RngCore> DrawSource for R {
    fn uniform(&mut self) -> f64 {
        use rand::Rng;
        self.gen::<f64>()
    }
}

/// A fixed sequence of draws; once exhausted it keeps returning the fallback.
#[derive(Debug, Clone)]
pub struct ScriptedDraws {
    draws: Vec<f64>,
    pos: usize,
    fallback: f64,
}

impl ScriptedDraws {
    pub fn new(draws: Vec<f64>) -> Self {
        Self { draws, pos: 0, fallback: 0.75 }
    }

    pub fn with_fallback(mut self, fallback: f64) -> Self {
        self.fallback = fallback;
        self
    }
}

impl DrawSource for ScriptedDraws {
    fn uniform(&mut self) -> f64 {
        let v = self.draws.get(self.pos).copied().unwrap_or(self.fallback);
        self.pos += 1;
        v
    }
}

/// Everything one agent privately knows: her own past choices and her own
/// random stream. The agent index is a driver-side label.
#[derive(Debug, Clone)]
pub struct AgentView<R> {
    agent_index: usize,
    own_choices: Vec<Choice>,
    rng: R,
}

impl<R: DrawSource> AgentView<R> {
    pub fn new(agent_index: usize, rng: R) -> Self {
        Self { agent_index, own_choices: Vec::new(), rng }
    }

    pub fn agent_index(&self) -> usize {
        self.agent_index
    }

    pub fn own_choices(&self) -> &[Choice] {
        &self.own_choices
    }

    /// The previous day's choice; before day 1 every agent counts as being in A.
    pub fn previous_choice(&self) -> Choice {
        self.own_choices.last().copied().unwrap_or(Choice::A)
    }

    pub fn record_choice(&mut self, choice: Choice) {
        self.own_choices.push(choice);
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }

    pub fn into_parts(self) -> (Vec<Choice>, R) {
        (self.own_choices, self.rng)
    }

    /// The part of the view a decision function may touch. The agent index is
    /// left behind.
    pub fn private(&mut self) -> PrivateView<'_, R> {
        PrivateView { own_choices: &self.own_choices, rng: &mut self.rng }
    }
}

/// Borrowed private information handed to decision logic.
pub struct PrivateView<'a, R> {
    pub own_choices: &'a [Choice],
    pub rng: &'a mut R,
}

impl<R: DrawSource> PrivateView<'_, R> {
    pub fn previous_choice(&self) -> Choice {
        self.own_choices.last().copied().unwrap_or(Choice::A)
    }
}

/// Identifier an agent derives for herself during stage two.
/// `0` is shared by the `N` stage-one minority agents; `1..=N+1` are unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AgentId(u64);

impl AgentId {
    pub const ZERO: AgentId = AgentId(0);

    pub fn new(value: u64, n_big: u64) -> Result<Self, ModelError> {
        if value > n_big + 1 {
            return Err(ModelError::InvalidId { id: value, n_big });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Checks the completion invariant: exactly `N` zeros and each of `1..=N+1` once.
pub fn ids_are_complete(ids: &[AgentId], n_big: u64) -> bool {
    if ids.len() as u64 != 2 * n_big + 1 {
        return false;
    }
    let mut seen = vec![false; n_big as usize + 2];
    let mut zeros = 0;
    for id in ids {
        let v = id.value() as usize;
        if v == 0 {
            zeros += 1;
        } else if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    zeros == n_big && seen[1..].iter().all(|&s| s)
}
