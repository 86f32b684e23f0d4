//! Day-by-day episode driver.
//!
//! The driver owns every agent, collects their choices, publishes the
//! attendance and hands the record back. Besides the agents' own replays it
//! keeps a ground-truth bookkeeping of who sits in which pending set, so each
//! agent's self-derived ID can be checked at the end.

use std::collections::HashMap;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::seed::{agent_rng, PROTOCOL_DOMAIN};
use crate::error::SimError;
use crate::model::{AgentId, AgentView, Choice, DayRecord, DrawSource, GameConfig, PublicTranscript};
use crate::protocol::{Agent, ProtocolState, Transition};

/// One splitting day of stage two, as seen in the public record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitEvent {
    pub day: u64,
    pub set_size: u64,
    pub first_id: u64,
    pub j: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeResult {
    pub stage_one_days: u64,
    pub stage_two_days: u64,
    /// `ids[i]` is the ID of agent `i`; empty when the run stopped after stage one.
    pub ids: Vec<AgentId>,
    pub transcript: PublicTranscript,
    pub split_log: Vec<SplitEvent>,
    /// `choices[i][d]` is agent `i`'s choice on day `d + 1`.
    #[serde(skip)]
    pub choices: Vec<Vec<Choice>>,
}

impl EpisodeResult {
    pub fn total_days(&self) -> u64 {
        self.stage_one_days + self.stage_two_days
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("episode results serialize")
    }
}

/// Where to stop an episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopAt {
    /// After the exact `(N, N+1)` split.
    StageOneEnd,
    /// When every ID is fixed and the cyclic phase begins.
    Cyclic,
}

#[derive(Debug, Clone, Copy)]
pub struct EpisodeOptions {
    pub stop_at: StopAt,
    pub day_cap: u64,
    /// Compare every agent's public state with the driver's on every day.
    pub check_consensus: bool,
}

impl EpisodeOptions {
    pub fn for_config(config: &GameConfig) -> Self {
        Self { stop_at: StopAt::Cyclic, day_cap: default_day_cap(config), check_consensus: true }
    }
}

/// Generous termination guard: `10^4` times the number of agents.
pub fn default_day_cap(config: &GameConfig) -> u64 {
    10_000 * config.n_agents()
}

pub fn protocol_streams(config: &GameConfig, trial_index: u64) -> Vec<ChaCha8Rng> {
    (0..config.n_agents()).map(|i| agent_rng(config.master_seed(), PROTOCOL_DOMAIN, trial_index, i)).collect()
}

/// Runs one seeded episode to the cyclic phase. Agent `i` draws from a stream
/// seeded by `(master_seed, trial_index, i)`.
pub fn run_episode(config: &GameConfig, trial_index: u64) -> Result<EpisodeResult, SimError> {
    run_episode_with(config, protocol_streams(config, trial_index), EpisodeOptions::for_config(config))
}

/// Runs one episode with caller-supplied draw sources, one per agent.
pub fn run_episode_with<R: DrawSource>(
    config: &GameConfig,
    streams: Vec<R>,
    options: EpisodeOptions,
) -> Result<EpisodeResult, SimError> {
    if streams.len() as u64 != config.n_agents() {
        return Err(SimError::InvalidParameter(format!(
            "{} draw sources for {} agents",
            streams.len(),
            config.n_agents()
        )));
    }
    let mut agents: Vec<Agent<R>> =
        streams.into_iter().enumerate().map(|(i, rng)| Agent::new(config, AgentView::new(i, rng))).collect();
    let mut driver = ProtocolState::new(config);
    let mut truth = GroundTruth::default();
    let mut transcript = PublicTranscript::new();
    let mut split_log = Vec::new();
    let mut today = Vec::with_capacity(agents.len());

    loop {
        let done = match options.stop_at {
            StopAt::StageOneEnd => driver.stage_one_end().is_some(),
            StopAt::Cyclic => driver.is_cyclic(),
        };
        if done {
            break;
        }
        if driver.day() >= options.day_cap {
            return Err(SimError::DayCapExceeded { cap: options.day_cap });
        }

        today.clear();
        let mut attendance_a = 0;
        for agent in agents.iter_mut() {
            let c = agent.act()?;
            if c == Choice::A {
                attendance_a += 1;
            }
            today.push(c);
        }
        let record = DayRecord::new(attendance_a, config.n_agents() - attendance_a);
        transcript.push(record);

        let day = driver.day() + 1;
        let transition = driver.observe(record)?;
        truth.apply(&transition, &today);
        if let Transition::Split { set, outcome, .. } = &transition {
            split_log.push(SplitEvent { day, set_size: set.size, first_id: set.first_id, j: outcome.j });
        }
        for agent in agents.iter_mut() {
            agent.observe(record)?;
            if options.check_consensus && agent.knowledge().public() != &driver {
                return Err(SimError::ConsensusBroken { day });
            }
        }
    }

    let stage_one_days = driver.stage_one_end().unwrap_or(driver.day());
    let stage_two_days = driver.stage_two_days().unwrap_or(0);
    let mut ids = Vec::with_capacity(agents.len());
    if options.stop_at == StopAt::Cyclic {
        for (i, agent) in agents.iter().enumerate() {
            let derived = agent.knowledge().membership().id();
            match (derived, truth.ids.get(&i)) {
                (Some(d), Some(&t)) if d == t => ids.push(AgentId::new(d, config.n_big())?),
                (d, t) => {
                    return Err(SimError::IdMismatch {
                        agent: i,
                        derived: d.unwrap_or(u64::MAX),
                        truth: t.copied().unwrap_or(u64::MAX),
                    })
                }
            }
        }
    }
    let choices = agents.into_iter().map(|a| a.view().own_choices().to_vec()).collect();
    Ok(EpisodeResult { stage_one_days, stage_two_days, ids, transcript, split_log, choices })
}

/// Stage-one duration only; stage two is never simulated.
pub fn run_stage_one(config: &GameConfig, trial_index: u64) -> Result<u64, SimError> {
    let options =
        EpisodeOptions { stop_at: StopAt::StageOneEnd, day_cap: default_day_cap(config), check_consensus: false };
    let result = run_episode_with(config, protocol_streams(config, trial_index), options)?;
    Ok(result.stage_one_days)
}

/// Driver-side membership by agent index, never visible to agents.
#[derive(Default)]
struct GroundTruth {
    /// pending sets keyed by first id
    sets: HashMap<u64, Vec<usize>>,
    ids: HashMap<usize, u64>,
}

impl GroundTruth {
    fn apply(&mut self, transition: &Transition, today: &[Choice]) {
        match transition {
            Transition::StageOneComplete { zero_side } => {
                let mut pending = Vec::new();
                for (i, c) in today.iter().enumerate() {
                    if c == zero_side {
                        self.ids.insert(i, 0);
                    } else {
                        pending.push(i);
                    }
                }
                self.settle(1, pending);
            }
            Transition::Split { set, outcome, .. } => {
                let members = self.sets.remove(&set.first_id).unwrap_or_default();
                let (shifted, stayed): (Vec<usize>, Vec<usize>) =
                    members.into_iter().partition(|&i| today[i] != set.location);
                let (first, second) = if outcome.first_is_shifted { (shifted, stayed) } else { (stayed, shifted) };
                let first_len = first.len() as u64;
                self.settle(set.first_id, first);
                self.settle(set.first_id + first_len, second);
            }
            Transition::StageOne(_) | Transition::Cyclic => {}
        }
    }

    fn settle(&mut self, first_id: u64, members: Vec<usize>) {
        match members.len() {
            0 => {}
            1 => {
                self.ids.insert(members[0], first_id);
            }
            _ => {
                self.sets.insert(first_id, members);
            }
        }
    }
}
