use serde::Serialize;

use super::payoff::payoff_audit;
use crate::error::SimError;
use crate::model::{AgentId, Choice, DayRecord, GameConfig, PublicTranscript};
use crate::protocol::cyclic_choice;

/// A window of `2m` consecutive cyclic days in which an agent won neither
/// `m - 1` nor `m` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowViolation {
    pub agent: usize,
    pub m: u64,
    /// 1-based cyclic day offset of the window's first day.
    pub start: u64,
    pub wins: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CyclicReport {
    pub n_big: u64,
    pub horizon: u64,
    pub attendance_a: Vec<u64>,
    /// `wins_per_period[i][p]`: wins of agent `i` in full period `p`.
    pub wins_per_period: Vec<Vec<u64>>,
    /// True when every agent wins exactly `N` times in every full period.
    pub exact_per_period: bool,
    pub window_violations: Vec<WindowViolation>,
}

impl CyclicReport {
    pub fn is_clean(&self) -> bool {
        self.exact_per_period && self.window_violations.is_empty()
    }
}

/// Plays the cyclic schedule for `horizon` days from offset 1 and checks the
/// per-period win counts and every `2m`-day window with `m <= 2N + 1` that
/// fits inside the horizon.
pub fn validate_cyclic(config: &GameConfig, ids: &[AgentId], horizon: u64) -> Result<CyclicReport, SimError> {
    let n = config.n_big();
    let period = config.n_agents();
    if horizon < 2 * period {
        return Err(SimError::InvalidParameter(format!("horizon must be at least {}", 2 * period)));
    }
    if ids.len() as u64 != config.n_agents() {
        return Err(SimError::InvalidParameter("one id per agent is required".into()));
    }
    let choices: Vec<Vec<Choice>> = ids
        .iter()
        .map(|id| (1..=horizon).map(|d| cyclic_choice(id.value(), d, n)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let mut transcript = PublicTranscript::new();
    for d in 0..horizon as usize {
        let a = choices.iter().filter(|c| c[d] == Choice::A).count() as u64;
        transcript.push(DayRecord::new(a, period - a));
    }
    let ledger = payoff_audit(&transcript, &choices)?;

    let full_periods = horizon / period;
    let wins_per_period: Vec<Vec<u64>> = (0..ids.len())
        .map(|i| (0..full_periods).map(|p| ledger.wins_in(i, (p * period) as usize, period as usize)).collect())
        .collect();
    let exact_per_period = wins_per_period.iter().flatten().all(|&w| w == n);

    let mut window_violations = Vec::new();
    for i in 0..ids.len() {
        for m in 1..=period {
            let len = 2 * m;
            if len > horizon {
                break;
            }
            for start in 0..=(horizon - len) {
                let wins = ledger.wins_in(i, start as usize, len as usize);
                if wins + 1 != m && wins != m {
                    window_violations.push(WindowViolation { agent: i, m, start: start + 1, wins });
                }
            }
        }
    }

    Ok(CyclicReport {
        n_big: n,
        horizon,
        attendance_a: transcript.days().iter().map(|d| d.attendance_a).collect(),
        wins_per_period,
        exact_per_period,
        window_violations,
    })
}

/// Canonical assignment: agents `0..N` hold ID 0, agent `N + k` holds `k`.
pub fn canonical_ids(config: &GameConfig) -> Vec<AgentId> {
    let n = config.n_big();
    (0..config.n_agents())
        .map(|i| if i < n { AgentId::ZERO } else { AgentId::new(i - n + 1, n).expect("in range") })
        .collect()
}
