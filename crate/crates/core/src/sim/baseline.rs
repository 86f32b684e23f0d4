//! Trial-and-error phase shifting: a slower alternative route to the cyclic
//! state, kept for comparison.
//!
//! Every agent plays the template `A A B A B ... A B` (length `2N + 1`, with
//! `N + 1` A's) from a private phase shift. After each full period, agents
//! whose phase starts on a day where A held more than `N + 1` agents move,
//! with probability `readjust_prob`, to a uniformly chosen day that was not
//! over-crowded (A held at most `N + 1`). Coordination is reached when A holds exactly `N + 1` on every
//! day of a period.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::seed::{agent_rng, BASELINE_DOMAIN};
use super::stats::{DurationAccumulator, McStats};
use crate::error::SimError;
use crate::model::GameConfig;

pub const DEFAULT_READJUST_PROB: f64 = 0.1;

/// Template position `p` is A for `p = 0, 1` and for odd `p >= 3`.
pub fn template_is_a(position: u64) -> bool {
    position < 2 || position % 2 == 1
}

/// A-attendance on each day of one period for the given phases.
pub fn period_attendance(phases: &[u64], period: u64) -> Vec<u64> {
    let mut attendance = vec![0; period as usize];
    for &phase in phases {
        for (d, slot) in attendance.iter_mut().enumerate() {
            let position = (d as u64 + period - phase) % period;
            if template_is_a(position) {
                *slot += 1;
            }
        }
    }
    attendance
}

/// Periods played until (and including) the first perfect one.
pub fn baseline_phase_shift(
    config: &GameConfig,
    readjust_prob: f64,
    max_rounds: u64,
    trial_index: u64,
) -> Result<u64, SimError> {
    if !(0.0..=1.0).contains(&readjust_prob) {
        return Err(SimError::InvalidParameter(format!("readjust_prob {readjust_prob} outside [0, 1]")));
    }
    let n = config.n_big();
    let period = config.n_agents();
    let mut rngs: Vec<_> =
        (0..period).map(|i| agent_rng(config.master_seed(), BASELINE_DOMAIN, trial_index, i)).collect();
    let mut phases: Vec<u64> = rngs.iter_mut().map(|r| r.gen_range(0..period)).collect();
    baseline_from_phases(n, &mut phases, &mut rngs, readjust_prob, max_rounds)
}

/// Runs the readjustment dynamics from given initial phases.
pub fn baseline_from_phases<R: Rng>(
    n_big: u64,
    phases: &mut [u64],
    rngs: &mut [R],
    readjust_prob: f64,
    max_rounds: u64,
) -> Result<u64, SimError> {
    let period = 2 * n_big + 1;
    for round in 1..=max_rounds {
        let attendance = period_attendance(phases, period);
        if attendance.iter().all(|&a| a == n_big + 1) {
            return Ok(round);
        }
        let calm: Vec<u64> = (0..period).filter(|&d| attendance[d as usize] <= n_big + 1).collect();
        for (phase, rng) in phases.iter_mut().zip(rngs.iter_mut()) {
            if attendance[*phase as usize] > n_big + 1 && rng.gen::<f64>() < readjust_prob {
                *phase = calm[rng.gen_range(0..calm.len())];
            }
        }
    }
    Err(SimError::Timeout { max_rounds })
}

pub const DEFAULT_MAX_ROUNDS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineReport {
    pub n_big: u64,
    pub readjust_prob: f64,
    pub max_rounds: u64,
    pub trials: u64,
    /// Periods until coordination, over the trials that coordinated.
    pub periods: Option<McStats>,
    pub timeouts: u64,
    /// Mean days played before the cyclic state, `(periods - 1) * (2N + 1)`,
    /// with every timed-out trial counted as `max_rounds * (2N + 1)`. Since a
    /// timed-out trial needs longer than that, this underestimates the true
    /// mean.
    pub days_lower_bound: f64,
}

pub fn run_baseline(
    config: &GameConfig,
    readjust_prob: f64,
    max_rounds: u64,
    trials: u64,
) -> Result<BaselineReport, SimError> {
    if trials == 0 {
        return Err(SimError::InvalidParameter("trials must be at least 1".into()));
    }
    let (acc, timeouts) = (0..trials)
        .into_par_iter()
        .map(|t| match baseline_phase_shift(config, readjust_prob, max_rounds, t) {
            Ok(r) => {
                let mut a = DurationAccumulator::default();
                a.push(r);
                Ok((a, 0))
            }
            Err(SimError::Timeout { .. }) => Ok((DurationAccumulator::default(), 1)),
            Err(e) => Err(e),
        })
        .try_reduce(|| (DurationAccumulator::default(), 0u64), |a, b| Ok((a.0.merge(b.0), a.1 + b.1)))?;
    let periods = acc.stats();
    let period = config.n_agents() as f64;
    let coordinated_days = periods.as_ref().map_or(0.0, |s| (s.mean - 1.0) * period * s.trials as f64);
    let days_lower_bound = (coordinated_days + timeouts as f64 * max_rounds as f64 * period) / trials as f64;
    Ok(BaselineReport { n_big: config.n_big(), readjust_prob, max_rounds, trials, periods, timeouts, days_lower_bound })
}
