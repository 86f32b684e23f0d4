//! Monte Carlo driver and the checks built on it.

mod baseline;
mod cyclic;
mod episode;
mod payoff;
mod seed;
mod stats;

pub use baseline::{
    baseline_from_phases, baseline_phase_shift, period_attendance, run_baseline, template_is_a, BaselineReport,
    DEFAULT_MAX_ROUNDS, DEFAULT_READJUST_PROB,
};
pub use cyclic::{canonical_ids, validate_cyclic, CyclicReport, WindowViolation};
pub use episode::{
    default_day_cap, protocol_streams, run_episode, run_episode_with, run_stage_one, EpisodeOptions, EpisodeResult,
    SplitEvent, StopAt,
};
pub use payoff::{payoff_audit, PayoffLedger};
pub use seed::{agent_rng, stream_seed, BASELINE_DOMAIN, PROTOCOL_DOMAIN};
pub use stats::{run_monte_carlo, split_durations, stage_one_scaling, DurationAccumulator, McStats, MonteCarloReport};
