use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::episode::{run_episode, run_stage_one, SplitEvent};
use crate::error::SimError;
use crate::model::GameConfig;

/// Summary of integer-valued durations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McStats {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    pub histogram: BTreeMap<u64, u64>,
}

/// Merge-only accumulator. Sums are exact integers, so merging in any order
/// gives bit-identical statistics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DurationAccumulator {
    count: u64,
    sum: u128,
    sum_sq: u128,
    histogram: BTreeMap<u64, u64>,
}

impl DurationAccumulator {
    pub fn push(&mut self, value: u64) {
        self.count += 1;
        self.sum += value as u128;
        self.sum_sq += (value as u128) * (value as u128);
        *self.histogram.entry(value).or_default() += 1;
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn stats(&self) -> Option<McStats> {
        if self.count == 0 {
            return None;
        }
        let n = self.count as f64;
        let mean = self.sum as f64 / n;
        // exact integer numerator for the sample variance
        let var = if self.count > 1 {
            let num = self.count as i128 * self.sum_sq as i128 - (self.sum as i128) * (self.sum as i128);
            num as f64 / (n * (n - 1.0))
        } else {
            0.0
        };
        Some(McStats {
            trials: self.count,
            mean,
            std_error: (var.max(0.0) / n).sqrt(),
            histogram: self.histogram.clone(),
        })
    }
}

/// Splits a depth-first stage-two log into per-set durations: every set of
/// size `r >= 2` that was processed contributes one sample of its time to
/// hand out all `r` IDs.
pub fn split_durations(log: &[SplitEvent], root_size: u64) -> Result<Vec<(u64, u64)>, SimError> {
    fn walk(log: &[SplitEvent], pos: &mut usize, r: u64, out: &mut Vec<(u64, u64)>) -> Result<u64, SimError> {
        if r <= 1 {
            return Ok(0);
        }
        let mut days = 0;
        loop {
            let ev = log.get(*pos).ok_or_else(|| SimError::InvalidParameter("split log ended early".into()))?;
            if ev.set_size != r {
                return Err(SimError::InvalidParameter(format!(
                    "split log out of order: expected a set of {r}, found {}",
                    ev.set_size
                )));
            }
            *pos += 1;
            days += 1;
            let first = ev.j.min(r - ev.j);
            if first > 0 {
                days += walk(log, pos, first, out)?;
                days += walk(log, pos, r - first, out)?;
                break;
            }
        }
        out.push((r, days));
        Ok(days)
    }
    let mut out = Vec::new();
    let mut pos = 0;
    walk(log, &mut pos, root_size, &mut out)?;
    if pos != log.len() {
        return Err(SimError::InvalidParameter("split log has trailing events".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n_big: u64,
    pub master_seed: u64,
    pub stage_one: McStats,
    pub stage_two: McStats,
    /// Durations of every set split along the way, keyed by set size.
    pub per_set_size: BTreeMap<u64, McStats>,
}

#[derive(Default, Clone)]
struct Accumulators {
    stage_one: DurationAccumulator,
    stage_two: DurationAccumulator,
    per_size: BTreeMap<u64, DurationAccumulator>,
}

impl Accumulators {
    fn merge(mut self, other: Self) -> Self {
        self.stage_one = self.stage_one.merge(other.stage_one);
        self.stage_two = self.stage_two.merge(other.stage_two);
        for (k, v) in other.per_size {
            let mine = self.per_size.remove(&k).unwrap_or_default();
            self.per_size.insert(k, mine.merge(v));
        }
        self
    }
}

/// Runs `trials` seeded episodes (trial indices `0..trials`), possibly in
/// parallel, and aggregates stage durations.
pub fn run_monte_carlo(config: &GameConfig, trials: u64) -> Result<MonteCarloReport, SimError> {
    if trials == 0 {
        return Err(SimError::InvalidParameter("trials must be at least 1".into()));
    }
    let acc = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Accumulators, SimError> {
            let ep = run_episode(config, trial)?;
            let mut a = Accumulators::default();
            a.stage_one.push(ep.stage_one_days);
            a.stage_two.push(ep.stage_two_days);
            for (size, days) in split_durations(&ep.split_log, config.n_big() + 1)? {
                a.per_size.entry(size).or_default().push(days);
            }
            Ok(a)
        })
        .try_reduce(Accumulators::default, |a, b| Ok(a.merge(b)))?;
    Ok(MonteCarloReport {
        n_big: config.n_big(),
        master_seed: config.master_seed(),
        stage_one: acc.stage_one.stats().expect("trials >= 1"),
        stage_two: acc.stage_two.stats().expect("trials >= 1"),
        per_set_size: acc.per_size.iter().filter_map(|(k, v)| v.stats().map(|s| (*k, s))).collect(),
    })
}

/// Mean stage-one duration for each `N`.
pub fn stage_one_scaling(n_values: &[u64], trials: u64, master_seed: u64) -> Result<Vec<(u64, McStats)>, SimError> {
    if trials == 0 {
        return Err(SimError::InvalidParameter("trials must be at least 1".into()));
    }
    n_values
        .iter()
        .map(|&n| {
            let config = GameConfig::new(n, master_seed)?;
            let acc = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut a = DurationAccumulator::default();
                    a.push(run_stage_one(&config, t)?);
                    Ok::<_, SimError>(a)
                })
                .try_reduce(DurationAccumulator::default, |a, b| Ok(a.merge(b)))?;
            Ok((n, acc.stats().expect("trials >= 1")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(set_size: u64, j: u64) -> SplitEvent {
        SplitEvent { day: 0, set_size, first_id: 0, j }
    }

    #[test]
    fn accumulator_statistics() {
        let mut a = DurationAccumulator::default();
        for v in [1, 2, 3, 4] {
            a.push(v);
        }
        let s = a.stats().unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.std_error - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.histogram.get(&3), Some(&1));
    }

    #[test]
    fn merge_order_does_not_matter() {
        let mut a = DurationAccumulator::default();
        let mut b = DurationAccumulator::default();
        a.push(3);
        a.push(7);
        b.push(1);
        assert_eq!(a.clone().merge(b.clone()), b.merge(a));
    }

    #[test]
    fn parse_split_log() {
        // 6 -> 3|3 ; 3 -> 1|2 ; 2 -> 0 (repeat), 1|1 ; 3 -> 1|2 ; 2 -> 1|1
        let log = [ev(6, 3), ev(3, 1), ev(2, 0), ev(2, 1), ev(3, 2), ev(2, 1)];
        let d = split_durations(&log, 6).unwrap();
        assert_eq!(d, vec![(2, 2), (3, 3), (2, 1), (3, 2), (6, 6)]);
        assert!(split_durations(&log[..5], 6).is_err());
        assert!(split_durations(&log, 5).is_err());
    }

    #[test]
    fn zero_trials_rejected() {
        let c = GameConfig::new(1, 0).unwrap();
        assert!(run_monte_carlo(&c, 0).is_err());
    }

    #[test]
    fn reproducible_across_runs() {
        let c = GameConfig::new(3, 11).unwrap();
        let a = run_monte_carlo(&c, 300).unwrap();
        let b = run_monte_carlo(&c, 300).unwrap();
        assert_eq!(a, b);
        assert!(a.stage_two.histogram.keys().all(|&d| d >= 1));
        assert_eq!(a.per_set_size[&4].trials, 300);
    }
}
