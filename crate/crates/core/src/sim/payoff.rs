use num_rational::Ratio;
use serde::Serialize;

use crate::error::SimError;
use crate::model::{Choice, PublicTranscript};

/// Who won on which day. Winners are the attendees of the strictly smaller
/// restaurant; with an odd number of agents there is never a tie.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PayoffLedger {
    pub horizon: u64,
    /// Cumulative wins per agent.
    pub wins: Vec<u64>,
    pub winners_per_day: Vec<u64>,
    #[serde(skip)]
    won: Vec<Vec<bool>>,
}

impl PayoffLedger {
    pub fn n_agents(&self) -> usize {
        self.wins.len()
    }

    /// Average payoff per agent per day, exactly.
    pub fn mean_payoff(&self) -> Ratio<u64> {
        let total: u64 = self.wins.iter().sum();
        Ratio::new(total, self.n_agents() as u64 * self.horizon.max(1))
    }

    /// The upper bound `N / (2N + 1)`.
    pub fn payoff_bound(&self) -> Ratio<u64> {
        let n_agents = self.n_agents() as u64;
        Ratio::new((n_agents - 1) / 2, n_agents)
    }

    /// Wins of `agent` on days `start..start + len` (0-based day index).
    pub fn wins_in(&self, agent: usize, start: usize, len: usize) -> u64 {
        self.won[agent][start..start + len].iter().filter(|&&w| w).count() as u64
    }

    /// Ledger restricted to days `start..start + len` (0-based day index).
    pub fn window(&self, start: usize, len: usize) -> PayoffLedger {
        let won: Vec<Vec<bool>> = self.won.iter().map(|w| w[start..start + len].to_vec()).collect();
        PayoffLedger {
            horizon: len as u64,
            wins: won.iter().map(|w| w.iter().filter(|&&x| x).count() as u64).collect(),
            winners_per_day: self.winners_per_day[start..start + len].to_vec(),
            won,
        }
    }
}

/// Tallies payoffs from ground-truth choices (`choices[i][d]` is agent `i` on
/// day `d + 1`), cross-checking them against the published attendance.
pub fn payoff_audit(transcript: &PublicTranscript, choices: &[Vec<Choice>]) -> Result<PayoffLedger, SimError> {
    let horizon = transcript.len();
    if choices.iter().any(|c| c.len() < horizon) {
        return Err(SimError::InvalidParameter("choice history shorter than the transcript".into()));
    }
    let mut won = vec![vec![false; horizon]; choices.len()];
    let mut winners_per_day = Vec::with_capacity(horizon);
    for (d, record) in transcript.days().iter().enumerate() {
        let in_a = choices.iter().filter(|c| c[d] == Choice::A).count() as u64;
        if in_a != record.attendance_a || record.total() != choices.len() as u64 {
            return Err(SimError::InvalidParameter(format!("choices disagree with attendance on day {}", d + 1)));
        }
        let minority = record.minority();
        let mut winners = 0;
        for (i, c) in choices.iter().enumerate() {
            if c[d] == minority {
                won[i][d] = true;
                winners += 1;
            }
        }
        winners_per_day.push(winners);
    }
    let wins = won.iter().map(|w| w.iter().filter(|&&x| x).count() as u64).collect();
    Ok(PayoffLedger { horizon: horizon as u64, wins, winners_per_day, won })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DayRecord;
    use Choice::{A, B};

    #[test]
    fn three_agent_cycle() {
        // ID0 always A; ID1 A on day 1; ID2 A on day 3
        let choices = vec![vec![A, A, A], vec![A, B, B], vec![B, B, A]];
        let t = PublicTranscript::from_days(vec![DayRecord::new(2, 1), DayRecord::new(1, 2), DayRecord::new(2, 1)]);
        let ledger = payoff_audit(&t, &choices).unwrap();
        assert_eq!(ledger.wins, vec![1, 1, 1]);
        assert_eq!(ledger.mean_payoff(), Ratio::new(1, 3));
        assert_eq!(ledger.mean_payoff(), ledger.payoff_bound());
        assert!(ledger.winners_per_day.iter().all(|&w| w == 1));
    }

    #[test]
    fn lopsided_day_has_few_winners() {
        let choices = vec![vec![A], vec![A], vec![A], vec![A], vec![B]];
        let t = PublicTranscript::from_days(vec![DayRecord::new(4, 1)]);
        let ledger = payoff_audit(&t, &choices).unwrap();
        assert_eq!(ledger.winners_per_day, vec![1]);
        assert!(ledger.mean_payoff() < ledger.payoff_bound());
    }

    #[test]
    fn inconsistent_choices_rejected() {
        let choices = vec![vec![A], vec![A], vec![B]];
        let t = PublicTranscript::from_days(vec![DayRecord::new(1, 2)]);
        assert!(payoff_audit(&t, &choices).is_err());
    }
}
