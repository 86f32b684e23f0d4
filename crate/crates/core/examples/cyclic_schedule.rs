//! The terminal cyclic schedule: attendance pattern, payoffs and a scan of
//! short windows for every agent.

use camg::model::GameConfig;
use camg::sim::{payoff_audit, run_episode, validate_cyclic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=6u64 {
        let config = GameConfig::new(n, 42)?;
        let ep = run_episode(&config, 0)?;
        let horizon = 2 * config.n_agents();
        let report = validate_cyclic(&config, &ep.ids, horizon)?;
        println!(
            "N = {n}: A attendance {:?}, N wins per period: {}, 2m-window violations: {}",
            &report.attendance_a[..config.n_agents() as usize],
            report.exact_per_period,
            report.window_violations.len()
        );
        if let Some(v) = report.window_violations.first() {
            println!(
                "        e.g. agent {} wins {} times in the {} days from offset {}",
                v.agent,
                v.wins,
                2 * v.m,
                v.start
            );
        }
    }

    // whole-run payoff: lopsided days during coordination, then the optimum
    let config = GameConfig::new(4, 3)?;
    let ep = run_episode(&config, 0)?;
    let ledger = payoff_audit(&ep.transcript, &ep.choices)?;
    println!(
        "\nN = 4 coordination phase ({} days): mean payoff {} vs bound {}",
        ep.total_days(),
        ledger.mean_payoff(),
        ledger.payoff_bound()
    );
    Ok(())
}
