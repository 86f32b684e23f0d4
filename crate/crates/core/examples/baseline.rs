//! Trial-and-error phase shifting versus the two-stage protocol.

use camg::model::GameConfig;
use camg::sim::{run_baseline, run_monte_carlo};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>12} {:>14} {:>9} {:>14}", "N", "protocol", "baseline >=", "timeouts", "mean periods");
    for n in [1u64, 2, 3, 5, 10] {
        let config = GameConfig::new(n, 8)?;
        let protocol = run_monte_carlo(&config, 5000)?;
        let base = run_baseline(&config, 0.1, 5000, 200)?;
        let periods = base.periods.as_ref().map_or("-".to_string(), |p| format!("{:.1}", p.mean));
        println!(
            "{n:>3} {:>12.2} {:>14.1} {:>9} {periods:>14}",
            protocol.stage_one.mean + protocol.stage_two.mean,
            base.days_lower_bound,
            base.timeouts
        );
    }
    println!("(days before the cyclic state; timed-out baseline runs count as the full budget)");
    Ok(())
}
