//! Seeded Monte Carlo runs of the full protocol compared with the exact
//! expected stage-two times.

use camg::exact::ExactTimeTable;
use camg::model::GameConfig;
use camg::sim::{run_episode, run_monte_carlo};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let table = ExactTimeTable::compute(20);

    println!("{:>3} {:>10} {:>10} {:>8} {:>10} {:>6}", "N", "stage 1", "stage 2", "+-", "T_(N+1)", "z");
    for n in [1u64, 2, 3, 5, 7, 11, 19] {
        let config = GameConfig::new(n, 2024)?;
        let r = run_monte_carlo(&config, trials)?;
        let exact = table.as_f64(n as usize + 1).unwrap();
        let z = (r.stage_two.mean - exact) / r.stage_two.std_error;
        println!(
            "{n:>3} {:>10.4} {:>10.4} {:>8.4} {exact:>10.4} {z:>+6.2}",
            r.stage_one.mean, r.stage_two.mean, r.stage_two.std_error
        );
    }

    // every split of a smaller set inside a big run is also a sample of T_r
    let r = run_monte_carlo(&GameConfig::new(11, 9)?, trials)?;
    println!("\nper-set durations inside N = 11 runs:");
    for (size, s) in &r.per_set_size {
        println!(
            "  r = {size:>2}: {:>8.4} +- {:.4} (exact {:.4}, {} samples)",
            s.mean,
            s.std_error,
            table.as_f64(*size as usize).unwrap(),
            s.trials
        );
    }

    let ep = run_episode(&GameConfig::new(3, 1)?, 0)?;
    println!("\none episode, N = 3: {}", ep.to_json());
    Ok(())
}
