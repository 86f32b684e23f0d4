//! Stage one grows extremely slowly with the number of agents.

use camg::sim::stage_one_scaling;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(200);
    let ns = [10u64, 100, 1000, 10_000, 100_000];
    println!("{:>8} {:>8} {:>8} {:>10}", "N", "mean", "+-", "ln ln N");
    for (n, s) in stage_one_scaling(&ns, trials, 17)? {
        println!("{n:>8} {:>8.3} {:>8.3} {:>10.3}", s.mean, s.std_error, (n as f64).ln().ln());
    }
    Ok(())
}
