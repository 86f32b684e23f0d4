//! Exact expected stage-two durations `T_n`, the least-squares line through
//! the small-`n` values and the large-`n` slope.
//!
//! ```text
//! cargo run --release --example exact_times -- [n_max] [out.csv]
//! ```

use std::fs::File;

use camg::exact::{linear_fit, ExactTimeTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n_max: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);
    let table = ExactTimeTable::compute(n_max);

    println!("{:>4}  {:>24}  {:>10}", "n", "T_n", "T_n / n");
    for n in [2, 3, 4, 5, 8, 10, 20, 30, 50, 100, 150, 200] {
        if let (Some(v), Some(f)) = (table.get(n), table.as_f64(n)) {
            let exact = if v.denom().bits() < 40 { v.to_string() } else { format!("{f:.12}") };
            println!("{n:>4}  {exact:>24}  {:>10.6}", f / n as f64);
        }
    }

    for (lo, hi) in [(1, 30), (2, 30), (n_max / 2, n_max)] {
        match linear_fit(&table, lo, hi) {
            Ok((slope, intercept)) => println!("fit n={lo}..{hi}: T_n ~ {slope:.8} n {intercept:+.8}"),
            Err(e) => println!("fit n={lo}..{hi}: {e}"),
        }
    }
    println!("1 / ln 2 = {:.8}", std::f64::consts::LOG2_E);

    if let Some(path) = args.next() {
        table.write_csv(File::create(&path)?)?;
        println!("table written to {path}");
    }
    Ok(())
}
