//! The limit function `H*(y)` over one period of `log2 y`: its mean, the
//! tiny log-periodic wobble, and three independent views of the amplitude.

use std::f64::consts::LN_2;
use std::fs::File;

use camg::asymptotics::{
    compute_alpha, h_star_extended, oscillation_profile, oscillation_profile_extended, poisson_reconstruction,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1024);
    let profile = oscillation_profile(samples)?;
    println!("samples          {samples}");
    println!("mean H*          {:.15}", profile.mean);
    println!("1 / ln 2         {:.15}", 1.0 / LN_2);
    println!("half peak-peak   {:.6e}", profile.amplitude_minmax);

    let alpha = compute_alpha();
    println!("alpha (closed)   {:.6e}", alpha.alpha_closed_form);
    println!("alpha (DFT)      {:.6e}", alpha.amplitude_dft);
    println!("alpha (Fourier)  {:.6e}", alpha.amplitude_fourier);
    println!("relative         {:.6e}", alpha.relative_amplitude);

    let wide = oscillation_profile_extended(256)?;
    let h1 = wide.harmonic(1).norm();
    println!("2nd / 1st harmonic (256-bit samples): {:.3e}", wide.harmonic(2).norm() / h1);

    println!("\n{:>6}  {:>22}  {:>10}", "log2 y", "H*(y)", "Poisson - direct");
    for i in 0..8 {
        let y = (i as f64 / 8.0).exp2();
        let direct = h_star_extended(y)?;
        println!(
            "{:>6.3}  {:>22}  {:>10.1e}",
            y.log2(),
            direct.to_decimal(18),
            poisson_reconstruction(y, 2) - direct.to_f64()
        );
    }

    if let Some(path) = std::env::args().nth(2) {
        profile.write_csv(File::create(&path)?)?;
        println!("profile written to {path}");
    }
    Ok(())
}
