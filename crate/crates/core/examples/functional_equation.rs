//! Checks the generating-function identity
//!
//! ```text
//! T(x) = x^2 / (1 - x) + 4 / (2 - x) * T(x / (2 - x))
//! ```
//!
//! coefficient by coefficient in exact rational arithmetic.

use camg::exact::{functional_equation_rhs, verify_functional_equation, ExactTimeTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order = 12;
    let coeffs = ExactTimeTable::compute(order).coefficients();
    let rhs = functional_equation_rhs(&coeffs, order)?;
    for (r, (lhs, rhs)) in coeffs.coeffs.iter().zip(&rhs).enumerate() {
        let mark = if lhs == rhs { "ok" } else { "MISMATCH" };
        println!("x^{r:<2}  T_r = {lhs:<28} rhs = {rhs:<28} {mark}");
    }
    println!("identity holds through order {order}: {}", verify_functional_equation(&coeffs, order)?);
    Ok(())
}
