//! Exact expected stage-two durations.
//!
//! `T_n` is the expected number of days needed to hand out unique IDs to a
//! set of `n` agents by recursive fair-coin splitting. With
//! `Prob(r) = C(n, r) / 2^n` it satisfies, for `n >= 2`,
//!
//! ```text
//! T_n = 1 + 2 * sum_{r=0}^{n} Prob(r) T_r,      T_0 = T_1 = 0.
//! ```
//!
//! `T_n` appears on both sides through the `r = n` term; moving it over gives
//! `T_n = (2^{n-1} + sum_{r=2}^{n-1} C(n, r) T_r) / (2^{n-1} - 1)`, which is
//! what the table builder evaluates. All arithmetic is exact.

use std::io;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{AnalysisError, ModelError};

/// `T_0, T_1, ..., T_{n_max}` as exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactTimeTable {
    values: Vec<BigRational>,
}

impl ExactTimeTable {
    /// Builds the table up to and including `n_max`.
    pub fn compute(n_max: usize) -> Self {
        let mut values = vec![BigRational::zero(); n_max.max(1) + 1];
        // Running common denominator of T_2..T_{n-1}, and each T_r's numerator
        // rescaled onto it.
        let mut common = BigInt::one();
        let mut scaled: Vec<BigInt> = vec![BigInt::zero(); n_max.max(1) + 1];
        let mut row: Vec<BigUint> = vec![BigUint::one(), BigUint::one()]; // C(1, .)
        for n in 2..=n_max {
            // Pascal row n
            let mut next = Vec::with_capacity(n + 1);
            next.push(BigUint::one());
            for r in 1..n {
                next.push(&row[r - 1] + &row[r]);
            }
            next.push(BigUint::one());
            row = next;

            let mut weighted = BigInt::zero();
            for r in 2..n {
                if !scaled[r].is_zero() {
                    weighted += BigInt::from(row[r].clone()) * &scaled[r];
                }
            }
            let half = BigInt::one() << (n - 1);
            let numer = &half * &common + weighted;
            let denom = &common * (&half - 1u32);
            let t_n = BigRational::new(numer, denom);

            let d = t_n.denom();
            let new_common = common.lcm(d);
            let factor = &new_common / &common;
            if !factor.is_one() {
                for s in scaled.iter_mut().take(n) {
                    if !s.is_zero() {
                        *s *= &factor;
                    }
                }
            }
            scaled[n] = t_n.numer() * (&new_common / d);
            common = new_common;
            values[n] = t_n;
        }
        values.truncate(n_max + 1);
        Self { values }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.values.get(n)
    }

    /// Largest `n` in the table.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn as_f64(&self, n: usize) -> Option<f64> {
        self.values.get(n).and_then(|v| v.to_f64())
    }

    pub fn coefficients(&self) -> SeriesCoefficients {
        SeriesCoefficients { coeffs: self.values.clone() }
    }

    /// CSV with columns `n,T_n_numerator,T_n_denominator,T_n_float`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), ModelError> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["n", "T_n_numerator", "T_n_denominator", "T_n_float"])?;
        for (n, v) in self.values.iter().enumerate() {
            wtr.write_record([
                n.to_string(),
                v.numer().to_string(),
                v.denom().to_string(),
                format!("{}", v.to_f64().unwrap_or(f64::NAN)),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Exact `T_n`.
pub fn exact_expected_time(n: i64) -> Result<BigRational, AnalysisError> {
    if n < 0 {
        return Err(AnalysisError::NegativeSize(n));
    }
    let table = ExactTimeTable::compute(n as usize);
    Ok(table.values[n as usize].clone())
}

/// Coefficients of the generating function `T(x) = sum_r T_r x^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    pub coeffs: Vec<BigRational>,
}

/// Truncated product of two power series.
fn series_mul(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `1 / (1 - c x)` up to `x^order`.
fn geometric(ratio: &BigRational, order: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(order + 1);
    let mut p = BigRational::one();
    for _ in 0..=order {
        out.push(p.clone());
        p *= ratio;
    }
    out
}

/// Right-hand side of the functional equation
/// `T(x) = x^2 / (1 - x) + 4 / (2 - x) * T(x / (2 - x))`, expanded through
/// `x^order`. The composition uses `x / (2 - x) = sum_{k>=1} x^k / 2^k`.
pub fn functional_equation_rhs(coeffs: &SeriesCoefficients, order: usize) -> Result<Vec<BigRational>, AnalysisError> {
    if order >= coeffs.coeffs.len() {
        return Err(AnalysisError::OrderTooLarge { order, available: coeffs.coeffs.len().saturating_sub(1) });
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let inv_one_minus_half_x = geometric(&half, order);

    // u = x/(2-x) = (x/2) / (1 - x/2)
    let mut x_over_two = vec![BigRational::zero(); order + 1];
    if order >= 1 {
        x_over_two[1] = half.clone();
    }
    let u = series_mul(&x_over_two, &inv_one_minus_half_x, order);

    let mut composed = vec![BigRational::zero(); order + 1];
    let mut u_pow = vec![BigRational::zero(); order + 1];
    u_pow[0] = BigRational::one();
    for t_r in coeffs.coeffs.iter().take(order + 1) {
        if !t_r.is_zero() {
            for (c, p) in composed.iter_mut().zip(&u_pow) {
                *c += t_r * p;
            }
        }
        u_pow = series_mul(&u_pow, &u, order);
    }

    // 4/(2-x) = 2/(1-x/2)
    let prefactor: Vec<BigRational> = inv_one_minus_half_x.iter().map(|c| c * BigInt::from(2)).collect();
    let mut rhs = series_mul(&prefactor, &composed, order);
    for c in rhs.iter_mut().skip(2) {
        *c += BigRational::one();
    }
    Ok(rhs)
}

/// True iff both sides of the functional equation agree exactly on the
/// coefficients `0..=order`.
pub fn verify_functional_equation(coeffs: &SeriesCoefficients, order: usize) -> Result<bool, AnalysisError> {
    let rhs = functional_equation_rhs(coeffs, order)?;
    Ok(rhs.iter().zip(&coeffs.coeffs).all(|(r, l)| r == l))
}

/// Ordinary least-squares line through `(n, T_n)` for `n_min..=n_max`.
/// The sums are exact; only the result is rounded to `f64`.
pub fn linear_fit(table: &ExactTimeTable, n_min: usize, n_max: usize) -> Result<(f64, f64), AnalysisError> {
    if n_max > table.n_max() || n_min > n_max {
        if n_min <= n_max {
            return Err(AnalysisError::RangeOutOfTable { n_min, n_max, len: table.values.len() });
        }
        return Err(AnalysisError::TooFewPoints(0));
    }
    let m = n_max - n_min + 1;
    if m < 2 {
        return Err(AnalysisError::TooFewPoints(m));
    }
    let mut sx = BigRational::zero();
    let mut sxx = BigRational::zero();
    let mut sy = BigRational::zero();
    let mut sxy = BigRational::zero();
    for n in n_min..=n_max {
        let x = BigRational::from_integer(BigInt::from(n));
        let y = &table.values[n];
        sxy += &x * y;
        sy += y;
        sxx += &x * &x;
        sx += x;
    }
    let mm = BigRational::from_integer(BigInt::from(m));
    let denom = &mm * &sxx - &sx * &sx;
    let slope = (&mm * &sxy - &sx * &sy) / &denom;
    let intercept = (&sy - &slope * &sx) / &mm;
    Ok((slope.to_f64().unwrap_or(f64::NAN), intercept.to_f64().unwrap_or(f64::NAN)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_values() {
        assert_eq!(exact_expected_time(0).unwrap(), q(0, 1));
        assert_eq!(exact_expected_time(1).unwrap(), q(0, 1));
        assert_eq!(exact_expected_time(2).unwrap(), q(2, 1));
        assert_eq!(exact_expected_time(3).unwrap(), q(10, 3));
        assert_eq!(exact_expected_time(4).unwrap(), q(100, 21));
        assert!(exact_expected_time(-1).is_err());
    }

    #[test]
    fn table_of_zero_and_one() {
        assert_eq!(ExactTimeTable::compute(0).values(), &[q(0, 1)]);
        assert_eq!(ExactTimeTable::compute(1).values(), &[q(0, 1), q(0, 1)]);
    }

    // Unrearranged recursion, with T_n on both sides and direct rational sums.
    #[test]
    fn recursion_identity_holds_exactly() {
        let table = ExactTimeTable::compute(40);
        let v = table.values();
        for n in 2..=40usize {
            let two_n = BigInt::one() << n;
            let mut binom = BigInt::one();
            let mut sum_sym = BigRational::zero();
            let mut sum_half = BigRational::zero();
            for r in 0..=n {
                let p = BigRational::new(binom.clone(), two_n.clone());
                sum_sym += &p * (&v[r] + &v[n - r]);
                sum_half += &p * &v[r];
                binom = binom * BigInt::from(n - r) / BigInt::from(r + 1);
            }
            assert_eq!(v[n], BigRational::one() + &sum_sym, "n = {n}");
            assert_eq!(sum_sym, &sum_half * BigInt::from(2), "symmetry at n = {n}");
        }
    }

    #[test]
    fn strictly_increasing_and_positive() {
        let table = ExactTimeTable::compute(60);
        for n in 2..60 {
            assert!(table.values()[n] > BigRational::zero());
            assert!(table.values()[n + 1] > table.values()[n]);
        }
    }

    #[test]
    fn growth_band() {
        let table = ExactTimeTable::compute(200);
        for n in 10..=200 {
            let ratio = table.as_f64(n).unwrap() / n as f64;
            assert!((1.30..=1.45).contains(&ratio), "n = {n}: {ratio}");
            if n >= 25 {
                assert!((1.40..=1.48).contains(&ratio), "n = {n}: {ratio}");
            }
        }
    }

    #[test]
    fn functional_equation_low_orders() {
        let c = ExactTimeTable::compute(12).coefficients();
        let rhs = functional_equation_rhs(&c, 2).unwrap();
        assert_eq!(rhs, vec![q(0, 1), q(0, 1), q(2, 1)]);
        assert!(verify_functional_equation(&c, 0).unwrap());
        assert!(verify_functional_equation(&c, 1).unwrap());
        assert!(verify_functional_equation(&c, 12).unwrap());
        assert!(verify_functional_equation(&c, 13).is_err());
    }

    #[test]
    fn functional_equation_detects_a_wrong_coefficient() {
        let mut c = ExactTimeTable::compute(12).coefficients();
        c.coeffs[7] += q(1, 1000);
        assert!(!verify_functional_equation(&c, 12).unwrap());
        assert!(verify_functional_equation(&c, 6).unwrap());
    }

    // With x^2/(1 - x/2) as the inhomogeneous term instead of x^2/(1 - x), the
    // two sides already differ at x^3 by 1 - 1/2.
    #[test]
    fn halved_geometric_source_term_does_not_fit() {
        let c = ExactTimeTable::compute(6).coefficients();
        let mut rhs = functional_equation_rhs(&c, 6).unwrap();
        for (k, r) in rhs.iter_mut().enumerate().skip(2) {
            *r -= BigRational::one();
            *r += BigRational::new(BigInt::one(), BigInt::one() << (k - 2));
        }
        assert_eq!(rhs[2], c.coeffs[2]);
        assert_eq!(&c.coeffs[3] - &rhs[3], q(1, 2));
    }

    #[test]
    fn two_point_fit_is_exact() {
        let table = ExactTimeTable::compute(3);
        let (slope, intercept) = linear_fit(&table, 2, 3).unwrap();
        assert!((slope - 4.0 / 3.0).abs() < 1e-15);
        assert!((intercept + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fit_errors() {
        let table = ExactTimeTable::compute(5);
        assert_eq!(linear_fit(&table, 3, 3), Err(AnalysisError::TooFewPoints(1)));
        assert!(linear_fit(&table, 1, 6).is_err());
    }

    #[test]
    fn tail_slope_tends_to_inverse_ln2() {
        let table = ExactTimeTable::compute(200);
        let (slope, _) = linear_fit(&table, 100, 200).unwrap();
        assert!((slope - std::f64::consts::LN_2.recip()).abs() < 1e-4);
    }

    #[test]
    fn csv_header_and_rows() {
        let mut buf = Vec::new();
        ExactTimeTable::compute(4).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,T_n_numerator,T_n_denominator,T_n_float");
        assert_eq!(lines[3], "2,2,1,2");
        assert!(lines[5].starts_with("4,100,21,4.76190476"));
    }
}
