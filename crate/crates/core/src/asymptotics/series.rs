//! The one-sided series `H~(y)` and its two-sided log-periodic limit `H*(y)`.
//!
//! Both are sums of `y 2^s / (2^s y + 1)^2`; `H~` runs over `s >= 0` and
//! satisfies `H~(y) = y / (1 + y)^2 + H~(2y)`, while `H*` runs over all
//! integers and is periodic in `log2 y` with period 1.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::summation::{sum_smallest_first, CompensatedSum};
use crate::error::AnalysisError;

#[inline]
fn term(v: f64) -> f64 {
    let d = v + 1.0;
    v / (d * d)
}

fn check_positive(y: f64) -> Result<(), AnalysisError> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(AnalysisError::NonPositive(y))
    }
}

/// `sum_{s>=0} y 2^s / (2^s y + 1)^2`, stopped once the next term drops below
/// `tol` times the running sum.
pub fn h_tilde(y: f64, tol: f64) -> Result<f64, AnalysisError> {
    check_positive(y)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(AnalysisError::BadTolerance(tol));
    }
    let mut sum = CompensatedSum::new();
    let mut v = y;
    loop {
        let t = term(v);
        let current = sum.value();
        if current > 0.0 && t < tol * current {
            break;
        }
        sum.add(t);
        v *= 2.0;
        if !v.is_finite() {
            break;
        }
    }
    Ok(sum.value())
}

/// Range of `s` whose terms are kept so that the omitted tails stay below
/// `2^-margin` relative to the sum.
fn window(y: f64, margin: i32) -> (i32, i32) {
    let l = y.log2();
    let lo = (-(margin as f64) - l).floor() as i32;
    let hi = (margin as f64 - l).ceil() as i32;
    (lo, hi)
}

/// Two-sided sum `sum_{s in Z} y 2^s / (2^s y + 1)^2`.
///
/// Terms decay like `2^-|s - s0|` away from `s0 = -log2 y`; the window keeps
/// every term above `2^-62` of the peak (omitted mass below `1e-18`
/// relative), and the kept terms are added smallest first with compensation.
pub fn h_star(y: f64) -> Result<f64, AnalysisError> {
    check_positive(y)?;
    let (lo, hi) = window(y, 62);
    let terms: Vec<f64> = (lo..=hi).map(|s| term(y * 2f64.powi(s))).collect();
    Ok(sum_smallest_first(terms))
}

/// Fractional bits carried by [`h_star_extended`].
pub const EXTENDED_BITS: u32 = 256;

/// A nonnegative real stored as an integer multiple of `2^-EXTENDED_BITS`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn raw(&self) -> &BigInt {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.0)
    }

    /// `self - other`, rounded once to `f64`.
    pub fn diff_f64(&self, other: &Fixed) -> f64 {
        scaled_to_f64(&(&self.0 - &other.0))
    }

    /// Arithmetic mean, truncated to the fixed grid.
    pub fn mean(values: &[Fixed]) -> Fixed {
        let total: BigInt = values.iter().map(|v| &v.0).sum();
        Fixed(total / BigInt::from(values.len()))
    }

    /// Decimal expansion with `digits` digits after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let pow10 = BigInt::from(10u32).pow(digits as u32);
        let scaled = (&self.0 * &pow10) >> EXTENDED_BITS;
        let int_part = &scaled / &pow10;
        let frac = &scaled % &pow10;
        format!("{int_part}.{:0>width$}", frac.to_string(), width = digits)
    }
}

fn scaled_to_f64(v: &BigInt) -> f64 {
    // drop low bits first so the integer conversion is exact enough
    let bits = v.bits() as i64;
    let shift = (bits - 120).max(0) as u32;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top * 2f64.powi(shift as i32 - EXTENDED_BITS as i32)
}

/// `H*(y)` evaluated at the exact binary value of `y`, with every term carried
/// in 256-bit fixed point. Used to check the double-precision pipeline.
pub fn h_star_extended(y: f64) -> Result<Fixed, AnalysisError> {
    check_positive(y)?;
    // y = mantissa * 2^exponent exactly
    let (mantissa, exponent) = decompose(y);
    let m = BigInt::from(mantissa);
    let (lo, hi) = window(y, EXTENDED_BITS as i32 - 20);
    let mut total = BigInt::zero();
    for s in lo..=hi {
        let k = exponent + s;
        // term = u / (u + 1)^2 with u = m 2^k, written over integers
        let (num, den) = if k >= 0 {
            let u: BigInt = &m << k as u32;
            let d = &u + BigInt::one();
            (u, &d * &d)
        } else {
            let p = BigInt::one() << (-k) as u32;
            let d = &m + &p;
            (&m * &p, &d * &d)
        };
        total += (num << EXTENDED_BITS) / den;
    }
    Ok(Fixed(total))
}

fn decompose(y: f64) -> (u64, i32) {
    let bits = y.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    }
}
