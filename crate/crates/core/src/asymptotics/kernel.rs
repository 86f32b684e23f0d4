//! The logistic kernel `g(x) = e^x / (1 + e^x)^2` and its Fourier transform.
//!
//! Writing `H*(y) = sum_n g(n ln 2 + ln y)` and applying Poisson summation
//! turns the log-periodic oscillation of `H*` into the values of
//! `g~(k / ln 2)`, which decay like `exp(-2 pi^2 |k| / ln 2)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::summation::CompensatedSum;

/// Half-width of the integration window. `int_{|x| > L} g = 2 / (1 + e^L)`,
/// which is below `1e-20` for `L = 48`.
pub const KERNEL_HALF_WIDTH: f64 = 48.0;

/// `e^x / (1 + e^x)^2`, evaluated without overflow for large `|x|`.
pub fn logistic_kernel(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    let d = 1.0 + e;
    e / (d * d)
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod estimate, its difference from the embedded 7-point
/// Gauss rule, and the Kronrod estimate of `int |f|`.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let dx = half * XGK[i];
        let (lo, hi) = (f(center - dx), f(center + dx));
        let pair = lo + hi;
        kronrod += pair * WGK[i];
        abs += (lo.norm() + hi.norm()) * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).norm(), abs * half.abs())
}

/// Error estimates below this multiple of `eps * int |f|` are roundoff.
const ROUNDOFF_FACTOR: f64 = 4.0;

fn adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
    let (value, err, abs) = gk15(f, a, b);
    if err <= tol.max(ROUNDOFF_FACTOR * f64::EPSILON * abs) || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(f, a, mid, 0.5 * tol, depth - 1) + adaptive(f, mid, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod integral of a complex-valued function over `[a, b]`,
/// started from `panels` equal pieces.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize, abs_tol: f64) -> Complex64 {
    let width = (b - a) / panels as f64;
    let per_panel = abs_tol / panels as f64;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let v = adaptive(&f, lo, lo + width, per_panel, 16);
        re.add(v.re);
        im.add(v.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `g~(kappa) = int g(x) exp(2 pi i kappa x) dx`, by numerical quadrature.
/// `g` is even, so this is `2 int_0^L g(x) cos(2 pi kappa x) dx`.
pub fn g_tilde_numeric(kappa: f64) -> Complex64 {
    let w = 2.0 * PI * kappa;
    let panels = (KERNEL_HALF_WIDTH * (1.0 + kappa.abs())).ceil() as usize;
    let half =
        integrate(|x| Complex64::new(logistic_kernel(x) * (w * x).cos(), 0.0), 0.0, KERNEL_HALF_WIDTH, panels, 0.5e-19);
    half * 2.0
}
