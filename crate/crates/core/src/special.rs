//! Gamma-function helpers backing the correlated-integral kernel.

#![allow(clippy::excessive_precision)] // textbook coefficients kept verbatim

/// Lanczos approximation (g = 7, 9 coefficients).
///
/// Relative error below ~2e-15 for positive arguments, which is what the
/// integral kernel needs: all gamma arguments there are bounded by
/// i + j + k + 6 plus the series index, and stay well away from the poles.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // Reflection keeps accuracy for the tiny positive shape parameters
        // that show up when the orbital exponents A_p go slightly negative.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma function for x > 0.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Binomial coefficient C(n, k) as f64, exact for the small n used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc = 1.0;
    for step in 0..k {
        acc = acc * f64::from(n - step) / f64::from(step + 1);
    }
    acc
}
