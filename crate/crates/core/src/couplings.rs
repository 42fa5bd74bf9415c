//! Z-dependent model constants: the intermediate functions Lambda1-3,
//! the correction couplings delta1-3, and the basis exponents derived
//! from them.
//!
//! The couplings are small differences of order-one quantities; naive
//! evaluation of the printed formulas loses up to ten digits at low Z
//! (delta1(1) is ~6e-15 while every intermediate is ~1). The production
//! path below therefore evaluates algebraically equivalent factored
//! forms in which every subtraction is between quantities of the same
//! small magnitude. The naive printed forms are kept as
//! [`deltas_from_lambdas`], and an arbitrary-precision evaluation of the
//! printed forms backs the checked-in reference table that the tests
//! compare against.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingsError {
    #[error("nuclear charge {z} outside the supported range [{lo}, {hi}]")]
    UnsupportedCharge { z: i32, lo: i32, hi: i32 },
    #[error("negative radicand in {what}: {value:e}")]
    NegativeRadicand { what: &'static str, value: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
}

/// Fixed model inputs. The values are deliberately the truncated ones
/// used to produce the embedded reference tables, not current CODATA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// fine structure constant (dimensionless)
    pub alpha: f64,
    /// hydrogen ground-state Lamb shift, 0.5556 alpha^3 (hartree)
    pub delta_1s: f64,
    /// 2S-2P Lamb shift, 0.4138 alpha^3 (hartree)
    pub delta_2s: f64,
}

impl PhysicalConstants {
    pub fn standard() -> Self {
        let alpha = 1.0 / 137.036;
        let a3 = alpha * alpha * alpha;
        Self {
            alpha,
            delta_1s: 0.5556 * a3,
            delta_2s: 0.4138 * a3,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::standard()
    }
}

/// The three intermediate functions plus the step index they were
/// evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSet {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub kdot: i32,
}

/// The three correction couplings for one nuclear charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSet {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl DeltaSet {
    /// All couplings off: reduces every corrected expression to its
    /// uncorrected counterpart.
    pub const ZERO: DeltaSet = DeltaSet {
        d1: 0.0,
        d2: 0.0,
        d3: 0.0,
    };
}

/// Non-integer powers of the improved single-particle orbitals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisExponents {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
    pub c: f64,
}

impl BasisExponents {
    pub const ZERO: BasisExponents = BasisExponents {
        a0: 0.0,
        a1: 0.0,
        b0: 0.0,
        b1: 0.0,
        c: 0.0,
    };
}

pub const Z_MIN: i32 = 1;
pub const Z_MAX: i32 = 99;

/// 1 - sqrt(1 - x) without cancellation for small x.
#[inline]
pub(crate) fn one_minus_sqrt1m(x: f64) -> f64 {
    x / (1.0 + (1.0 - x).sqrt())
}

/// Step index: floor(alpha |Z| + 1). The bracket is read as the floor
/// function; any reading gives 1 on the supported charge range.
pub fn kdot(z: i32) -> Result<i32, CouplingsError> {
    if z < 1 || z > 137 {
        return Err(CouplingsError::UnsupportedCharge { z, lo: 1, hi: 137 });
    }
    let alpha = PhysicalConstants::standard().alpha;
    Ok((alpha * f64::from(z) + 1.0).floor() as i32)
}

fn check_z(z: i32) -> Result<(), CouplingsError> {
    if z < Z_MIN || z > Z_MAX {
        return Err(CouplingsError::UnsupportedCharge {
            z,
            lo: Z_MIN,
            hi: Z_MAX,
        });
    }
    Ok(())
}

/// Shared low-level pieces of the coupling evaluation.
///
/// Everything is specialized to kdot = 1, which holds over the whole
/// supported range (alpha * 99 < 1); the kdot value is still computed
/// and carried for the record.
struct CouplingParts {
    kdot: i32,
    /// u_p = 2 alpha Z / sqrt(D_p); the intermediates are
    /// Lambda_p = (u_p - 1)^2
    u1: f64,
    u2: f64,
    /// u1 - 2 and u2 - 2 evaluated without cancellation
    u1m2: f64,
    u2m2: f64,
    /// d = Lambda2 - Lambda1 via the factored exact-difference form
    d: f64,
    /// G enters Lambda3 = (G - 1)^2
    g_big: f64,
    /// G - 4 evaluated without cancellation
    gm4: f64,
}

fn coupling_parts(z: i32) -> Result<CouplingParts, CouplingsError> {
    check_z(z)?;
    let k = kdot(z).expect("in range");
    debug_assert_eq!(k, 1, "supported charges all sit on the first step");
    let pc = PhysicalConstants::standard();
    let zf = f64::from(z);
    let az = pc.alpha * zf;
    let x = az * az;
    let s1x = (1.0 - x).sqrt();
    // w = 2 - 2 sqrt(1 - x)
    let w = 2.0 * one_minus_sqrt1m(x);
    let a1shift = 1.5 * pc.delta_1s * pc.alpha * pc.alpha * zf.powi(3);
    let a2shift = 0.5 * pc.delta_1s * pc.alpha * pc.alpha * zf.powi(3);
    let d1_den = w + a1shift;
    let d2_den = w - a2shift;
    if d1_den <= 0.0 || d2_den <= 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "Lambda denominator",
            value: d1_den.min(d2_den),
        });
    }
    let r1 = d1_den.sqrt();
    let r2 = d2_den.sqrt();
    let u1 = 2.0 * az / r1;
    let u2 = 2.0 * az / r2;
    // Lambda2 - Lambda1 = (u2 - u1)(u1 + u2 - 2); the rate difference
    // D1 - D2 = 2 Delta1S alpha^2 Z^3 is exact, so no digit is lost.
    let u_diff = 2.0 * az * (a1shift + a2shift) / (r1 * r2 * (r1 + r2));
    let d = u_diff * ((u1 - 1.0) + (u2 - 1.0));
    // u_p - 2 = -2 (D_p - x) / (sqrt(D_p) (alpha Z + sqrt(D_p))),
    // with D_p - x = x^2/(1+sqrt(1-x))^2 +- shift
    let quad = (x / (1.0 + s1x)) * (x / (1.0 + s1x));
    let u1m2 = -2.0 * (quad + a1shift) / (r1 * (az + r1));
    let u2m2 = -2.0 * (quad - a2shift) / (r2 * (az + r2));
    // Lambda3 = (G - 1)^2 with G = (kdot+1)^2 g / sqrt((kdot+1)^4 - 8 Delta2S alpha^2 g^2),
    // g = 2 kdot + 1 + sqrt(Lambda1) = u1 + 2 at kdot = 1.
    let g = u1 + 2.0;
    let eps2 = 8.0 * pc.delta_2s * pc.alpha * pc.alpha;
    let h2 = 16.0 - eps2 * g * g;
    if h2 <= 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "Lambda3 radicand",
            value: h2,
        });
    }
    let rh = h2.sqrt();
    let g_big = 4.0 * g / rh;
    // G - 4 = 4 (g - sqrt(h2)) / sqrt(h2); g^2 - h2 = (g-4)(g+4) + eps2 g^2
    let gm4 = 4.0 * (u1m2 * (g + 4.0) + eps2 * g * g) / ((g + rh) * rh);
    Ok(CouplingParts {
        kdot: k,
        u1,
        u2,
        u1m2,
        u2m2,
        d,
        g_big,
        gm4,
    })
}

/// The three intermediate functions.
pub fn lambdas(z: i32) -> Result<LambdaSet, CouplingsError> {
    let p = coupling_parts(z)?;
    let l1 = (p.u1 - 1.0) * (p.u1 - 1.0);
    let l2 = (p.u2 - 1.0) * (p.u2 - 1.0);
    let l3 = (p.g_big - 1.0) * (p.g_big - 1.0);
    Ok(LambdaSet {
        l1,
        l2,
        l3,
        kdot: p.kdot,
    })
}

/// The correction couplings, evaluated in the stated order
/// (delta1 feeds delta2 feeds delta3) through the factored forms.
pub fn deltas(z: i32) -> Result<DeltaSet, CouplingsError> {
    let p = coupling_parts(z)?;
    let d = p.d;
    if d <= 0.0 {
        return Err(CouplingsError::DegenerateInput(
            "Lambda2 - Lambda1 vanished; delta2 would divide by zero",
        ));
    }
    // sigma = S - 8 where S = Lambda2 - Lambda3 + 16:
    // Lambda2 - 1 = u2 (u2 - 2), Lambda3 - 9 = (G - 4)(G + 2)
    let sigma = p.u2 * p.u2m2 - p.gm4 * (p.g_big + 2.0);
    let s_big = 8.0 + sigma;
    let rad = s_big * s_big - 64.0 * d;
    if rad < 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "delta1 inner square root",
            value: rad,
        });
    }
    let rs = rad.sqrt();
    let den = s_big + rs;
    // delta1 = (S - sqrt(S^2 - 64 d))^2 / 2048 = 2 d^2 / den^2
    let d1 = 2.0 * (d / den) * (d / den);
    let sqrt_2d1 = 2.0 * d / den;
    let t = 16.0 * sqrt_2d1;
    // delta2 = 1/8 - (t - d)^2 / (1024 delta1), factored as
    // (2d - t)(3t - 2d)/(8 t^2) with 2d - t = 2d (den - 16)/den
    let den_m16 = sigma + (sigma * (s_big + 8.0) - 64.0 * d) / (rs + 8.0);
    let two_d_minus_t = 2.0 * d * (den_m16 / den);
    let d2 = two_d_minus_t * (3.0 * t - 2.0 * d) / (8.0 * t * t);
    let rad2 = 1.0 - 8.0 * d2;
    if rad2 < 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "delta3 square root of 1 - 8 delta2",
            value: rad2,
        });
    }
    // delta3 = (1/8) q^2 - Lambda1/8 = (q - sqrt(Lambda1))(q + sqrt(Lambda1))/8,
    // q = 2 - sqrt(1 - 8 delta2) - 2 sqrt(2 delta1), sqrt(Lambda1) = u1 - 1
    let q = 2.0 - rad2.sqrt() - 2.0 * sqrt_2d1;
    let q_minus = -p.u1m2 + one_minus_sqrt1m(8.0 * d2) - 2.0 * sqrt_2d1;
    let d3 = q_minus * (q + p.u1 - 1.0) / 8.0;
    let out = DeltaSet { d1, d2, d3 };
    validate_deltas(&out)?;
    Ok(out)
}

fn validate_deltas(d: &DeltaSet) -> Result<(), CouplingsError> {
    if d.d1 < 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "delta1 (must be non-negative for real B_p)",
            value: d.d1,
        });
    }
    let quarter = 0.25 - 2.0 * d.d2;
    if quarter < 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "0.25 - 2 delta2 (must be non-negative for real exponents)",
            value: quarter,
        });
    }
    Ok(())
}

/// Printed-form evaluation of the couplings from a raw Lambda set.
///
/// This is the formula in its printed form, with its cancellations; it exists
/// for documentation, for coarse cross-checks against the safe path,
/// and to surface the degenerate all-zero case as a hard error.
pub fn deltas_from_lambdas(l: &LambdaSet) -> Result<DeltaSet, CouplingsError> {
    let s = l.l2 - l.l3 + 16.0;
    let disc = s * s - 64.0 * l.l2 + 64.0 * l.l1;
    if disc < 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "delta1 inner square root",
            value: disc,
        });
    }
    let num = s - disc.sqrt();
    let d1 = num * num / 2048.0;
    if d1 == 0.0 {
        return Err(CouplingsError::DegenerateInput(
            "delta1 = 0 makes the 1024 delta1 denominator of delta2 vanish",
        ));
    }
    let inner = 16.0 * (2.0 * d1).sqrt() - l.l2 + l.l1;
    let d2 = 0.125 - inner * inner / (1024.0 * d1);
    let rad2 = 1.0 - 8.0 * d2;
    if rad2 < 0.0 {
        return Err(CouplingsError::NegativeRadicand {
            what: "delta3 square root of 1 - 8 delta2",
            value: rad2,
        });
    }
    let q = 2.0 - rad2.sqrt() - 2.0 * (2.0 * d1).sqrt();
    let d3 = 0.125 * q * q - l.l1 / 8.0;
    let out = DeltaSet { d1, d2, d3 };
    validate_deltas(&out)?;
    Ok(out)
}

/// Basis exponents from a coupling set.
///
/// A_p = -1/2 + sqrt((1 - sqrt(0.25 - 2 d2) - (-1)^p sqrt(2 d1))^2 - 2 d3),
/// B_p = (-1)^{p+1} sqrt(2 d1), C = 0.5 - sqrt(0.25 - 2 d2).
pub fn basis_exponents_from_deltas(d: &DeltaSet) -> Result<BasisExponents, CouplingsError> {
    validate_deltas(d)?;
    let sqrt_2d1 = (2.0 * d.d1).sqrt();
    let quarter = 0.25 - 2.0 * d.d2;
    // C = 0.5 - sqrt(0.25 - 2 d2) = 2 d2 / (0.5 + sqrt(...))
    let c = 2.0 * d.d2 / (0.5 + quarter.sqrt());
    let a_p = |sign: f64, what: &'static str| -> Result<f64, CouplingsError> {
        // inner - 1/2 = C - sign * sqrt(2 d1) exactly
        let small = c - sign * sqrt_2d1;
        let inner = 0.5 + small;
        let rad = inner * inner - 2.0 * d.d3;
        if rad < 0.0 {
            return Err(CouplingsError::NegativeRadicand { what, value: rad });
        }
        // A_p = -1/2 + sqrt(rad), hoisted to avoid the 0.5-scale subtraction:
        // rad - 1/4 = small (inner + 1/2) - 2 d3
        let num = small * (inner + 0.5) - 2.0 * d.d3;
        Ok(num / (0.5 + rad.sqrt()))
    };
    let a0 = a_p(1.0, "A_0 radicand")?;
    let a1 = a_p(-1.0, "A_1 radicand")?;
    Ok(BasisExponents {
        a0,
        a1,
        b0: -sqrt_2d1,
        b1: sqrt_2d1,
        c,
    })
}

/// Basis exponents for a nuclear charge.
pub fn basis_exponents(z: i32) -> Result<BasisExponents, CouplingsError> {
    basis_exponents_from_deltas(&deltas(z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Columns: Z,L1,L2,L3,d1,d2,d3,A0,A1,B0,B1,C at 20 significant
    /// digits, regenerated by `cargo run -p helike-oracle --bin gen-tables`.
    const REFERENCE_CSV: &str = include_str!("../data/couplings20.csv");

    fn reference_row(z: i32) -> Vec<f64> {
        for line in REFERENCE_CSV.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols[0].parse::<i32>().unwrap() == z {
                return cols[1..].iter().map(|s| s.parse().unwrap()).collect();
            }
        }
        panic!("no reference row for Z = {z}");
    }

    fn assert_rel(got: f64, want: f64, tol: f64, label: &str) {
        let denom = want.abs().max(f64::MIN_POSITIVE);
        let rel = (got - want).abs() / denom;
        assert!(rel < tol, "{label}: got {got:e}, want {want:e}, rel {rel:e}");
    }

    #[test]
    fn kdot_is_one_across_range() {
        assert_eq!(kdot(1).unwrap(), 1);
        assert_eq!(kdot(99).unwrap(), 1);
        // alpha * 137 = 0.99974 < 1, so even the last in-domain charge floors to 1
        assert_eq!(kdot(137).unwrap(), 1);
        assert!(kdot(0).is_err());
        assert!(kdot(138).is_err());
    }

    #[test]
    fn lambdas_match_reference() {
        for z in [1, 10] {
            let l = lambdas(z).unwrap();
            let r = reference_row(z);
            assert_rel(l.l1, r[0], 1e-13, &format!("L1({z})"));
            assert_rel(l.l2, r[1], 1e-13, &format!("L2({z})"));
            assert_rel(l.l3, r[2], 1e-13, &format!("L3({z})"));
        }
    }

    #[test]
    fn lambdas_are_nonnegative_everywhere() {
        for z in 1..=99 {
            let l = lambdas(z).unwrap();
            assert!(l.l1 >= 0.0 && l.l2 >= 0.0 && l.l3 >= 0.0, "Z={z}");
            assert_eq!(l.kdot, 1);
        }
    }

    #[test]
    fn deltas_match_reference_at_endpoints() {
        for z in [1, 99] {
            let d = deltas(z).unwrap();
            let r = reference_row(z);
            assert_rel(d.d1, r[3], 1e-12, &format!("d1({z})"));
            assert_rel(d.d2, r[4], 1e-12, &format!("d2({z})"));
            assert_rel(d.d3, r[5], 1e-12, &format!("d3({z})"));
        }
    }

    #[test]
    fn deltas_match_reference_everywhere() {
        for z in 1..=99 {
            let d = deltas(z).unwrap();
            let r = reference_row(z);
            assert_rel(d.d1, r[3], 1e-11, &format!("d1({z})"));
            assert_rel(d.d2, r[4], 1e-11, &format!("d2({z})"));
            assert_rel(d.d3, r[5], 1e-11, &format!("d3({z})"));
        }
    }

    #[test]
    fn deltas_small_at_low_z() {
        for z in 1..=10 {
            let d = deltas(z).unwrap();
            assert!(d.d1.abs() < 0.01, "d1({z}) = {}", d.d1);
            assert!(d.d2.abs() < 0.01, "d2({z}) = {}", d.d2);
            assert!(d.d3.abs() < 0.01, "d3({z}) = {}", d.d3);
        }
    }

    #[test]
    fn deltas_smooth_over_range() {
        // finite everywhere, and no step-to-step jump beyond what the
        // smooth Z dependence allows (delta1 turns over near Z = 92, so
        // monotonicity is not the right check)
        let mut prev = deltas(1).unwrap();
        for z in 2..=99 {
            let d = deltas(z).unwrap();
            for (name, v, pv) in [
                ("d1", d.d1, prev.d1),
                ("d2", d.d2, prev.d2),
                ("d3", d.d3, prev.d3),
            ] {
                assert!(v.is_finite(), "non-finite {name} at Z={z}");
                let step = (v - pv).abs() / v.abs().max(pv.abs());
                assert!(step < 0.75, "{name} jumps by {step:.2} at Z={z}");
            }
            prev = d;
        }
    }

    #[test]
    fn real_exponent_invariants() {
        for z in 1..=99 {
            let d = deltas(z).unwrap();
            assert!(0.25 - 2.0 * d.d2 >= 0.0, "Z={z}");
            assert!(d.d1 >= 0.0, "Z={z}");
        }
    }

    #[test]
    fn degenerate_lambda_input_is_an_error() {
        let zero = LambdaSet {
            l1: 0.0,
            l2: 0.0,
            l3: 0.0,
            kdot: 1,
        };
        match deltas_from_lambdas(&zero) {
            Err(CouplingsError::DegenerateInput(_)) => {}
            other => panic!("expected degenerate-input error, got {other:?}"),
        }
    }

    #[test]
    fn printed_form_agrees_coarsely_with_safe_path() {
        // The printed formulas lose ~10 digits to cancellation at low Z;
        // the comparison documents that both compute the same object.
        for z in [1, 5, 20, 60, 99] {
            let safe = deltas(z).unwrap();
            let printed = deltas_from_lambdas(&lambdas(z).unwrap()).unwrap();
            assert_rel(printed.d1, safe.d1, 1e-6, &format!("printed d1({z})"));
            assert_rel(printed.d2, safe.d2, 1e-3, &format!("printed d2({z})"));
            assert_rel(printed.d3, safe.d3, 1e-4, &format!("printed d3({z})"));
        }
    }

    #[test]
    fn exponents_match_reference() {
        for z in [1, 2, 50, 99] {
            let e = basis_exponents(z).unwrap();
            let r = reference_row(z);
            assert_rel(e.a0, r[6], 1e-12, &format!("A0({z})"));
            assert_rel(e.a1, r[7], 1e-12, &format!("A1({z})"));
            assert_rel(e.b0, r[8], 1e-12, &format!("B0({z})"));
            assert_rel(e.b1, r[9], 1e-12, &format!("B1({z})"));
            assert_rel(e.c, r[10], 1e-12, &format!("C({z})"));
        }
    }

    #[test]
    fn exponents_zero_for_zero_deltas() {
        let e = basis_exponents_from_deltas(&DeltaSet::ZERO).unwrap();
        assert_eq!(e.a0, 0.0);
        assert_eq!(e.a1, 0.0);
        assert_eq!(e.b0, 0.0);
        assert_eq!(e.b1, 0.0);
        assert_eq!(e.c, 0.0);
    }

    #[test]
    fn exponent_structure_invariants() {
        for z in 1..=99 {
            let e = basis_exponents(z).unwrap();
            assert_eq!(e.b0, -e.b1, "B0 = -B1 must hold exactly (Z={z})");
            assert!(e.a0 > -0.5, "A0({z}) = {} breaks normalizability", e.a0);
            assert!(e.a1 > -0.5, "A1({z}) = {} breaks normalizability", e.a1);
        }
    }

    #[test]
    fn cancellation_safe_sqrt_matches_reference_to_ten_digits() {
        // both the safe rewrite and the naive form of 2 - 2 sqrt(1-x)
        // must agree with the high-precision value to >= 10 significant
        // digits at x = (alpha Z)^2
        let alpha = PhysicalConstants::standard().alpha;
        for z in 1..=99 {
            let x = (alpha * f64::from(z)).powi(2);
            let exact = helike_oracle::two_minus_two_sqrt(z as u32).to_f64();
            let safe = 2.0 * one_minus_sqrt1m(x);
            let naive = 2.0 - 2.0 * (1.0 - x).sqrt();
            let rel_safe = ((safe - exact) / exact).abs();
            let rel_naive = ((naive - exact) / exact).abs();
            assert!(rel_safe < 1e-14, "safe form off at Z={z}: {rel_safe:e}");
            assert!(rel_naive < 1e-10, "naive form off at Z={z}: {rel_naive:e}");
        }
    }

    #[test]
    fn out_of_range_charges_rejected() {
        assert!(matches!(
            deltas(0),
            Err(CouplingsError::UnsupportedCharge { .. })
        ));
        assert!(matches!(
            deltas(100),
            Err(CouplingsError::UnsupportedCharge { .. })
        ));
        assert!(lambdas(-3).is_err());
        assert!(basis_exponents(0).is_err());
    }
}
