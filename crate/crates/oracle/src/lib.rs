//! High-precision reference evaluations for the coupling constants.
//!
//! Everything here runs in software arbitrary precision (~115 decimal
//! digits) using the formulas in their naive printed form. The
//! double-precision production path in `helike` uses cancellation-safe
//! rewrites instead; these values are the independent check that those
//! rewrites are faithful.

use astro_float::{BigFloat, RoundingMode};

/// Working mantissa size. 384 bits is ~115 decimal digits, leaving a
/// huge margin over the ~12 digits lost to cancellation in the naive
/// delta formulas.
pub const PREC: usize = 384;

const RM: RoundingMode = RoundingMode::ToEven;

/// Thin arithmetic wrapper so the physics formulas read naturally.
#[derive(Clone, Debug)]
pub struct Hp(BigFloat);

impl Hp {
    pub fn from_f64(v: f64) -> Self {
        Hp(BigFloat::from_f64(v, PREC))
    }

    pub fn from_u64(v: u64) -> Self {
        Hp(BigFloat::from_u64(v, PREC))
    }

    /// Exact decimal ratio p / q, e.g. `ratio(5556, 10000)` for 0.5556.
    pub fn ratio(p: u64, q: u64) -> Self {
        Hp(BigFloat::from_u64(p, PREC).div(&BigFloat::from_u64(q, PREC), PREC, RM))
    }

    pub fn add(&self, rhs: &Hp) -> Hp {
        Hp(self.0.add(&rhs.0, PREC, RM))
    }

    pub fn sub(&self, rhs: &Hp) -> Hp {
        Hp(self.0.sub(&rhs.0, PREC, RM))
    }

    pub fn mul(&self, rhs: &Hp) -> Hp {
        Hp(self.0.mul(&rhs.0, PREC, RM))
    }

    pub fn div(&self, rhs: &Hp) -> Hp {
        Hp(self.0.div(&rhs.0, PREC, RM))
    }

    pub fn sqrt(&self) -> Hp {
        Hp(self.0.sqrt(PREC, RM))
    }

    pub fn powi(&self, n: usize) -> Hp {
        Hp(self.0.powi(n, PREC, RM))
    }

    pub fn neg(&self) -> Hp {
        Hp(self.0.neg())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        // round-trip through the decimal writer; 40 digits is far more
        // than f64 can resolve
        self.to_decimal(40).parse::<f64>().expect("decimal parse")
    }

    /// Decimal string with the requested number of significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let s = format!("{}", self.0);
        trim_decimal(&s, digits)
    }
}

/// Reduce an astro-float decimal rendering ("1.234...e-5" style) to the
/// requested significant digits, keeping the exponent.
fn trim_decimal(s: &str, digits: usize) -> String {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let neg = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point_pos = mantissa
        .find('.')
        .map(|p| if neg { p - 1 } else { p })
        .unwrap_or(digits_only.len());
    // round the digit string at `digits` significant figures
    let mut ds: Vec<u8> = digits_only.bytes().map(|b| b - b'0').collect();
    let mut point = point_pos;
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut idx = digits;
            loop {
                if idx == 0 {
                    ds.insert(0, 1);
                    point += 1;
                    break;
                }
                idx -= 1;
                if ds[idx] == 9 {
                    ds[idx] = 0;
                } else {
                    ds[idx] += 1;
                    break;
                }
            }
        }
    }
    let digit_str: String = ds.iter().map(|d| (d + b'0') as char).collect();
    let (int_part, frac_part) = digit_str.split_at(point.min(digit_str.len()));
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(if int_part.is_empty() { "0" } else { int_part });
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    if let Some(e) = exp {
        out.push('e');
        out.push_str(e);
    }
    out
}

/// All coupling quantities for one nuclear charge, in high precision.
pub struct CouplingReference {
    pub z: u32,
    pub lambda: [Hp; 3],
    pub delta: [Hp; 3],
    pub a0: Hp,
    pub a1: Hp,
    pub b0: Hp,
    pub b1: Hp,
    pub c: Hp,
}

fn alpha() -> Hp {
    Hp::from_u64(1).div(&Hp::ratio(137_036, 1000))
}

/// Lamb-shift inputs: 0.5556 alpha^3 and 0.4138 alpha^3.
fn lamb_shifts(alpha: &Hp) -> (Hp, Hp) {
    let a3 = alpha.powi(3);
    (
        Hp::ratio(5556, 10_000).mul(&a3),
        Hp::ratio(4138, 10_000).mul(&a3),
    )
}

/// kdot = floor(alpha |Z| + 1); equals 1 for every supported Z.
pub fn kdot(z: u32) -> u64 {
    let az = alpha().mul(&Hp::from_u64(u64::from(z)));
    // alpha * z < 1 for z <= 137, so the floor of alpha*z + 1 is 1
    assert!(az.sub(&Hp::from_u64(1)).is_negative(), "alpha*Z must stay below 1");
    1
}

/// Naive high-precision evaluation of the three intermediate functions.
pub fn lambdas(z: u32) -> [Hp; 3] {
    let al = alpha();
    let (d1s, d2s) = lamb_shifts(&al);
    let zf = Hp::from_u64(u64::from(z));
    let kd = Hp::from_u64(kdot(z));
    let one = Hp::from_u64(1);
    let two = Hp::from_u64(2);

    let az = al.mul(&zf);
    let common = two.sub(&two.mul(&one.sub(&az.mul(&az).div(&kd.mul(&kd))).sqrt()));
    let z3k3 = zf.powi(3).div(&kd.powi(3));
    let alpha2 = al.mul(&al);

    let lamb = |coeff: Hp| -> Hp {
        let denom = common.add(&coeff.mul(&d1s).mul(&alpha2).mul(&z3k3));
        let two_kd_minus_1 = two.mul(&kd).sub(&one);
        let num = two.mul(&az).sub(&two_kd_minus_1.mul(&denom.sqrt()));
        num.mul(&num).div(&denom)
    };

    let l1 = lamb(Hp::ratio(15, 10));
    let l2 = lamb(Hp::ratio(5, 10).neg());

    // Lambda3 consumes sqrt(Lambda1)
    let g = two.mul(&kd).add(&one).add(&l1.sqrt());
    let kp1 = kd.add(&one);
    let kp1_sq = kp1.mul(&kp1);
    let rad = kp1_sq
        .mul(&kp1_sq)
        .sub(&Hp::from_u64(8).mul(&d2s).mul(&alpha2).mul(&g).mul(&g));
    let l3_inner = kp1_sq
        .mul(&g)
        .div(&rad.sqrt())
        .sub(&two.mul(&kd))
        .add(&one);
    let l3 = l3_inner.mul(&l3_inner);

    [l1, l2, l3]
}

/// Naive high-precision evaluation of the coupling strengths.
pub fn deltas(z: u32) -> [Hp; 3] {
    let [l1, l2, l3] = lambdas(z);
    let s = l2.sub(&l3).add(&Hp::from_u64(16));
    let disc = s
        .mul(&s)
        .sub(&Hp::from_u64(64).mul(&l2))
        .add(&Hp::from_u64(64).mul(&l1));
    let d1_num = s.sub(&disc.sqrt());
    let d1 = d1_num.mul(&d1_num).div(&Hp::from_u64(2048));

    let t = Hp::from_u64(16).mul(&Hp::from_u64(2).mul(&d1).sqrt());
    let inner = t.sub(&l2).add(&l1);
    let d2 = Hp::ratio(1, 8).sub(
        &inner
            .mul(&inner)
            .div(&Hp::from_u64(1024).mul(&d1)),
    );

    let q = Hp::from_u64(2)
        .sub(&Hp::from_u64(1).sub(&Hp::from_u64(8).mul(&d2)).sqrt())
        .sub(&Hp::from_u64(2).mul(&Hp::from_u64(2).mul(&d1).sqrt()));
    let d3 = Hp::ratio(1, 8)
        .mul(&q.mul(&q))
        .sub(&l1.div(&Hp::from_u64(8)));

    [d1, d2, d3]
}

/// Full coupling record including the basis exponents.
pub fn coupling_reference(z: u32) -> CouplingReference {
    let lambda = lambdas(z);
    let delta = deltas(z);
    let [d1, d2, d3] = delta.clone();
    let half = Hp::ratio(1, 2);
    let sqrt_2d1 = Hp::from_u64(2).mul(&d1).sqrt();
    let root_quarter = Hp::ratio(1, 4).sub(&Hp::from_u64(2).mul(&d2)).sqrt();
    let c = half.sub(&root_quarter);

    let a_p = |sign_minus: bool| -> Hp {
        // inner = 1 - sqrt(0.25 - 2 d2) - (-1)^p sqrt(2 d1)
        let base = Hp::from_u64(1).sub(&root_quarter);
        let inner = if sign_minus {
            base.sub(&sqrt_2d1)
        } else {
            base.add(&sqrt_2d1)
        };
        inner
            .mul(&inner)
            .sub(&Hp::from_u64(2).mul(&d3))
            .sqrt()
            .sub(&half)
    };

    let a0 = a_p(true);
    let a1 = a_p(false);
    CouplingReference {
        z,
        lambda,
        delta: [d1.clone(), d2.clone(), d3.clone()],
        a0,
        a1,
        b0: sqrt_2d1.neg(),
        b1: sqrt_2d1.clone(),
        c,
    }
}

/// Relativistic hydrogen-like ground-state correction, naive form.
pub fn dirac_correction(z: u32) -> Hp {
    let al = alpha();
    let (d1s, _) = lamb_shifts(&al);
    let zf = Hp::from_u64(u64::from(z));
    let az = al.mul(&zf);
    let one = Hp::from_u64(1);
    let z2_half = zf.mul(&zf).div(&Hp::from_u64(2));
    let rel = one
        .sub(&one.sub(&az.mul(&az)).sqrt())
        .div(&al.mul(&al));
    rel.sub(&z2_half)
        .add(&Hp::ratio(75, 100).mul(&d1s).mul(&zf.powi(3)))
}

/// 2 - 2 sqrt(1 - x) at x = (alpha Z)^2: high-precision anchor for the
/// cancellation-safety check.
pub fn two_minus_two_sqrt(z: u32) -> Hp {
    let az = alpha().mul(&Hp::from_u64(u64::from(z)));
    let two = Hp::from_u64(2);
    two.sub(&two.mul(&Hp::from_u64(1).sub(&az.mul(&az)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_trimming() {
        let v = Hp::from_f64(0.125);
        let s = v.to_decimal(3);
        assert_eq!(s.parse::<f64>().unwrap(), 0.125, "{s}");
        let v = Hp::ratio(2, 3);
        let s = v.to_decimal(10);
        let back = s.parse::<f64>().unwrap();
        assert!((back - 2.0 / 3.0).abs() < 1e-9, "{s}");
        // rounding, not truncation
        let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
        assert!(digits.starts_with("6666666667"), "{s}");
    }

    #[test]
    fn f64_roundtrip() {
        for x in [1.0, -0.5, 3.25e-7, 123.456, 1e-30] {
            let v = Hp::from_f64(x);
            let back = v.to_f64();
            assert!(
                ((back - x) / x).abs() < 1e-15,
                "roundtrip {x} -> {back}"
            );
        }
    }

    #[test]
    fn lambda_magnitudes() {
        // Lambda1 and Lambda2 sit near 1, Lambda3 near 9 across the range
        for z in [1, 10, 50, 99] {
            let [l1, l2, l3] = lambdas(z);
            let l1 = l1.to_f64();
            let l2 = l2.to_f64();
            let l3 = l3.to_f64();
            assert!(l1 > 0.5 && l1 < 1.001, "Lambda1({z}) = {l1}");
            assert!(l2 > 0.5 && l2 < 1.001, "Lambda2({z}) = {l2}");
            assert!(l3 > 7.0 && l3 < 9.001, "Lambda3({z}) = {l3}");
        }
    }

    #[test]
    fn deltas_are_small() {
        for z in [1, 2, 5, 10] {
            let [d1, d2, d3] = deltas(z);
            for (name, d) in [("d1", d1), ("d2", d2), ("d3", d3)] {
                let v = d.to_f64();
                assert!(v.abs() < 0.01, "{name}({z}) = {v}");
            }
        }
    }

    #[test]
    fn dirac_correction_at_z1() {
        // ~6.8e-6 hartree
        let v = dirac_correction(1).to_f64();
        assert!(v > 6.5e-6 && v < 7.1e-6, "got {v}");
    }
}
