//! Exact hydrogen-like eigensolutions of the corrected equation and the
//! relativistic-correction comparator.
//!
//! With the couplings switched on, the separated radial and angular
//! equations still admit closed-form solutions: a terminating power
//! series with shifted (generally irrational) leading exponents. The
//! quantum-number tuple gains a spin label J and a parity label P that
//! select square-root branches in the effective angular momentum.

use thiserror::Error;

use crate::couplings::{self, CouplingsError, DeltaSet, PhysicalConstants};
use crate::quadrature::{self, EvalBudget, QuadError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HydrogenicError {
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error(transparent)]
    Couplings(#[from] CouplingsError),
    #[error("negative radicand in {what}: {value:e}")]
    NegativeRadicand { what: &'static str, value: f64 },
    #[error("recursion denominator vanished at k = {k}")]
    VanishingRecursionDenominator { k: usize },
    #[error("angle {theta} out of domain: {reason}")]
    AngleOutOfDomain { theta: f64, reason: &'static str },
    #[error("normalization quadrature failed: {0:?}")]
    Normalization(QuadError),
}

/// Hydrogen-like quantum-number tuple (n, l, m, J, P).
///
/// J and P pick square-root branches; both values of P are accepted for
/// any m (the P = 0 branch with m != 0 solves the separated equations
/// but its angular factor is not normalizable, so callers wanting
/// physical states keep P = 1 there).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orbital {
    n: i32,
    l: i32,
    m: i32,
    j: i32,
    p: i32,
}

impl Orbital {
    pub fn new(n: i32, l: i32, m: i32, j: i32, p: i32) -> Result<Self, HydrogenicError> {
        if n < 1 {
            return Err(HydrogenicError::InvalidQuantumNumbers(format!(
                "principal quantum number must be >= 1, got {n}"
            )));
        }
        if l < 0 || l > n - 1 {
            return Err(HydrogenicError::InvalidQuantumNumbers(format!(
                "azimuthal quantum number must sit in [0, {}], got {l}",
                n - 1
            )));
        }
        if m < -l || m > l {
            return Err(HydrogenicError::InvalidQuantumNumbers(format!(
                "magnetic quantum number must sit in [-{l}, {l}], got {m}"
            )));
        }
        if !(j == 0 || j == 1) {
            return Err(HydrogenicError::InvalidQuantumNumbers(format!(
                "spin label must be 0 or 1, got {j}"
            )));
        }
        if !(p == 0 || p == 1) {
            return Err(HydrogenicError::InvalidQuantumNumbers(format!(
                "parity label must be 0 or 1, got {p}"
            )));
        }
        Ok(Self { n, l, m, j, p })
    }

    pub fn n(&self) -> i32 {
        self.n
    }
    pub fn l(&self) -> i32 {
        self.l
    }
    pub fn m(&self) -> i32 {
        self.m
    }
    pub fn spin_j(&self) -> i32 {
        self.j
    }
    pub fn parity_p(&self) -> i32 {
        self.p
    }
}

/// Closed-form eigensolution for one orbital.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalSolution {
    pub orbital: Orbital,
    /// intermediate T (shifted l - |m|)
    pub t: f64,
    /// effective angular momentum L
    pub l_eff: f64,
    /// orbital exponent (1/bohr), always positive
    pub xi: f64,
    /// energy = -xi^2 / 2 (hartree)
    pub energy: f64,
    /// leading radial power: R ~ r^{radial_exponent} near the origin
    pub radial_exponent: f64,
    /// cosine-polynomial coefficients, hat-a_k, first entry 1
    pub angular_coeffs: Vec<f64>,
    /// radial-series coefficients, hat-b_k, first entry 1
    pub radial_coeffs: Vec<f64>,
}

impl OrbitalSolution {
    /// Exponent of the sine prefactor in the angular factor.
    pub fn sine_exponent(&self) -> f64 {
        self.l_eff - self.t
    }
}

/// Small shift 1/2 - sqrt(1/4 - 2 d2) without cancellation.
fn quarter_shift(d2: f64) -> Result<f64, HydrogenicError> {
    let rad = 0.25 - 2.0 * d2;
    if rad < 0.0 {
        return Err(HydrogenicError::NegativeRadicand {
            what: "1/4 - 2 delta2",
            value: rad,
        });
    }
    Ok(2.0 * d2 / (0.5 + rad.sqrt()))
}

/// Solve an orbital with the couplings belonging to nuclear charge Z.
pub fn solve_orbital(orb: &Orbital, z: i32) -> Result<OrbitalSolution, HydrogenicError> {
    let d = couplings::deltas(z)?;
    solve_orbital_with(orb, z, &d)
}

/// Solve an orbital with an explicit coupling set (used for the
/// zero-coupling reductions and for oracle-driven checks).
pub fn solve_orbital_with(
    orb: &Orbital,
    z: i32,
    d: &DeltaSet,
) -> Result<OrbitalSolution, HydrogenicError> {
    if z < 1 {
        return Err(HydrogenicError::InvalidQuantumNumbers(format!(
            "nuclear charge must be positive, got {z}"
        )));
    }
    let lm = f64::from(orb.l - orb.m.abs());
    let tq = quarter_shift(d.d2)?;
    // T = (l - |m|) + 1/2 - (-1)^J sqrt(1/4 - 2 d2)
    let t = if orb.j == 0 { lm + tq } else { lm + 1.0 - tq };
    let m_rad = f64::from(orb.m * orb.m) + 2.0 * d.d1;
    if m_rad < 0.0 {
        return Err(HydrogenicError::NegativeRadicand {
            what: "m^2 + 2 delta1",
            value: m_rad,
        });
    }
    let m_root = m_rad.sqrt();
    let l_eff = if orb.p == 0 { t - m_root } else { t + m_root };
    // radial exponent gamma = -1/2 + sqrt((L + 1/2)^2 - 2 d3),
    // written through L(L+1) so the near-zero case keeps its digits
    let rad = (l_eff + 0.5) * (l_eff + 0.5) - 2.0 * d.d3;
    if rad < 0.0 {
        return Err(HydrogenicError::NegativeRadicand {
            what: "(L + 1/2)^2 - 2 delta3",
            value: rad,
        });
    }
    let gamma = (l_eff * (l_eff + 1.0) - 2.0 * d.d3) / (0.5 + rad.sqrt());
    let nl = f64::from(orb.n - orb.l);
    let xi_den = nl + gamma;
    if xi_den <= 0.0 {
        return Err(HydrogenicError::InvalidQuantumNumbers(format!(
            "orbital exponent denominator {xi_den} is not positive"
        )));
    }
    let xi = f64::from(z) / xi_den;
    let energy = -0.5 * xi * xi;

    // angular recursion: hat-a_k, k = 0 ..= floor((l - |m|)/2)
    let k_ang = ((orb.l - orb.m.abs()) / 2) as usize;
    let mut angular = Vec::with_capacity(k_ang + 1);
    angular.push(1.0);
    for k in 1..=k_ang {
        let kf = k as f64;
        let num = (t - 2.0 * kf + 2.0) * (t - 2.0 * kf + 1.0) + 2.0 * d.d2;
        let den = 2.0 * kf * (2.0 * l_eff + 1.0 - 2.0 * kf);
        if den == 0.0 {
            return Err(HydrogenicError::VanishingRecursionDenominator { k });
        }
        let prev = *angular.last().expect("non-empty");
        angular.push(-num / den * prev);
    }

    // radial recursion: hat-b_k, k = 0 ..= n - l - 1
    let k_rad = (orb.n - orb.l - 1) as usize;
    let rad_root = ((2.0 * l_eff + 1.0) * (2.0 * l_eff + 1.0) - 8.0 * d.d3).sqrt();
    let mut radial = Vec::with_capacity(k_rad + 1);
    radial.push(1.0);
    for k in 1..=k_rad {
        let kf = k as f64;
        let num = 2.0 * xi * (nl - kf);
        let den = kf * (kf + rad_root);
        if den == 0.0 {
            return Err(HydrogenicError::VanishingRecursionDenominator { k });
        }
        let prev = *radial.last().expect("non-empty");
        radial.push(-num / den * prev);
    }

    Ok(OrbitalSolution {
        orbital: *orb,
        t,
        l_eff,
        xi,
        energy,
        radial_exponent: gamma,
        angular_coeffs: angular,
        radial_coeffs: radial,
    })
}

/// Un-normalized radial amplitude R(r).
///
/// r = 0 with a negative leading exponent yields +inf; that sample is
/// out of domain rather than an error.
pub fn radial_wavefunction(sol: &OrbitalSolution, r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    let damp = (-sol.xi * r).exp();
    let mut acc = 0.0;
    for (k, &b) in sol.radial_coeffs.iter().enumerate() {
        acc += b * r.powf(sol.radial_exponent + k as f64);
    }
    acc * damp
}

/// R(r) together with its first two analytic derivatives.
pub fn radial_derivatives(sol: &OrbitalSolution, r: f64) -> (f64, f64, f64) {
    let xi = sol.xi;
    let damp = (-xi * r).exp();
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for (k, &b) in sol.radial_coeffs.iter().enumerate() {
        let e = sol.radial_exponent + k as f64;
        let p = r.powf(e);
        let pm1 = r.powf(e - 1.0);
        let pm2 = r.powf(e - 2.0);
        v += b * p;
        d1 += b * (e * pm1 - xi * p);
        d2 += b * (e * (e - 1.0) * pm2 - 2.0 * xi * e * pm1 + xi * xi * p);
    }
    (v * damp, d1 * damp, d2 * damp)
}

/// Real power with explicit domain handling: negative bases accept only
/// integer exponents, zero bases only non-negative ones.
fn checked_powf(base: f64, expo: f64, theta: f64) -> Result<f64, HydrogenicError> {
    if base > 0.0 {
        Ok(base.powf(expo))
    } else if base == 0.0 {
        if expo > 0.0 {
            Ok(0.0)
        } else if expo == 0.0 {
            Ok(1.0)
        } else {
            Err(HydrogenicError::AngleOutOfDomain {
                theta,
                reason: "zero base raised to a negative power",
            })
        }
    } else if expo.fract() == 0.0 {
        Ok(base.powi(expo as i32))
    } else {
        Err(HydrogenicError::AngleOutOfDomain {
            theta,
            reason: "negative base with non-integer power is undefined over the reals",
        })
    }
}

/// Un-normalized angular amplitude Theta(theta).
pub fn angular_wavefunction(sol: &OrbitalSolution, theta: f64) -> Result<f64, HydrogenicError> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(HydrogenicError::AngleOutOfDomain {
            theta,
            reason: "theta must sit in [0, pi]",
        });
    }
    let s = theta.sin();
    let c = theta.cos();
    let nu = sol.sine_exponent();
    let sine_part = checked_powf(s, nu, theta)?;
    let mut poly = 0.0;
    for (k, &a) in sol.angular_coeffs.iter().enumerate() {
        poly += a * checked_powf(c, sol.t - 2.0 * k as f64, theta)?;
    }
    Ok(sine_part * poly)
}

/// Theta(theta) with first and second analytic derivatives.
pub fn angular_derivatives(
    sol: &OrbitalSolution,
    theta: f64,
) -> Result<(f64, f64, f64), HydrogenicError> {
    let s = theta.sin();
    let c = theta.cos();
    if s <= 0.0 {
        return Err(HydrogenicError::AngleOutOfDomain {
            theta,
            reason: "derivatives need theta strictly inside (0, pi)",
        });
    }
    let nu = sol.sine_exponent();
    let (mut poly, mut dpoly, mut d2poly) = (0.0, 0.0, 0.0);
    for (k, &a) in sol.angular_coeffs.iter().enumerate() {
        let e = sol.t - 2.0 * k as f64;
        poly += a * checked_powf(c, e, theta)?;
        dpoly += a * e * checked_powf(c, e - 1.0, theta)?;
        d2poly += a * e * (e - 1.0) * checked_powf(c, e - 2.0, theta)?;
    }
    let sp = checked_powf(s, nu, theta)?;
    let spm1 = checked_powf(s, nu - 1.0, theta)?;
    let spm2 = checked_powf(s, nu - 2.0, theta)?;
    let v = sp * poly;
    // d/dtheta [sin^nu P(cos)] = nu cos sin^{nu-1} P - sin^{nu+1} P'
    let d1 = nu * c * spm1 * poly - sp * s * dpoly;
    let d2 = nu * (nu - 1.0) * c * c * spm2 * poly - nu * sp * poly
        - (2.0 * nu + 1.0) * c * sp * dpoly
        + sp * s * s * d2poly;
    Ok((v, d1, d2))
}

/// Azimuthal factor: cos(m phi) for m >= 0, sin(|m| phi) otherwise.
pub fn azimuthal_wavefunction(orb: &Orbital, phi: f64) -> f64 {
    let m = orb.m;
    if m >= 0 {
        (f64::from(m) * phi).cos()
    } else {
        (f64::from(-m) * phi).sin()
    }
}

/// L2 norm of the radial amplitude, integrating |R|^2 r^2 by quadrature.
pub fn radial_norm(sol: &OrbitalSolution) -> Result<f64, HydrogenicError> {
    let budget = EvalBudget::new(50_000_000);
    let f = |r: f64| {
        let v = radial_wavefunction(sol, r);
        v * v * r * r
    };
    let scale = (f64::from(sol.orbital.n()) + 2.0) / sol.xi;
    let head = quadrature::integrate(
        &|u: f64| f(u * u) * 2.0 * u,
        0.0,
        scale.sqrt(),
        1e-11,
        0.0,
        &budget,
    )
    .map_err(HydrogenicError::Normalization)?;
    let tail = quadrature::integrate_to_inf(&f, scale, scale, 1e-11, 0.0, &budget)
        .map_err(HydrogenicError::Normalization)?;
    Ok((head + tail).sqrt())
}

/// Relativistic correction of the hydrogen-like ground-state energy:
/// -Z^2/2 + (1/alpha^2)(1 - sqrt(1 - (alpha Z)^2)) + 0.75 Delta1S Z^3,
/// evaluated without cancellation as Z^2 x / (2 (1 + sqrt(1-x))^2) plus
/// the Lamb term. Positive as printed.
pub fn dirac_correction(z: i32) -> Result<f64, HydrogenicError> {
    dirac_correction_with(&PhysicalConstants::standard(), z)
}

/// Same with explicit constants (lets tests drive the alpha -> 0 limit).
pub fn dirac_correction_with(
    pc: &PhysicalConstants,
    z: i32,
) -> Result<f64, HydrogenicError> {
    if z < 1 {
        return Err(HydrogenicError::InvalidQuantumNumbers(format!(
            "nuclear charge must be positive, got {z}"
        )));
    }
    let zf = f64::from(z);
    let x = (pc.alpha * zf) * (pc.alpha * zf);
    if x >= 1.0 {
        return Err(HydrogenicError::NegativeRadicand {
            what: "1 - (alpha Z)^2",
            value: 1.0 - x,
        });
    }
    let s = (1.0 - x).sqrt();
    Ok(zf * zf * x / (2.0 * (1.0 + s) * (1.0 + s)) + 0.75 * pc.delta_1s * zf.powi(3))
}
