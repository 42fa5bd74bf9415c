//! Adaptive Gauss-Kronrod quadrature.
//!
//! Small self-contained G7/K15 engine used by the integral verification
//! oracle and the wavefunction normalization helper. Finite intervals are
//! refined by bisection on the largest error estimate; semi-infinite
//! ranges go through a rational map onto (0, 1).

#![allow(clippy::excessive_precision)] // textbook node tables kept verbatim

use std::cell::Cell;

/// Kronrod abscissae for the 15-point rule (positive half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_27,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// 7-point Gauss weights (nodes are XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_93,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Shared evaluation budget so nested integrals cannot spin forever.
pub struct EvalBudget {
    remaining: Cell<u64>,
}

impl EvalBudget {
    pub fn new(limit: u64) -> Self {
        Self {
            remaining: Cell::new(limit),
        }
    }

    fn consume(&self, n: u64) -> bool {
        let r = self.remaining.get();
        if r < n {
            return false;
        }
        self.remaining.set(r - n);
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadError {
    /// The error estimate could not be brought under the tolerance within
    /// the evaluation budget.
    BudgetExhausted,
    /// The integrand produced a non-finite value.
    NonFiniteIntegrand,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64), QuadError> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadError::NonFiniteIntegrand);
    }
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (idx, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate().take(7) {
        let fa = f(c - h * x);
        let fb = f(c + h * x);
        if !fa.is_finite() || !fb.is_finite() {
            return Err(QuadError::NonFiniteIntegrand);
        }
        let pair = fa + fb;
        kronrod += wk * pair;
        if idx % 2 == 1 {
            gauss += WG[idx / 2] * pair;
        }
    }
    let value = h * kronrod;
    let err = (h * (kronrod - gauss)).abs();
    Ok((value, err))
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integration of `f` over the finite interval `[lo, hi]`.
///
/// Bisects the largest-error panel (max-heap) until the summed error
/// estimate drops below `tol_rel * |integral| + tol_abs`. Consumes 15
/// evaluations per panel from `budget`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol_rel: f64,
    tol_abs: f64,
    budget: &EvalBudget,
) -> Result<f64, QuadError> {
    if lo == hi {
        return Ok(0.0);
    }
    if !budget.consume(15) {
        return Err(QuadError::BudgetExhausted);
    }
    let (value, err) = gk15(f, lo, hi)?;
    let mut heap = std::collections::BinaryHeap::new();
    let mut total = value;
    let mut total_err = err;
    heap.push(Segment {
        lo,
        hi,
        value,
        err,
    });
    loop {
        if total_err <= tol_rel * total.abs() + tol_abs {
            return Ok(total);
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval no longer splittable at f64 resolution
            return Err(QuadError::BudgetExhausted);
        }
        if !budget.consume(30) {
            return Err(QuadError::BudgetExhausted);
        }
        let (v1, e1) = gk15(f, worst.lo, mid)?;
        let (v2, e2) = gk15(f, mid, worst.hi)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: v2,
            err: e2,
        });
        // running sums drift after many updates; refresh occasionally
        if heap.len() % 4096 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }
}

/// Adaptive integration of `f` over `[lo, inf)`.
///
/// The tail is mapped through r = lo + t/(1-t); the Kronrod nodes are
/// interior so the t = 1 endpoint is never evaluated.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    scale: f64,
    tol_rel: f64,
    tol_abs: f64,
    budget: &EvalBudget,
) -> Result<f64, QuadError> {
    let s = scale.max(f64::MIN_POSITIVE);
    let g = |t: f64| {
        let u = 1.0 - t;
        let r = lo + s * t / u;
        f(r) * s / (u * u)
    };
    integrate(&g, 0.0, 1.0, tol_rel, tol_abs, budget)
}
