//! Dense symmetric linear algebra for the tiny variational matrices.
//!
//! The generalized eigenproblem here is at most 4x4, so a direct
//! Cholesky reduction followed by cyclic Jacobi rotations is both exact
//! enough and fully deterministic.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not positive definite (Cholesky pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("Jacobi eigensolve did not converge in {0} sweeps")]
    JacobiNonConvergence(usize),
}

/// Row-major square matrix of f64.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// (M + M^T) / 2
    pub fn symmetrized(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, 0.5 * (self.get(i, j) + self.get(j, i)));
            }
        }
        out
    }

    /// x^T M x
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for j in 0..self.n {
                row += self.get(i, j) * x[j];
            }
            acc += x[i] * row;
        }
        acc
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(m: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
    let n = m.dim();
    let mut l = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(LinalgError::NotPositiveDefinite {
                        index: i,
                        pivot: sum,
                    });
                }
                l.set(i, i, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solve L x = b with L lower triangular.
fn solve_lower(l: &SquareMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l.get(i, k) * x[k];
        }
        x[i] = sum / l.get(i, i);
    }
    x
}

/// Solve L^T x = b with L lower triangular.
fn solve_lower_transposed(l: &SquareMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = b[i];
        for k in i + 1..n {
            sum -= l.get(k, i) * x[k];
        }
        x[i] = sum / l.get(i, i);
    }
    x
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues ascending with matching eigenvector columns.
pub fn jacobi_eigen(m: &SquareMatrix) -> Result<(Vec<f64>, SquareMatrix), LinalgError> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = SquareMatrix::zeros(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    let frob: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.get(i, j) * a.get(i, j))
        .sum::<f64>()
        .sqrt();
    let tol = 1e-15 * frob.max(f64::MIN_POSITIVE);
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a.get(i, j).abs());
            }
        }
        if off <= tol {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&x, &y| a.get(x, x).total_cmp(&a.get(y, y)));
            let vals = order.iter().map(|&i| a.get(i, i)).collect();
            let mut vecs = SquareMatrix::zeros(n);
            for (col, &src) in order.iter().enumerate() {
                for row in 0..n {
                    vecs.set(row, col, v.get(row, src));
                }
            }
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    Err(LinalgError::JacobiNonConvergence(MAX_SWEEPS))
}

/// Smallest eigenpair of the generalized symmetric problem N v = mu S v.
///
/// S is diagonally rescaled before the Cholesky reduction so that the
/// wide dynamic range of high-order overlap entries does not poison the
/// factorization.
pub fn smallest_generalized_eigenpair(
    n_sym: &SquareMatrix,
    s: &SquareMatrix,
) -> Result<(f64, Vec<f64>), LinalgError> {
    let n = s.dim();
    assert_eq!(n_sym.dim(), n);
    let mut d = vec![0.0; n];
    for i in 0..n {
        let sii = s.get(i, i);
        if sii <= 0.0 || !sii.is_finite() {
            return Err(LinalgError::NotPositiveDefinite {
                index: i,
                pivot: sii,
            });
        }
        d[i] = 1.0 / sii.sqrt();
    }
    let mut s_scaled = SquareMatrix::zeros(n);
    let mut n_scaled = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            s_scaled.set(i, j, d[i] * s.get(i, j) * d[j]);
            n_scaled.set(i, j, d[i] * n_sym.get(i, j) * d[j]);
        }
    }
    let l = cholesky(&s_scaled)?;
    // M = L^-1 N L^-T, built column by column.
    let mut m = SquareMatrix::zeros(n);
    for col in 0..n {
        let e: Vec<f64> = (0..n).map(|r| n_scaled.get(r, col)).collect();
        let y = solve_lower(&l, &e);
        for row in 0..n {
            m.set(row, col, y[row]);
        }
    }
    for row in 0..n {
        let e: Vec<f64> = (0..n).map(|c| m.get(row, c)).collect();
        let y = solve_lower(&l, &e);
        for col in 0..n {
            m.set(row, col, y[col]);
        }
    }
    let m = m.symmetrized(); // scrub rounding asymmetry before Jacobi
    let (vals, vecs) = jacobi_eigen(&m)?;
    let mu = vals[0];
    let y: Vec<f64> = (0..n).map(|r| vecs.get(r, 0)).collect();
    let w = solve_lower_transposed(&l, &y);
    let v: Vec<f64> = w.iter().zip(d.iter()).map(|(wi, di)| wi * di).collect();
    Ok((mu, v))
}
