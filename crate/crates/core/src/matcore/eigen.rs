//! Cyclic Jacobi eigensolver for Hermitian matrices and spectral calculus.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation. Sweeps stop once
//! the off-diagonal Frobenius norm falls below `1e-13 · ‖H‖_F`.

use num_complex::Complex64;

use super::matrix::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Global threshold below which eigenvalues and probabilities are exact zeros.
pub const SUPPORT_TOL: f64 = 1e-12;

const OFF_DIAGONAL_RTOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The `k`-th eigenvector.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> CMatrix {
        self.weighted_sum(|k| self.eigenvalues[k])
    }

    /// `Σ w(k) v_k v_k†` over all k with nonzero weight.
    pub(crate) fn weighted_sum(&self, w: impl Fn(usize) -> f64) -> CMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = CMatrix::zeros(n);
        for k in 0..n {
            let wk = w(k);
            if wk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * wk;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Indices of eigenvalues strictly above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| self.eigenvalues[k] > tol)
            .collect()
    }

    /// Applies `f` to the spectrum. Eigenvalues with `|λ| ≤ support_tol`
    /// are treated as exact zeros; if `f(0)` is not finite they contribute a
    /// zero block.
    pub fn apply(&self, f: impl Fn(f64) -> f64, support_tol: f64) -> Result<HermitianMatrix> {
        let f0 = f(0.0);
        let mut weights = Vec::with_capacity(self.dim());
        for &lambda in &self.eigenvalues {
            if lambda.abs() <= support_tol {
                weights.push(if f0.is_finite() { f0 } else { 0.0 });
            } else {
                let y = f(lambda);
                if !y.is_finite() {
                    return Err(Error::Domain(format!(
                        "function undefined at eigenvalue {lambda:e}"
                    )));
                }
                weights.push(y);
            }
        }
        Ok(HermitianMatrix::from_computed(
            self.weighted_sum(|k| weights[k]),
        ))
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Spectral decomposition of a Hermitian matrix.
pub fn eigh(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= OFF_DIAGONAL_RTOL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > OFF_DIAGONAL_RTOL * scale {
        return Err(Error::Numerical(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = CMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One two-sided rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
        sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let vpp = Complex64::new(c, 0.0);
    let vpq = Complex64::new(s, 0.0);
    let vqp = -phase.conj() * s;
    let vqq = phase.conj() * c;

    // A <- A V
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * vpp + akq * vqp;
        a[(k, q)] = akp * vpq + akq * vqq;
    }
    // A <- V† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
        a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * vpp + vkq * vqp;
        v[(k, q)] = vkp * vpq + vkq * vqq;
    }
}

/// `f(H)` through the spectral decomposition; see [`SpectralDecomposition::apply`].
pub fn matrix_function(
    h: &HermitianMatrix,
    f: impl Fn(f64) -> f64,
    support_tol: f64,
) -> Result<HermitianMatrix> {
    eigh(h)?.apply(f, support_tol)
}
