use num_complex::Complex64;

use super::{eigh, ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Gram factor of a PSD matrix.
///
/// Returns `F` (`dim x r`, `r` the numerical rank) with `F F^* ~ H`, i.e.
/// `H[i][j] = sum_k F[i][k] conj(F[j][k])`: row `i` of `F` is a vector `f_i`
/// in an `r`-dimensional auxiliary space realizing the Gram entries.
/// Eigenvalues at or below `tol * max(1, lambda_max)` are dropped.
pub fn psd_factor(h: &HermitianMatrix, tol: f64) -> Result<ComplexMatrix> {
    let d = eigh(h)?;
    let lo = d.min_eigenvalue();
    if lo < -tol {
        return Err(Error::NotPsd { eigenvalue: lo });
    }
    let cutoff = tol * d.max_eigenvalue().max(1.0);
    let kept: Vec<usize> = (0..h.dim()).filter(|&k| d.eigenvalues[k] > cutoff).collect();
    let v = &d.eigenvectors;
    Ok(ComplexMatrix::from_fn(h.dim(), kept.len(), |i, j| {
        let k = kept[j];
        v[(i, k)] * d.eigenvalues[k].sqrt()
    }))
}

/// Lower-triangular Cholesky factor `L` with `H = L L^*` of a positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: ComplexMatrix,
}

impl Cholesky {
    /// `None` when some pivot is not strictly positive.
    pub fn new(h: &HermitianMatrix) -> Option<Self> {
        let n = h.dim();
        let mut l = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = h[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut acc = h[(i, j)];
                for k in 0..j {
                    acc -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = acc / d;
            }
        }
        Some(Self { l })
    }

    pub fn factor(&self) -> &ComplexMatrix {
        &self.l
    }

    pub fn log_det(&self) -> f64 {
        (0..self.l.rows()).map(|i| 2.0 * self.l[(i, i)].re.ln()).sum()
    }

    /// `H^{-1}`.
    pub fn inverse(&self) -> HermitianMatrix {
        let n = self.l.rows();
        // columns of L^{-1}, then H^{-1} = L^{-*} L^{-1}
        let mut li = ComplexMatrix::zeros(n, n);
        for c in 0..n {
            for i in c..n {
                let mut acc = if i == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                for k in c..i {
                    acc -= self.l[(i, k)] * li[(k, c)];
                }
                li[(i, c)] = acc / self.l[(i, i)];
            }
        }
        HermitianMatrix::from_upper(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in j..n {
                acc += li[(k, i)].conj() * li[(k, j)];
            }
            acc
        })
    }
}

/// Solves `a x = b` by LU with partial pivoting.
///
/// Returns the solution together with a crude condition estimate (ratio of
/// the extreme pivot moduli).
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n {
        return Err(Error::Dimension(format!("solve with {:?} and {:?}", a.shape(), b.shape())));
    }
    let m = b.cols();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut pmax = 0.0_f64;
    let mut pmin = f64::INFINITY;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| lu[(i, col)].norm().total_cmp(&lu[(j, col)].norm()))
            .expect("nonempty pivot range");
        let pv = lu[(piv, col)].norm();
        pmax = pmax.max(pv);
        pmin = pmin.min(pv);
        if pv <= 1e-14 * scale {
            return Err(Error::Numeric(format!(
                "singular system in column {col} (pivot {pv:.3e}, condition estimate {:.3e})",
                pmax / pv.max(f64::MIN_POSITIVE)
            )));
        }
        if piv != col {
            for k in 0..n {
                let t = lu[(col, k)];
                lu[(col, k)] = lu[(piv, k)];
                lu[(piv, k)] = t;
            }
            for k in 0..m {
                let t = x[(col, k)];
                x[(col, k)] = x[(piv, k)];
                x[(piv, k)] = t;
            }
        }
        let d = lu[(col, col)];
        for r in col + 1..n {
            let f = lu[(r, col)] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            lu[(r, col)] = f;
            for k in col + 1..n {
                let u = lu[(col, k)];
                lu[(r, k)] -= f * u;
            }
            for k in 0..m {
                let u = x[(col, k)];
                x[(r, k)] -= f * u;
            }
        }
    }
    for col in (0..n).rev() {
        let d = lu[(col, col)];
        for k in 0..m {
            let mut acc = x[(col, k)];
            for j in col + 1..n {
                acc -= lu[(col, j)] * x[(j, k)];
            }
            x[(col, k)] = acc / d;
        }
    }
    let cond = if n == 0 { 1.0 } else { pmax / pmin };
    Ok((x, cond))
}
