//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary, then applies the classical real Jacobi rotation to the
//! resulting real symmetric 2x2 block. Sweeps stop once the off-diagonal
//! Frobenius norm falls below `OFF_DIAGONAL_RTOL * ||H||_F`.

use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 30;
pub const OFF_DIAGONAL_RTOL: f64 = 1e-12;

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix (columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V diag(f(lambda)) V^*`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> HermitianMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        HermitianMatrix::from_upper(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a = h.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    jacobi(&mut a, &mut v, h.frobenius_norm())?;
    Ok(sorted(a, v))
}

/// Eigendecomposition seeded with an approximate eigenvector basis.
///
/// Rotates `h` into the basis `guess` first, so that only the residual
/// off-diagonal mass is left for the Jacobi sweeps. `guess` must be unitary
/// (up to rounding); the result is as accurate as the cold `eigh`.
pub fn eigh_warm(h: &HermitianMatrix, guess: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    if guess.shape() != (n, n) {
        return Err(Error::Dimension(format!("warm start basis {:?} for dimension {n}", guess.shape())));
    }
    let rotated = guess.adjoint().matmul(&h.as_matrix().matmul(guess)?)?;
    let mut a = HermitianMatrix::from_matrix_lossy(&rotated).into_matrix();
    let mut w = ComplexMatrix::identity(n);
    jacobi(&mut a, &mut w, h.frobenius_norm())?;
    let v = guess.matmul(&w)?;
    Ok(sorted(a, v))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
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

fn jacobi(a: &mut ComplexMatrix, v: &mut ComplexMatrix, scale: f64) -> Result<()> {
    let n = a.rows();
    let threshold = OFF_DIAGONAL_RTOL * scale;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a) <= threshold {
            return Ok(());
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(a, v, p, q);
            }
        }
    }
    let off = off_diagonal_norm(a);
    if off <= threshold {
        Ok(())
    } else {
        Err(Error::NoConvergence { sweeps: MAX_SWEEPS, off_diagonal: off })
    }
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = apq / r;
    let e = phase.conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    // theta == 0 (signum of +0.0 is 1) gives the 45 degree rotation.
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - e * akq * s;
        a[(k, q)] = akp * s + e * akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - phase * aqk * s;
        a[(q, k)] = apk * s + phase * aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - e * vkq * s;
        v[(k, q)] = vkp * s + e * vkq * c;
    }
}

fn sorted(a: ComplexMatrix, v: ComplexMatrix) -> EigenDecomposition {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    EigenDecomposition { eigenvalues, eigenvectors }
}

/// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero.
pub fn project_psd(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(eigh(h)?.reconstruct_with(|l| l.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let d = eigh(&HermitianMatrix::identity(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert!(d.eigenvectors.unitarity_defect() < 1e-14);
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let d = eigh(&HermitianMatrix::from_real_diagonal(&[2.0, -1.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![-1.0, 2.0]);
    }

    #[test]
    fn swap_matrix_spectrum() {
        let h = HermitianMatrix::from_upper(2, |i, j| if i == j { c(0.0, 0.0) } else { c(1.0, 0.0) });
        let d = eigh(&h).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let h = HermitianMatrix::from_upper(2, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 1.0) });
        let d = eigh(&h).unwrap();
        assert!(d.eigenvalues[0].abs() < 1e-14);
        assert!((d.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert!(d.reconstruct().max_abs_diff(&h) < 1e-14);
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let d = eigh(&HermitianMatrix::zeros(4)).unwrap();
        assert!(d.eigenvalues.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn psd_projection_examples() {
        let p = project_psd(&HermitianMatrix::from_real_diagonal(&[1.0, -1.0])).unwrap();
        assert!(p.max_abs_diff(&HermitianMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-15);
        let z = project_psd(&HermitianMatrix::identity(2).scale(-1.0)).unwrap();
        assert!(z.frobenius_norm() < 1e-15);
    }

    #[test]
    fn warm_start_from_exact_basis() {
        let h = HermitianMatrix::from_upper(3, |i, j| c((i + j) as f64, (j as f64) - (i as f64)));
        let cold = eigh(&h).unwrap();
        let warm = eigh_warm(&h, &cold.eigenvectors).unwrap();
        for (a, b) in cold.eigenvalues.iter().zip(&warm.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(warm.reconstruct().max_abs_diff(&h) < 1e-12);
    }
}
