use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Residual norm below which a vector counts as dependent on the ones before it.
pub const DEPENDENCE_TOL: f64 = 1e-10;

/// `x^* y`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
///
/// Returns an orthonormal list spanning the input; vectors whose residual
/// falls below `DEPENDENCE_TOL * max(1, |v|)` are dropped.
pub fn gram_schmidt(vectors: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut u = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &u);
                axpy(&mut u, -c, q);
            }
        }
        let nu = norm(&u);
        if nu > DEPENDENCE_TOL * norm(v).max(1.0) {
            basis.push(u.into_iter().map(|z| z / nu).collect());
        }
    }
    basis
}

/// Extends an orthonormal list to an orthonormal basis of `C^dim`.
fn extend_basis(mut basis: Vec<Vec<Complex64>>, dim: usize) -> Vec<Vec<Complex64>> {
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut u = vec![Complex64::new(0.0, 0.0); dim];
        u[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &u);
                axpy(&mut u, -c, q);
            }
        }
        let nu = norm(&u);
        // an orthonormal list of length m < dim leaves some residual of size
        // at least sqrt((dim - m) / dim) among the unit vectors
        if nu > 1e-3 {
            basis.push(u.into_iter().map(|z| z / nu).collect());
        }
    }
    basis
}

/// Largest `|<d_j, d_i> - <c_j, c_i>|` over all pairs.
pub fn gram_mismatch(pairs: &[(Vec<Complex64>, Vec<Complex64>)]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, (di, ci)) in pairs.iter().enumerate() {
        for (dj, cj) in &pairs[i..] {
            worst = worst.max((inner(di, dj) - inner(ci, cj)).norm());
        }
    }
    worst
}

/// Extends the partial isometry `d_i -> c_i` to a unitary of `C^dim`.
///
/// Domain vectors are orthonormalized by modified Gram-Schmidt and the same
/// linear combinations are applied to the codomain vectors; both sets are
/// then completed to bases and matched in order. Fails with `NotIsometric`
/// when the two Gram matrices differ by more than `tol` entrywise.
pub fn complete_to_unitary(
    pairs: &[(Vec<Complex64>, Vec<Complex64>)],
    domain_dim: usize,
    codomain_dim: usize,
    tol: f64,
) -> Result<ComplexMatrix> {
    if domain_dim != codomain_dim {
        return Err(Error::Dimension(format!(
            "unitary completion needs equal dimensions, got {domain_dim} and {codomain_dim}"
        )));
    }
    let dim = domain_dim;
    for (d, c) in pairs {
        if d.len() != dim || c.len() != dim {
            return Err(Error::Dimension(format!(
                "pair of lengths ({}, {}) in dimension {dim}",
                d.len(),
                c.len()
            )));
        }
    }
    let mismatch = gram_mismatch(pairs);
    if mismatch > tol {
        return Err(Error::NotIsometric { mismatch });
    }

    let mut qs: Vec<Vec<Complex64>> = Vec::new();
    let mut ps: Vec<Vec<Complex64>> = Vec::new();
    for (d, c) in pairs {
        let mut u = d.clone();
        let mut w = c.clone();
        for _ in 0..2 {
            for (q, p) in qs.iter().zip(&ps) {
                let coef = inner(q, &u);
                axpy(&mut u, -coef, q);
                axpy(&mut w, -coef, p);
            }
        }
        let nu = norm(&u);
        if nu > DEPENDENCE_TOL * norm(d).max(1.0) {
            qs.push(u.into_iter().map(|z| z / nu).collect());
            ps.push(w.into_iter().map(|z| z / nu).collect());
        }
    }
    // the transported codomain list is orthonormal up to the Gram mismatch
    let ps = gram_schmidt(&ps);
    if ps.len() != qs.len() {
        return Err(Error::NotIsometric { mismatch });
    }
    let qs = extend_basis(qs, dim);
    let ps = extend_basis(ps, dim);
    if qs.len() != dim || ps.len() != dim {
        return Err(Error::Numeric("basis extension fell short".into()));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        qs.iter().zip(&ps).map(|(q, p)| p[i] * q[j].conj()).sum()
    }))
}
