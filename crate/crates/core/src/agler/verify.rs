use rayon::prelude::*;

use super::{AglerCertificate, DecompositionProblem};
use crate::error::{Error, Result};
use crate::kernels::{normalized_grammian, KernelSample};

/// What a certificate claims, which fixes the Schur-product consequence to test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateKind {
    /// A Pick matrix: `P o K >= 0` for every admissible `K`.
    Pick,
    /// `M I - J`: `lambda_max(G^k) <= M`.
    UpperBound { level: f64 },
    /// `N J - I`: `lambda_min(G^k) >= 1 / N`.
    LowerBound { level: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyTolerances {
    pub residual: f64,
    pub psd: f64,
    pub kernel: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { residual: 1e-7, psd: 1e-6, kernel: 1e-5 }
    }
}

/// Outcome of the Schur-product test on one sampled kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCheck {
    /// The tested spectral quantity: `lambda_max(G)`, `lambda_min(G)` or `lambda_min(P o G)`.
    pub value: f64,
    /// The bound it is compared against.
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub residual: f64,
    pub gamma_mineig: f64,
    pub delta_mineig: f64,
    pub residual_ok: bool,
    pub psd_ok: bool,
    pub kernel_checks: Vec<KernelCheck>,
}

impl VerificationReport {
    pub fn kernels_ok(&self) -> bool {
        self.kernel_checks.iter().all(|k| k.passed)
    }

    pub fn passed(&self) -> bool {
        self.residual_ok && self.psd_ok && self.kernels_ok()
    }
}

/// Recomputes residual and PSD-ness from scratch and tests the Schur-product
/// consequence of the decomposition on each supplied kernel sample.
pub fn verify_certificate(
    p: &DecompositionProblem,
    c: &AglerCertificate,
    kind: CertificateKind,
    tol: &VerifyTolerances,
    kernels: &[KernelSample],
) -> Result<VerificationReport> {
    let n = p.dim();
    if c.gamma.dim() != n || c.delta.dim() != n {
        return Err(Error::Dimension(format!(
            "certificate of dimension ({}, {}) for a {n}-point problem",
            c.gamma.dim(),
            c.delta.dim()
        )));
    }
    if let Some(k) = kernels.iter().find(|k| k.base().len() != n) {
        return Err(Error::Dimension(format!("kernel on {} points for a {n}-point problem", k.base().len())));
    }
    let residual = p.residual(&c.gamma, &c.delta);
    let gamma_mineig = c.gamma.min_eigenvalue()?;
    let delta_mineig = c.delta.min_eigenvalue()?;
    let kernel_checks = kernels
        .par_iter()
        .map(|k| {
            let g = normalized_grammian(k)?;
            let (value, bound, passed) = match kind {
                CertificateKind::UpperBound { level } => {
                    let v = g.matrix().max_eigenvalue()?;
                    (v, level, v <= level + tol.kernel)
                }
                CertificateKind::LowerBound { level } => {
                    let v = g.matrix().min_eigenvalue()?;
                    (v, 1.0 / level, v >= 1.0 / level - tol.kernel)
                }
                CertificateKind::Pick => {
                    let v = p.lhs().schur(g.matrix()).min_eigenvalue()?;
                    (v, 0.0, v >= -tol.kernel)
                }
            };
            Ok(KernelCheck { value, bound, passed })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        residual,
        gamma_mineig,
        delta_mineig,
        residual_ok: residual <= tol.residual,
        psd_ok: gamma_mineig >= -tol.psd && delta_mineig >= -tol.psd,
        kernel_checks,
    })
}
