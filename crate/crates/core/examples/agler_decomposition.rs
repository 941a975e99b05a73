//! Decide a single Agler decomposition and recheck the certificate.

use bidisk_pick::agler::{
    solve_decomposition, verify_certificate, CertificateKind, Decomposition, Method, PickProblem, SolverOptions,
    VerifyTolerances,
};
use bidisk_pick::kernels::{admissible_batch, Point2D, PointSequence};
use bidisk_pick::{Complex64, Result};

fn main() -> Result<()> {
    let nodes = PointSequence::new(vec![Point2D::real(0.0, 0.0)?, Point2D::real(0.5, 0.5)?, Point2D::real(-0.3, 0.6)?])?;
    let w = vec![Complex64::new(0.0, 0.0), Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.5)];
    let prob = PickProblem::scalar(nodes, w)?;

    for level in [0.5, 0.8, 1.0, 2.0] {
        let p = prob.problem_at(level)?;
        for method in [Method::Barrier, Method::Dykstra] {
            let opts = SolverOptions { method, ..SolverOptions::default() };
            match solve_decomposition(&p, &opts)? {
                Decomposition::Feasible(cert) => {
                    let kernels = admissible_batch(p.base(), 20, 3)?;
                    let rep = verify_certificate(&p, &cert, CertificateKind::Pick, &VerifyTolerances::default(), &kernels)?;
                    println!(
                        "M = {level}: {method:?} feasible, residual {:.1e}, min eig ({:.1e}, {:.1e}), recheck {}",
                        rep.residual,
                        rep.gamma_mineig,
                        rep.delta_mineig,
                        if rep.passed() { "ok" } else { "FAILED" }
                    );
                }
                Decomposition::Infeasible { residual, iterations } => {
                    println!("M = {level}: {method:?} infeasible after {iterations} steps (residual {residual:.2e})");
                }
            }
        }
    }
    Ok(())
}
