use super::{AglerCertificate, Decomposition, DecompositionProblem, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigh_warm, ComplexMatrix, EigenDecomposition, HermitianMatrix};

/// Orthogonal projection of `(gamma, delta)` onto
/// `{(G, D) : G o X1 + D o X2 = P}` in the Frobenius geometry of Hermitian pairs.
///
/// The constraint decouples entrywise: for each `(i, j)` the pair
/// `(G_ij, D_ij)` is projected onto the complex line `a g + b d = p`.
pub fn project_affine(
    p: &DecompositionProblem,
    gamma: &HermitianMatrix,
    delta: &HermitianMatrix,
) -> (HermitianMatrix, HermitianMatrix) {
    let n = p.dim();
    let mut g = ComplexMatrix::zeros(n, n);
    let mut d = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let a = p.x1[(i, j)];
            let b = p.x2[(i, j)];
            let g0 = gamma[(i, j)];
            let d0 = delta[(i, j)];
            let r = p.lhs[(i, j)] - a * g0 - b * d0;
            let scale = r / (a.norm_sqr() + b.norm_sqr());
            g[(i, j)] = g0 + a.conj() * scale;
            d[(i, j)] = d0 + b.conj() * scale;
        }
    }
    let upper = |m: ComplexMatrix| HermitianMatrix::from_upper(n, |i, j| m[(i, j)]);
    (upper(g), upper(d))
}

/// Feasibility of `P = Gamma o X1 + Delta o X2`, `Gamma, Delta >= 0`, from the zero start.
pub fn dykstra_solve(p: &DecompositionProblem, opts: &SolverOptions) -> Result<Decomposition> {
    let n = p.dim();
    let out = run(p, HermitianMatrix::zeros(n), HermitianMatrix::zeros(n), opts)?;
    Ok(if out.converged {
        Decomposition::Feasible(out.best)
    } else {
        Decomposition::Infeasible { residual: out.best.residual, iterations: out.iterations }
    })
}

/// Continues Dykstra from an existing certificate to drive its residual
/// down to `opts.feas_tol`; returns the better of the input and the result.
pub fn polish_certificate(
    p: &DecompositionProblem,
    cert: &AglerCertificate,
    opts: &SolverOptions,
) -> Result<AglerCertificate> {
    if cert.gamma.dim() != p.dim() || cert.delta.dim() != p.dim() {
        return Err(Error::Dimension("certificate and problem dimensions differ".into()));
    }
    let current = AglerCertificate { residual: p.residual(&cert.gamma, &cert.delta), ..cert.clone() };
    if current.residual <= opts.feas_tol {
        return Ok(current);
    }
    let relaxed = SolverOptions { early_exit: false, method: Method::Dykstra, ..*opts };
    let run = run(p, cert.gamma.clone(), cert.delta.clone(), &relaxed)?;
    if run.best.residual <= current.residual {
        Ok(AglerCertificate { iterations: cert.iterations + run.best.iterations, ..run.best })
    } else {
        Ok(current)
    }
}

/// Warm-started PSD projection with a periodic cold restart, which keeps
/// the accumulated rotation basis unitary to working precision.
struct ConeProjector {
    basis: Option<ComplexMatrix>,
    uses: usize,
}

impl ConeProjector {
    const COLD_EVERY: usize = 64;

    fn new() -> Self {
        Self { basis: None, uses: 0 }
    }

    fn project(&mut self, h: &HermitianMatrix) -> Result<HermitianMatrix> {
        let d: EigenDecomposition = match &self.basis {
            Some(v) if !self.uses.is_multiple_of(Self::COLD_EVERY) => eigh_warm(h, v)?,
            _ => eigh(h)?,
        };
        self.uses += 1;
        let out = d.reconstruct_with(|l| l.max(0.0));
        self.basis = Some(d.eigenvectors);
        Ok(out)
    }
}

const STAGNATION_WINDOW: usize = 200;
const EARLY_EXIT_AFTER: usize = 1000;

struct RunOutcome {
    /// Lowest-residual PSD iterate seen.
    best: AglerCertificate,
    iterations: usize,
    converged: bool,
}

fn run(
    p: &DecompositionProblem,
    gamma0: HermitianMatrix,
    delta0: HermitianMatrix,
    opts: &SolverOptions,
) -> Result<RunOutcome> {
    let n = p.dim();
    let mut best = AglerCertificate {
        residual: p.residual(&gamma0, &delta0),
        gamma: gamma0.clone(),
        delta: delta0.clone(),
        iterations: 0,
    };
    let mut y_gamma = gamma0;
    let mut y_delta = delta0;
    let mut q_gamma = HermitianMatrix::zeros(n);
    let mut q_delta = HermitianMatrix::zeros(n);
    let mut cone_gamma = ConeProjector::new();
    let mut cone_delta = ConeProjector::new();
    let mut checkpoint = f64::INFINITY;

    for iter in 1..=opts.max_iter {
        let (x_gamma, x_delta) = project_affine(p, &y_gamma, &y_delta);
        let u_gamma = &x_gamma + &q_gamma;
        let u_delta = &x_delta + &q_delta;
        y_gamma = cone_gamma.project(&u_gamma)?;
        y_delta = cone_delta.project(&u_delta)?;
        q_gamma = &u_gamma - &y_gamma;
        q_delta = &u_delta - &y_delta;

        let residual = p.residual(&y_gamma, &y_delta);
        if !residual.is_finite() {
            return Err(Error::Numeric(format!("non-finite residual at iteration {iter}")));
        }
        let improved = residual < best.residual;
        if improved || residual <= opts.feas_tol {
            best = AglerCertificate { gamma: y_gamma.clone(), delta: y_delta.clone(), residual, iterations: iter };
        }
        if residual <= opts.feas_tol {
            return Ok(RunOutcome { best, iterations: iter, converged: true });
        }
        if iter % STAGNATION_WINDOW == 0 {
            if opts.early_exit && iter >= EARLY_EXIT_AFTER && hopeless(checkpoint, residual, opts, iter) {
                return Ok(RunOutcome { best, iterations: iter, converged: false });
            }
            checkpoint = residual;
        }
    }
    Ok(RunOutcome { best, iterations: opts.max_iter, converged: false })
}

/// Extrapolates the linear rate over the last window; true when even that
/// rate needs more iterations than remain.
fn hopeless(previous: f64, current: f64, opts: &SolverOptions, iter: usize) -> bool {
    if !previous.is_finite() {
        return false;
    }
    if current >= previous {
        return true;
    }
    let rate = (current / previous).ln() / STAGNATION_WINDOW as f64;
    let needed = (opts.feas_tol / current).ln() / rate;
    needed > (opts.max_iter - iter) as f64
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::agler::{lower_bound_lhs, upper_bound_lhs};
    use crate::kernels::{Point2D, PointSequence};

    fn seq(points: &[(f64, f64)]) -> PointSequence {
        PointSequence::new(points.iter().map(|&(a, b)| Point2D::real(a, b).unwrap()).collect()).unwrap()
    }

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn scalar_feasible() {
        let s = PointSequence::new(vec![Point2D::new(Complex64::new(0.3, 0.2), real(-0.5)).unwrap()]).unwrap();
        let m = 1.7;
        let p = DecompositionProblem::new(s, HermitianMatrix::from_real_diagonal(&[m - 1.0])).unwrap();
        let out = dykstra_solve(&p, &SolverOptions::default()).unwrap();
        let cert = out.certificate().expect("feasible");
        assert!(cert.residual <= 1e-7);
        assert!(cert.gamma[(0, 0)].re >= 0.0 && cert.delta[(0, 0)].re >= 0.0);
    }

    #[test]
    fn negative_scalar_infeasible() {
        let p = DecompositionProblem::new(seq(&[(0.2, 0.1)]), HermitianMatrix::from_real_diagonal(&[-0.5])).unwrap();
        let out = dykstra_solve(&p, &SolverOptions::default()).unwrap();
        assert!(!out.is_feasible());
        assert!(out.residual() > 0.1);
    }

    #[test]
    fn defect_matrix_is_decomposable() {
        let s = seq(&[(0.0, 0.0), (0.5, 0.1), (-0.3, 0.6)]);
        let x1 = s.defect_matrix(1);
        let p = DecompositionProblem::new(s, x1).unwrap();
        let out = dykstra_solve(&p, &SolverOptions::default()).unwrap();
        assert!(out.is_feasible());
    }

    #[test]
    fn affine_step_is_exact() {
        let s = seq(&[(0.1, -0.2), (0.7, 0.3), (-0.4, 0.5), (0.0, 0.9)]);
        let p = DecompositionProblem::new(s.clone(), upper_bound_lhs(4, 3.0)).unwrap();
        let g = HermitianMatrix::from_upper(4, |i, j| Complex64::new((i * j) as f64, i as f64 - j as f64));
        let d = lower_bound_lhs(4, 2.0);
        let (pg, pd) = project_affine(&p, &g, &d);
        let err = p.residual(&pg, &pd);
        assert!(err <= 1e-12 * p.lhs().frobenius_norm(), "affine residual {err}");
        // projecting twice changes nothing
        let (qg, qd) = project_affine(&p, &pg, &pd);
        assert!(qg.max_abs_diff(&pg) < 1e-14 && qd.max_abs_diff(&pd) < 1e-14);
    }
}
