//! Agler decompositions `P = Gamma o X1 + Delta o X2` with `Gamma, Delta >= 0`.
//!
//! `X_m[i][j] = 1 - conj(l_i^m) l_j^m` are the coordinate defect matrices of
//! the nodes and `o` is the entrywise product. Three left-hand sides matter:
//!
//! * Pick matrices `M^2 - <w_j, w_i>`: feasible iff some function of sup norm
//!   at most `M` maps every node `l_i` to `w_i`;
//! * `M I - J`: uniform upper bound `G^k <= M I` over admissible kernels;
//! * `N J - I`: uniform lower bound `N G^k >= I` over admissible kernels.
//!
//! Feasibility is decided by a log-barrier method ([`barrier_solve`]) or by
//! Dykstra's alternating projections ([`dykstra_solve`]); minimal levels are
//! found by bisection ([`bisect_constant`]).

mod barrier;
mod bisect;
mod dykstra;
mod verify;

use num_complex::Complex64;

pub use bisect::{bisect_constant, BisectOptions, BisectResult, BisectTarget};
pub use barrier::barrier_solve;
pub use dykstra::{dykstra_solve, polish_certificate, project_affine};
pub use verify::{verify_certificate, CertificateKind, KernelCheck, VerificationReport, VerifyTolerances};

use crate::error::{Error, Result};
use crate::kernels::PointSequence;
use crate::linalg::HermitianMatrix;

/// Feasibility engine used by [`solve_decomposition`] and the bisection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Log-barrier path in the eigenvalue margin ([`barrier_solve`]).
    #[default]
    Barrier,
    /// Dykstra's alternating projections ([`dykstra_solve`]).
    Dykstra,
}

/// Iteration controls for the feasibility solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Frobenius residual at which a Dykstra iterate is accepted.
    pub feas_tol: f64,
    /// Dykstra iterations or barrier Newton steps.
    pub max_iter: usize,
    /// Stop before `max_iter` when the observed linear rate cannot reach
    /// `feas_tol` within the remaining budget.
    pub early_exit: bool,
    pub method: Method,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { feas_tol: 1e-7, max_iter: 20_000, early_exit: true, method: Method::Barrier }
    }
}

/// Outcome of a feasibility run.
///
/// For Dykstra, `Infeasible` only means the budget ran out and `residual`
/// is the best affine residual seen. For the barrier method it means the
/// duality gap excluded a positive margin (or the path stalled at the
/// boundary) and `residual` is the eigenvalue deficit of the last iterate.
#[derive(Debug, Clone)]
pub enum Decomposition {
    Feasible(AglerCertificate),
    Infeasible { residual: f64, iterations: usize },
}

impl Decomposition {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decomposition::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&AglerCertificate> {
        match self {
            Decomposition::Feasible(c) => Some(c),
            Decomposition::Infeasible { .. } => None,
        }
    }

    pub fn into_certificate(self) -> Option<AglerCertificate> {
        match self {
            Decomposition::Feasible(c) => Some(c),
            Decomposition::Infeasible { .. } => None,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            Decomposition::Feasible(c) => c.residual,
            Decomposition::Infeasible { residual, .. } => *residual,
        }
    }
}

/// Runs the engine selected by `opts.method`.
pub fn solve_decomposition(p: &DecompositionProblem, opts: &SolverOptions) -> Result<Decomposition> {
    match opts.method {
        Method::Barrier => barrier_solve(p, opts),
        Method::Dykstra => dykstra_solve(p, opts),
    }
}

/// A left-hand side together with the cached defect matrices of its nodes.
#[derive(Debug, Clone)]
pub struct DecompositionProblem {
    base: PointSequence,
    lhs: HermitianMatrix,
    x1: HermitianMatrix,
    x2: HermitianMatrix,
}

impl DecompositionProblem {
    pub fn new(base: PointSequence, lhs: HermitianMatrix) -> Result<Self> {
        if lhs.dim() != base.len() {
            return Err(Error::Dimension(format!("{}-dim left-hand side on {} points", lhs.dim(), base.len())));
        }
        let x1 = base.defect_matrix(1);
        let x2 = base.defect_matrix(2);
        // |1 - conj(a) b| >= 1 - |a||b| > 0 inside the bidisk; the closed-form
        // affine projection divides by |x1|^2 + |x2|^2.
        let n = base.len();
        for i in 0..n {
            for j in 0..n {
                if x1[(i, j)].norm() == 0.0 || x2[(i, j)].norm() == 0.0 {
                    return Err(Error::Numeric(format!("vanishing defect entry at ({i}, {j})")));
                }
            }
        }
        Ok(Self { base, lhs, x1, x2 })
    }

    pub fn base(&self) -> &PointSequence {
        &self.base
    }

    pub fn lhs(&self) -> &HermitianMatrix {
        &self.lhs
    }

    pub fn x1(&self) -> &HermitianMatrix {
        &self.x1
    }

    pub fn x2(&self) -> &HermitianMatrix {
        &self.x2
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// `Gamma o X1 + Delta o X2`.
    pub fn combine(&self, gamma: &HermitianMatrix, delta: &HermitianMatrix) -> HermitianMatrix {
        &gamma.schur(&self.x1) + &delta.schur(&self.x2)
    }

    /// Frobenius norm of `P - Gamma o X1 - Delta o X2`.
    pub fn residual(&self, gamma: &HermitianMatrix, delta: &HermitianMatrix) -> f64 {
        (&self.lhs - &self.combine(gamma, delta)).frobenius_norm()
    }
}

/// PSD pair witnessing a decomposition of a given left-hand side.
#[derive(Debug, Clone)]
pub struct AglerCertificate {
    pub gamma: HermitianMatrix,
    pub delta: HermitianMatrix,
    pub residual: f64,
    pub iterations: usize,
}

/// Interpolation data: one target per node, scalar or vector valued.
#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    Scalar(Vec<Complex64>),
    /// Each target is a vector in `C^m`; the interpolant is `C^m`-valued.
    Vector(Vec<Vec<Complex64>>),
}

impl Targets {
    pub fn len(&self) -> usize {
        match self {
            Targets::Scalar(w) => w.len(),
            Targets::Vector(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimension of the value space.
    pub fn value_dim(&self) -> usize {
        match self {
            Targets::Scalar(_) => 1,
            Targets::Vector(w) => w.first().map_or(0, Vec::len),
        }
    }

    /// Target `i` as a vector.
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        match self {
            Targets::Scalar(w) => vec![w[i]],
            Targets::Vector(w) => w[i].clone(),
        }
    }

    /// `max_i |w_i|`.
    pub fn sup_norm(&self) -> f64 {
        (0..self.len())
            .map(|i| crate::linalg::norm(&self.vector(i)))
            .fold(0.0, f64::max)
    }

    /// Gram matrix `W[i][j] = <w_j, w_i> = w_i^* w_j`.
    pub fn gram(&self) -> HermitianMatrix {
        HermitianMatrix::from_upper(self.len(), |i, j| crate::linalg::inner(&self.vector(i), &self.vector(j)))
    }
}

/// A Pick interpolation problem `l_i -> w_i`.
#[derive(Debug, Clone)]
pub struct PickProblem {
    base: PointSequence,
    targets: Targets,
}

impl PickProblem {
    pub fn new(base: PointSequence, targets: Targets) -> Result<Self> {
        if targets.len() != base.len() {
            return Err(Error::Input(format!("{} targets for {} points", targets.len(), base.len())));
        }
        if let Targets::Vector(w) = &targets {
            let m = targets.value_dim();
            if m == 0 || w.iter().any(|v| v.len() != m) {
                return Err(Error::Input("vector targets must share a positive dimension".into()));
            }
        }
        let finite = (0..targets.len()).all(|i| targets.vector(i).iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        if !finite {
            return Err(Error::NonFinite("targets"));
        }
        Ok(Self { base, targets })
    }

    pub fn scalar(base: PointSequence, targets: Vec<Complex64>) -> Result<Self> {
        Self::new(base, Targets::Scalar(targets))
    }

    pub fn base(&self) -> &PointSequence {
        &self.base
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    /// Pick matrix `P[i][j] = M^2 - <w_j, w_i>`.
    pub fn pick_matrix(&self, level: f64) -> HermitianMatrix {
        let w = self.targets.gram();
        HermitianMatrix::from_upper(self.base.len(), |i, j| Complex64::new(level * level, 0.0) - w[(i, j)])
    }

    pub fn problem_at(&self, level: f64) -> Result<DecompositionProblem> {
        DecompositionProblem::new(self.base.clone(), self.pick_matrix(level))
    }
}

/// `M I - J`.
pub fn upper_bound_lhs(n: usize, level: f64) -> HermitianMatrix {
    &HermitianMatrix::identity(n).scale(level) - &HermitianMatrix::ones(n)
}

/// `N J - I`.
pub fn lower_bound_lhs(n: usize, level: f64) -> HermitianMatrix {
    &HermitianMatrix::ones(n).scale(level) - &HermitianMatrix::identity(n)
}

/// Is there a function of norm at most `level` solving `prob`?
pub fn pick_feasible_at(prob: &PickProblem, level: f64, opts: &SolverOptions) -> Result<Decomposition> {
    if level <= 0.0 {
        return Err(Error::Input(format!("level must be positive, got {level}")));
    }
    solve_decomposition(&prob.problem_at(level)?, opts)
}

/// Decomposition of `M I - J`: the upper Grammian bound at level `M`.
pub fn separation_decomposition_a(seq: &PointSequence, level: f64, opts: &SolverOptions) -> Result<Decomposition> {
    solve_decomposition(&DecompositionProblem::new(seq.clone(), upper_bound_lhs(seq.len(), level))?, opts)
}

/// Decomposition of `N J - I`: the lower Grammian bound at level `N`.
pub fn separation_decomposition_b(seq: &PointSequence, level: f64, opts: &SolverOptions) -> Result<Decomposition> {
    solve_decomposition(&DecompositionProblem::new(seq.clone(), lower_bound_lhs(seq.len(), level))?, opts)
}
