use super::{
    lower_bound_lhs, solve_decomposition, upper_bound_lhs, AglerCertificate, Decomposition, DecompositionProblem,
    PickProblem, SolverOptions,
};
use crate::error::{Error, Result};
use crate::kernels::PointSequence;

/// Which family of left-hand sides the level parameter indexes.
#[derive(Debug, Clone)]
pub enum BisectTarget {
    /// Pick matrices `M^2 - <w_j, w_i>`; the level is the sup-norm bound `M`.
    Pick(PickProblem),
    /// `M I - J`: the uniform upper Grammian bound.
    UpperBound(PointSequence),
    /// `N J - I`: the uniform lower Grammian bound.
    LowerBound(PointSequence),
}

impl BisectTarget {
    pub fn base(&self) -> &PointSequence {
        match self {
            BisectTarget::Pick(p) => p.base(),
            BisectTarget::UpperBound(s) | BisectTarget::LowerBound(s) => s,
        }
    }

    pub fn problem_at(&self, level: f64) -> Result<DecompositionProblem> {
        match self {
            BisectTarget::Pick(p) => p.problem_at(level),
            BisectTarget::UpperBound(s) => DecompositionProblem::new(s.clone(), upper_bound_lhs(s.len(), level)),
            BisectTarget::LowerBound(s) => DecompositionProblem::new(s.clone(), lower_bound_lhs(s.len(), level)),
        }
    }

    /// A valid lower bound and a first upper guess.
    ///
    /// Any interpolant has norm at least `max |w_i|`, and the diagonal of
    /// both Grammian conditions forces level 1. The first guess for Pick
    /// problems is the constant-function scale `max(1, 2 max |w_i|)`.
    pub fn default_bracket(&self) -> (f64, f64) {
        match self {
            BisectTarget::Pick(p) => {
                let sup = p.targets().sup_norm();
                (sup, (2.0 * sup).max(1.0))
            }
            BisectTarget::UpperBound(_) | BisectTarget::LowerBound(_) => (1.0, 2.0),
        }
    }

    fn probe(&self, level: f64, opts: &SolverOptions) -> Result<Decomposition> {
        solve_decomposition(&self.problem_at(level)?, opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectOptions {
    /// Final bracket width.
    pub bis_tol: f64,
    /// Largest level tried while expanding the bracket.
    pub cap: f64,
    pub max_doublings: usize,
    pub solver: SolverOptions,
}

impl Default for BisectOptions {
    fn default() -> Self {
        Self { bis_tol: 1e-4, cap: f64::INFINITY, max_doublings: 60, solver: SolverOptions::default() }
    }
}

/// Smallest level found feasible, with its certificate.
///
/// `level` is an upper bound on the true constant up to the solver's
/// false-infeasibility margin; `lower` is the last level judged infeasible
/// (or the initial lower bound).
#[derive(Debug, Clone)]
pub struct BisectResult {
    pub level: f64,
    pub lower: f64,
    pub certificate: AglerCertificate,
    pub probes: usize,
}

/// Bisects the level between `lo` and `hi`, doubling `hi` until feasible.
///
/// Returns `lo` directly when it is already feasible.
pub fn bisect_constant(target: &BisectTarget, lo: f64, hi: f64, opts: &BisectOptions) -> Result<BisectResult> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= 0.0 {
        return Err(Error::Input(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut lo = lo.max(0.0);
    let mut hi = hi.max(lo);
    let mut probes = 0;
    // the lower bound itself is attained in boundary cases (one node, constant targets)
    if lo > 0.0 {
        probes += 1;
        if let Decomposition::Feasible(c) = target.probe(lo, &opts.solver)? {
            return Ok(BisectResult { level: lo, lower: lo, certificate: c, probes });
        }
    }
    probes += 1;
    let mut cert = match target.probe(hi, &opts.solver)? {
        Decomposition::Feasible(c) => Some(c),
        Decomposition::Infeasible { .. } => None,
    };
    let mut doublings = 0;
    while cert.is_none() {
        if doublings == opts.max_doublings || 2.0 * hi > opts.cap {
            return Err(Error::BracketFailure { cap: hi });
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        probes += 1;
        cert = target.probe(hi, &opts.solver)?.into_certificate();
    }
    let mut cert = cert.expect("bracket found");
    while hi - lo > opts.bis_tol {
        let mid = 0.5 * (lo + hi);
        probes += 1;
        match target.probe(mid, &opts.solver)? {
            Decomposition::Feasible(c) => {
                hi = mid;
                cert = c;
            }
            Decomposition::Infeasible { .. } => lo = mid,
        }
    }
    Ok(BisectResult { level: hi, lower: lo, certificate: cert, probes })
}
