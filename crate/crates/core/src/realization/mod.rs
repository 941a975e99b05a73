//! Transfer-function realizations `Psi(l) = A + B E_l (I - D E_l)^{-1} C`
//! built from Agler certificates by the lurking-isometry construction.
//!
//! A certificate for `u_i^* u_j - v_i^* v_j = Gamma_ij X1_ij + Delta_ij X2_ij`
//! with Gram factors `Gamma_ij = f_i^* f_j`, `Delta_ij = g_i^* g_j` says the
//! map `u_i (+) E_{l_i} h_i -> v_i (+) h_i`, `h_i = f_i (+) g_i`, is isometric.
//! Any unitary extension `U = [[A, B], [C, D]]` then satisfies
//! `Psi(l_i) u_i = v_i`, and `Psi` is contractive on the bidisk.

mod grid;

use std::sync::Arc;

use num_complex::Complex64;

pub use grid::{grid_radii, random_bidisk_samples, sampled_sup, sup_norm_samples, tensor_grid, DEFAULT_RADII};

use crate::agler::{lower_bound_lhs, upper_bound_lhs, AglerCertificate, DecompositionProblem, PickProblem};
use crate::error::{Error, Result};
use crate::kernels::{Point2D, PointSequence};
use crate::linalg::{complete_to_unitary, eigh, project_psd, psd_factor, solve, ComplexMatrix, HermitianMatrix};

/// Options shared by the realization builders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizationOptions {
    /// Largest accepted Gram mismatch of the isometry pairs.
    pub tol: f64,
    /// Most negative eigenvalue of `Gamma`, `Delta` accepted before factoring.
    pub psd_tol: f64,
    /// Extra auxiliary dimensions appended to the first space.
    pub extra_padding: usize,
}

impl Default for RealizationOptions {
    fn default() -> Self {
        Self { tol: 1e-6, psd_tol: 1e-6, extra_padding: 0 }
    }
}

/// `E_l = l^1 I_{H1} (+) l^2 I_{H2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalSymbol {
    pub l: Point2D,
}

impl DiagonalSymbol {
    pub fn new(l: Point2D) -> Self {
        Self { l }
    }

    /// The diagonal of `E_l` on `H1 (+) H2`.
    pub fn diagonal(&self, dim_h1: usize, dim_h2: usize) -> Vec<Complex64> {
        let mut d = vec![self.l.c1(); dim_h1];
        d.extend(std::iter::repeat_n(self.l.c2(), dim_h2));
        d
    }

    /// `||E_l|| = max(|l^1|, |l^2|)`.
    pub fn norm(&self) -> f64 {
        self.l.sup_modulus()
    }
}

/// Blocks of a unitary colligation on `C^c (+) H1 (+) H2`.
///
/// The coefficient space `C^c`, `c = max(in_dim, out_dim)`, is shared by
/// input and output; the realized function is the top-left
/// `out_dim x in_dim` corner of the `c x c` transfer function.
#[derive(Debug, Clone)]
pub struct TransferRealization {
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
    d: ComplexMatrix,
    dim_h1: usize,
    dim_h2: usize,
    in_dim: usize,
    out_dim: usize,
}

impl TransferRealization {
    /// Splits a square unitary `u` on `C^coef (+) H1 (+) H2`.
    pub fn from_unitary(
        u: &ComplexMatrix,
        dim_h1: usize,
        dim_h2: usize,
        in_dim: usize,
        out_dim: usize,
    ) -> Result<Self> {
        let coef = in_dim.max(out_dim);
        let total = coef + dim_h1 + dim_h2;
        if u.shape() != (total, total) {
            return Err(Error::Dimension(format!("unitary of shape {:?}, expected {total} square", u.shape())));
        }
        Ok(Self {
            a: u.block(0, coef, 0, coef),
            b: u.block(0, coef, coef, total),
            c: u.block(coef, total, 0, coef),
            d: u.block(coef, total, coef, total),
            dim_h1,
            dim_h2,
            in_dim,
            out_dim,
        })
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }

    pub fn dim_h1(&self) -> usize {
        self.dim_h1
    }

    pub fn dim_h2(&self) -> usize {
        self.dim_h2
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn coef_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn state_dim(&self) -> usize {
        self.dim_h1 + self.dim_h2
    }

    /// Reassembles `U = [[A, B], [C, D]]`.
    pub fn unitary(&self) -> ComplexMatrix {
        let coef = self.coef_dim();
        let total = coef + self.state_dim();
        ComplexMatrix::from_fn(total, total, |i, j| match (i < coef, j < coef) {
            (true, true) => self.a[(i, j)],
            (true, false) => self.b[(i, j - coef)],
            (false, true) => self.c[(i - coef, j)],
            (false, false) => self.d[(i - coef, j - coef)],
        })
    }

    fn one_minus_de(&self, e: &[Complex64]) -> ComplexMatrix {
        let s = self.state_dim();
        ComplexMatrix::from_fn(s, s, |i, j| {
            let id = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            id - self.d[(i, j)] * e[j]
        })
    }

    /// The full `c x c` transfer function at `l`.
    pub fn transfer(&self, l: &Point2D) -> Result<ComplexMatrix> {
        let e = DiagonalSymbol::new(*l).diagonal(self.dim_h1, self.dim_h2);
        if self.state_dim() == 0 {
            return Ok(self.a.clone());
        }
        let (x, cond) = solve(&self.one_minus_de(&e), &self.c)
            .map_err(|err| Error::Numeric(format!("resolvent at {l:?}: {err}")))?;
        if !cond.is_finite() {
            return Err(Error::Numeric(format!("resolvent at {l:?} has condition estimate {cond:.3e}")));
        }
        let coef = self.coef_dim();
        let s = self.state_dim();
        Ok(ComplexMatrix::from_fn(coef, coef, |i, j| {
            let mut acc = self.a[(i, j)];
            for k in 0..s {
                acc += self.b[(i, k)] * e[k] * x[(k, j)];
            }
            acc
        }))
    }

    /// Unscaled `Psi(l)`, `out_dim x in_dim`.
    pub fn eval(&self, l: &Point2D) -> Result<ComplexMatrix> {
        Ok(self.transfer(l)?.block(0, self.out_dim, 0, self.in_dim))
    }

    /// Smallest singular value of `I - D E_l`.
    pub fn resolvent_margin(&self, l: &Point2D) -> Result<f64> {
        if self.state_dim() == 0 {
            return Ok(1.0);
        }
        let e = DiagonalSymbol::new(*l).diagonal(self.dim_h1, self.dim_h2);
        let m = self.one_minus_de(&e);
        let g = HermitianMatrix::from_matrix_lossy(&m.adjoint().matmul(&m)?);
        Ok(eigh(&g)?.min_eigenvalue().max(0.0).sqrt())
    }
}

/// What a realization was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HandleKind {
    /// Pick interpolant at level `M`, scale `M`.
    Interpolant,
    /// Column function `Phi` with `Phi(l_i) = e_i`, scale `sqrt(N)`.
    ColumnB,
    /// Row function `Psi` with `Psi(l_i) e_i = 1`, scale `sqrt(M)`.
    RowA,
}

/// A scaled realization: the function `scale * Psi`.
#[derive(Debug, Clone)]
pub struct InterpolantHandle {
    pub real: TransferRealization,
    pub scale: f64,
    pub kind: HandleKind,
    nodes: PointSequence,
}

impl InterpolantHandle {
    pub fn new(real: TransferRealization, scale: f64, kind: HandleKind, nodes: PointSequence) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Input(format!("handle scale must be positive, got {scale}")));
        }
        Ok(Self { real, scale, kind, nodes })
    }

    pub fn nodes(&self) -> &PointSequence {
        &self.nodes
    }

    /// `scale * Psi(l)`.
    pub fn eval(&self, l: &Point2D) -> Result<ComplexMatrix> {
        Ok(self.real.eval(l)?.scale(Complex64::new(self.scale, 0.0)))
    }

    /// Unscaled `Psi(l)`.
    pub fn eval_unscaled(&self, l: &Point2D) -> Result<ComplexMatrix> {
        self.real.eval(l)
    }

    /// The `(0, 0)` entry for scalar handles.
    pub fn eval_scalar(&self, l: &Point2D) -> Result<Complex64> {
        Ok(self.eval(l)?[(0, 0)])
    }
}

/// Free function form of [`InterpolantHandle::eval`].
pub fn eval(handle: &InterpolantHandle, l: &Point2D) -> Result<ComplexMatrix> {
    handle.eval(l)
}

/// Gram factor rows: `H[i][j] = f_i^* f_j`.
fn gram_vectors(h: &HermitianMatrix, psd_tol: f64, name: &str) -> Result<Vec<Vec<Complex64>>> {
    let d = eigh(h)?;
    let top = d.max_eigenvalue().max(1.0);
    if d.min_eigenvalue() < -psd_tol * top {
        return Err(Error::CertificateInconsistent(format!(
            "{name} has eigenvalue {:.3e}",
            d.min_eigenvalue()
        )));
    }
    let f = psd_factor(&project_psd(h)?, 1e-13 * top)?;
    Ok((0..h.dim()).map(|i| f.row(i).iter().map(|z| z.conj()).collect()).collect())
}

fn padded(v: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = v.to_vec();
    out.resize(len, Complex64::new(0.0, 0.0));
    out
}

/// Lurking-isometry realization of `u_i^* u_j - v_i^* v_j = (Gamma o X1 + Delta o X2)_ij`.
///
/// Every `u_i` has length `in_dim`, every `v_i` length `out_dim`.
pub fn lurking_isometry(
    problem: &DecompositionProblem,
    cert: &AglerCertificate,
    u: &[Vec<Complex64>],
    v: &[Vec<Complex64>],
    opts: &RealizationOptions,
) -> Result<TransferRealization> {
    let n = problem.dim();
    if u.len() != n || v.len() != n || cert.gamma.dim() != n || cert.delta.dim() != n {
        return Err(Error::Dimension(format!("isometry data of the wrong size for {n} nodes")));
    }
    let in_dim = u.first().map_or(0, Vec::len);
    let out_dim = v.first().map_or(0, Vec::len);
    if u.iter().any(|x| x.len() != in_dim) || v.iter().any(|x| x.len() != out_dim) {
        return Err(Error::Dimension("ragged isometry vectors".into()));
    }
    let f = gram_vectors(&cert.gamma, opts.psd_tol, "Gamma")?;
    let g = gram_vectors(&cert.delta, opts.psd_tol, "Delta")?;
    let r1 = f.first().map_or(0, Vec::len);
    let r2 = g.first().map_or(0, Vec::len);
    let coef = in_dim.max(out_dim);
    let pad = opts.extra_padding;
    let total = coef + r1 + r2 + pad;

    // layout during completion: [coef | H1 | H2 | padding]
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .map(|i| {
            let l = problem.base().get(i);
            let mut dom = padded(&u[i], coef);
            dom.extend(f[i].iter().map(|z| l.c1() * z));
            dom.extend(g[i].iter().map(|z| l.c2() * z));
            dom.resize(total, Complex64::new(0.0, 0.0));
            let mut cod = padded(&v[i], coef);
            cod.extend_from_slice(&f[i]);
            cod.extend_from_slice(&g[i]);
            cod.resize(total, Complex64::new(0.0, 0.0));
            (dom, cod)
        })
        .collect();
    let unitary = complete_to_unitary(&pairs, total, total, opts.tol).map_err(|err| match err {
        Error::NotIsometric { mismatch } => Error::CertificateInconsistent(format!(
            "isometry pairs mismatch by {mismatch:.3e} (certificate residual {:.3e})",
            cert.residual
        )),
        other => other,
    })?;
    // move the padding into H1: [coef | H1 | padding | H2]
    let perm: Vec<usize> = (0..coef + r1).chain(coef + r1 + r2..total).chain(coef + r1..coef + r1 + r2).collect();
    let unitary = ComplexMatrix::from_fn(total, total, |i, j| unitary[(perm[i], perm[j])]);
    TransferRealization::from_unitary(&unitary, r1 + pad, r2, in_dim, out_dim)
}

fn check_level(level: f64, what: &str) -> Result<()> {
    if level > 0.0 && level.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{what} must be positive, got {level}")))
    }
}

/// The column function `Phi` with `Phi(l_i) = e_i` and `||Phi|| <= sqrt(N)`
/// from a certificate for `N J - I`.
pub fn build_realization_b(
    seq: &PointSequence,
    level: f64,
    cert: &AglerCertificate,
    opts: &RealizationOptions,
) -> Result<InterpolantHandle> {
    check_level(level, "N")?;
    let n = seq.len();
    let problem = DecompositionProblem::new(seq.clone(), lower_bound_lhs(n, level))?;
    let root = level.sqrt();
    let u: Vec<_> = (0..n).map(|_| vec![Complex64::new(root, 0.0)]).collect();
    let v: Vec<_> = (0..n).map(|i| unit(n, i)).collect();
    let real = lurking_isometry(&problem, cert, &u, &v, opts)?;
    InterpolantHandle::new(real, root, HandleKind::ColumnB, seq.clone())
}

/// The row function `Psi` with `Psi(l_i) e_i = 1` and `||Psi|| <= sqrt(M)`
/// from a certificate for `M I - J`.
pub fn build_row_a(
    seq: &PointSequence,
    level: f64,
    cert: &AglerCertificate,
    opts: &RealizationOptions,
) -> Result<InterpolantHandle> {
    check_level(level, "M")?;
    let n = seq.len();
    let problem = DecompositionProblem::new(seq.clone(), upper_bound_lhs(n, level))?;
    let root = level.sqrt();
    let u: Vec<_> = (0..n).map(|i| unit(n, i).into_iter().map(|z| z * root).collect()).collect();
    let v: Vec<_> = (0..n).map(|_| vec![Complex64::new(1.0, 0.0)]).collect();
    let real = lurking_isometry(&problem, cert, &u, &v, opts)?;
    InterpolantHandle::new(real, root, HandleKind::RowA, seq.clone())
}

/// A function of sup norm at most `level` mapping each node to its target.
///
/// The output is `C^m`-valued (`m x 1`) for vector targets and scalar
/// (`1 x 1`) otherwise; the returned function hits the targets as given.
pub fn build_interpolant(
    prob: &PickProblem,
    level: f64,
    cert: &AglerCertificate,
    opts: &RealizationOptions,
) -> Result<InterpolantHandle> {
    check_level(level, "M")?;
    let n = prob.base().len();
    let problem = prob.problem_at(level)?;
    let u: Vec<_> = (0..n).map(|_| vec![Complex64::new(level, 0.0)]).collect();
    let v: Vec<_> = (0..n).map(|i| prob.targets().vector(i)).collect();
    let real = lurking_isometry(&problem, cert, &u, &v, opts)?;
    InterpolantHandle::new(real, level, HandleKind::Interpolant, prob.base().clone())
}

fn unit(n: usize, i: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    e[i] = Complex64::new(1.0, 0.0);
    e
}

/// One entry of a matrix-valued handle, viewed as a scalar function.
#[derive(Debug, Clone)]
pub struct ComponentFunction {
    handle: Arc<InterpolantHandle>,
    row: usize,
    col: usize,
}

impl ComponentFunction {
    pub fn new(handle: Arc<InterpolantHandle>, row: usize, col: usize) -> Result<Self> {
        if row >= handle.real.out_dim() || col >= handle.real.in_dim() {
            return Err(Error::Dimension(format!("entry ({row}, {col}) outside the handle")));
        }
        Ok(Self { handle, row, col })
    }

    pub fn handle(&self) -> &InterpolantHandle {
        &self.handle
    }

    pub fn eval(&self, l: &Point2D) -> Result<Complex64> {
        Ok(self.handle.eval(l)?[(self.row, self.col)])
    }
}

/// The components `phi_i` of the lower-bound column: `phi_i(l_j) = delta_ij`,
/// `sum_i |phi_i|^2 <= N`.
pub fn strong_separation_family(
    seq: &PointSequence,
    level: f64,
    cert: &AglerCertificate,
    opts: &RealizationOptions,
) -> Result<Vec<ComponentFunction>> {
    let handle = Arc::new(build_realization_b(seq, level, cert, opts)?);
    (0..seq.len()).map(|i| ComponentFunction::new(handle.clone(), i, 0)).collect()
}

/// `phi_i = psi_i chi_i`: a row function with `psi_i(l_i) = 1` times a
/// strongly separating family, giving a column with `Phi(l_i) = e_i` and
/// norm at most `bound * sqrt(M)`.
#[derive(Debug, Clone)]
pub struct ComposedColumn {
    psi: Arc<InterpolantHandle>,
    chi: Vec<ComponentFunction>,
    bound: f64,
}

impl ComposedColumn {
    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    /// The advertised norm bound `C sqrt(M)`.
    pub fn norm_bound(&self) -> f64 {
        self.bound * self.psi.scale
    }

    pub fn eval(&self, l: &Point2D) -> Result<Vec<Complex64>> {
        let row = self.psi.eval(l)?;
        self.chi.iter().enumerate().map(|(i, chi)| Ok(row[(0, i)] * chi.eval(l)?)).collect()
    }
}

/// Builds the composed column from an upper-bound row `psi_row` and functions
/// `chi_i` with `chi_i(l_j) = delta_ij`, `|chi_i| <= bound`.
pub fn compose_iii_to_iv(
    psi_row: &InterpolantHandle,
    chi: &[ComponentFunction],
    bound: f64,
) -> Result<ComposedColumn> {
    check_level(bound, "C")?;
    if psi_row.real.out_dim() != 1 || psi_row.real.in_dim() != chi.len() {
        return Err(Error::Dimension(format!(
            "row of shape 1x{} against {} separating functions",
            psi_row.real.in_dim(),
            chi.len()
        )));
    }
    if chi.iter().any(|c| c.handle().nodes() != psi_row.nodes()) {
        return Err(Error::Input("row function and separating family live on different node sets".into()));
    }
    Ok(ComposedColumn { psi: Arc::new(psi_row.clone()), chi: chi.to_vec(), bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agler::{barrier_solve, bisect_constant, BisectOptions, BisectTarget, SolverOptions};

    fn seq(points: &[(f64, f64)]) -> PointSequence {
        PointSequence::new(points.iter().map(|&(a, b)| Point2D::real(a, b).unwrap()).collect()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_point_column_is_constant_unit() {
        let s = seq(&[(0.0, 0.0)]);
        let p = DecompositionProblem::new(s.clone(), lower_bound_lhs(1, 1.0)).unwrap();
        let cert = barrier_solve(&p, &SolverOptions::default()).unwrap().into_certificate().unwrap();
        let h = build_realization_b(&s, 1.0, &cert, &RealizationOptions::default()).unwrap();
        for l in [Point2D::origin(), Point2D::real(0.7, -0.4).unwrap()] {
            assert!((h.eval(&l).unwrap()[(0, 0)] - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn two_point_interpolant() {
        let s = seq(&[(0.0, 0.0), (0.5, 0.0)]);
        let prob = PickProblem::scalar(s, vec![c(0.0), c(0.5)]).unwrap();
        let r = bisect_constant(&BisectTarget::Pick(prob.clone()), 0.5, 1.0, &BisectOptions::default()).unwrap();
        let h = build_interpolant(&prob, r.level, &r.certificate, &RealizationOptions::default()).unwrap();
        assert!(h.eval_scalar(&Point2D::origin()).unwrap().norm() < 1e-8);
        assert!((h.eval_scalar(&Point2D::real(0.5, 0.0).unwrap()).unwrap() - c(0.5)).norm() < 1e-8);
        assert!(h.real.unitary().unitarity_defect() < 1e-10);
    }

    #[test]
    fn origin_evaluation_is_scaled_a() {
        let s = seq(&[(0.1, 0.2), (-0.5, 0.4), (0.3, -0.6)]);
        let r = bisect_constant(&BisectTarget::LowerBound(s.clone()), 1.0, 2.0, &BisectOptions::default()).unwrap();
        let h = build_realization_b(&s, r.level, &r.certificate, &RealizationOptions::default()).unwrap();
        let expect = h.real.a().block(0, 3, 0, 1).scale(c(h.scale));
        assert!(h.eval(&Point2D::origin()).unwrap().max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn inconsistent_certificate_rejected() {
        let s = seq(&[(0.1, 0.2), (-0.5, 0.4)]);
        let bogus = AglerCertificate {
            gamma: HermitianMatrix::identity(2),
            delta: HermitianMatrix::zeros(2),
            residual: 1.0,
            iterations: 0,
        };
        let err = build_realization_b(&s, 3.0, &bogus, &RealizationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::CertificateInconsistent(_)));
    }
}
