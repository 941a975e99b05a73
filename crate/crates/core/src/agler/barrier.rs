use num_complex::Complex64;

use super::{AglerCertificate, Decomposition, DecompositionProblem, SolverOptions};
use crate::error::Result;
use crate::linalg::{project_psd, Cholesky, HermitianMatrix};

/// Barrier-path growth factor.
const PATH_STEP: f64 = 10.0;
const MAX_CENTERING_STEPS: usize = 200;
/// Centering stops once half the squared Newton decrement falls below this.
const CENTERED: f64 = 1e-10;
/// The path is abandoned (verdict: infeasible) once the duality gap is this
/// small relative to the initial margin.
const GAP_FLOOR: f64 = 1e-12;

/// Sparse entries `(row, col, value)` of one real coordinate direction.
type Direction = Vec<(usize, usize, Complex64)>;

/// Feasibility by a log-barrier path in the margin variable `t`.
///
/// `Gamma` is eliminated through the affine constraint,
/// `Gamma = P / X1 - Delta o (X2 / X1)` (entrywise division), and the
/// method maximizes `t` subject to `Delta - t I > 0` and `Gamma - t I > 0`.
/// The first iterate with `t > 0` is returned as the certificate. Once the
/// duality gap proves `t* < 0`, or the path reaches the boundary without a
/// sign, the last iterate is projected onto the cone and accepted if its
/// residual is within `feas_tol`.
pub fn barrier_solve(p: &DecompositionProblem, opts: &SolverOptions) -> Result<Decomposition> {
    let state = Barrier::new(p);
    state.run(opts)
}

struct Barrier<'a> {
    p: &'a DecompositionProblem,
    n: usize,
    /// `P / X1`.
    base: HermitianMatrix,
    /// `X2 / X1`.
    ratio: HermitianMatrix,
    dirs: Vec<Direction>,
}

struct Point {
    v: Vec<f64>,
    t: f64,
}

struct Evaluated {
    value: f64,
    inv1: HermitianMatrix,
    inv2: HermitianMatrix,
}

impl<'a> Barrier<'a> {
    fn new(p: &'a DecompositionProblem) -> Self {
        let n = p.dim();
        let base = HermitianMatrix::from_upper(n, |i, j| p.lhs()[(i, j)] / p.x1()[(i, j)]);
        let ratio = HermitianMatrix::from_upper(n, |i, j| p.x2()[(i, j)] / p.x1()[(i, j)]);
        let one = Complex64::new(1.0, 0.0);
        let imag = Complex64::new(0.0, 1.0);
        let mut dirs: Vec<Direction> = (0..n).map(|i| vec![(i, i, one)]).collect();
        for i in 0..n {
            for j in i + 1..n {
                dirs.push(vec![(i, j, one), (j, i, one)]);
                dirs.push(vec![(i, j, imag), (j, i, -imag)]);
            }
        }
        Self { p, n, base, ratio, dirs }
    }

    fn delta(&self, v: &[f64]) -> HermitianMatrix {
        let n = self.n;
        let mut m = crate::linalg::ComplexMatrix::zeros(n, n);
        for (dir, &x) in self.dirs.iter().zip(v) {
            for &(i, j, a) in dir {
                m[(i, j)] += a * x;
            }
        }
        HermitianMatrix::from_upper(n, |i, j| m[(i, j)])
    }

    fn gamma(&self, delta: &HermitianMatrix) -> HermitianMatrix {
        &self.base - &delta.schur(&self.ratio)
    }

    fn shifted(m: &HermitianMatrix, t: f64) -> HermitianMatrix {
        m - &HermitianMatrix::identity(m.dim()).scale(t)
    }

    fn evaluate(&self, z: &Point, s: f64) -> Option<Evaluated> {
        let delta = self.delta(&z.v);
        let gamma = self.gamma(&delta);
        let c1 = Cholesky::new(&Self::shifted(&delta, z.t))?;
        let c2 = Cholesky::new(&Self::shifted(&gamma, z.t))?;
        let value = -s * z.t - c1.log_det() - c2.log_det();
        value.is_finite().then(|| Evaluated { value, inv1: c1.inverse(), inv2: c2.inverse() })
    }

    /// Gradient and Hessian of the barrier objective; the last coordinate is `t`.
    fn derivatives(&self, e: &Evaluated, s: f64) -> (Vec<f64>, Vec<f64>) {
        let k = self.dirs.len();
        let dim = k + 1;
        let mut g = vec![0.0; dim];
        let mut h = vec![0.0; dim * dim];
        g[k] = -s;
        for (block, z) in [(0, &e.inv1), (1, &e.inv2)] {
            let coef = |i: usize, j: usize, a: Complex64| if block == 0 { a } else { -a * self.ratio[(i, j)] };
            let z2 = z.as_matrix().matmul(z.as_matrix()).expect("square");
            let mut tr = 0.0;
            let mut tr2 = 0.0;
            for i in 0..self.n {
                tr += z[(i, i)].re;
                tr2 += z2[(i, i)].re;
            }
            g[k] += tr;
            h[k * dim + k] += tr2;
            for (a, da) in self.dirs.iter().enumerate() {
                let mut ga = 0.0;
                let mut hta = 0.0;
                for &(i, j, x) in da {
                    let alpha = coef(i, j, x);
                    ga -= (alpha * z[(j, i)]).re;
                    hta -= (alpha * z2[(j, i)]).re;
                }
                g[a] += ga;
                h[a * dim + k] += hta;
                h[k * dim + a] += hta;
                for (b, db) in self.dirs.iter().enumerate().skip(a) {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &(i, j, x) in da {
                        let alpha = coef(i, j, x);
                        for &(p, q, y) in db {
                            acc += alpha * coef(p, q, y) * z[(j, p)] * z[(q, i)];
                        }
                    }
                    h[a * dim + b] += acc.re;
                    if b != a {
                        h[b * dim + a] += acc.re;
                    }
                }
            }
        }
        (g, h)
    }

    fn certificate(&self, z: &Point, iterations: usize) -> AglerCertificate {
        let delta = self.delta(&z.v);
        let gamma = self.gamma(&delta);
        let residual = self.p.residual(&gamma, &delta);
        AglerCertificate { gamma, delta, residual, iterations }
    }

    /// The last iterate pushed onto the cone; accepted when its residual
    /// is within `feas_tol`.
    fn undecided(&self, z: &Point, steps: usize, opts: &SolverOptions) -> Result<Decomposition> {
        let delta = project_psd(&self.delta(&z.v))?;
        let gamma = project_psd(&self.gamma(&self.delta(&z.v)))?;
        let residual = self.p.residual(&gamma, &delta);
        Ok(if residual <= opts.feas_tol {
            Decomposition::Feasible(AglerCertificate { gamma, delta, residual, iterations: steps })
        } else {
            Decomposition::Infeasible { residual: -z.t, iterations: steps }
        })
    }

    fn run(&self, opts: &SolverOptions) -> Result<Decomposition> {
        let n = self.n;
        let start_margin = self.base.min_eigenvalue()?.min(0.0);
        let mut z = Point { v: vec![0.0; self.dirs.len()], t: start_margin - 1.0 };
        let scale = 1.0 + z.t.abs();
        let barrier_dim = 2.0 * n as f64;
        let mut s = barrier_dim / scale;
        let mut steps = 0;
        loop {
            for _ in 0..MAX_CENTERING_STEPS {
                if steps >= opts.max_iter {
                    return self.undecided(&z, steps, opts);
                }
                // both breakdowns come from ill-conditioning at the boundary
                let Some(e) = self.evaluate(&z, s) else {
                    return self.undecided(&z, steps, opts);
                };
                let (g, h) = self.derivatives(&e, s);
                let Some(dz) = solve_regularized(&h, &g) else {
                    return self.undecided(&z, steps, opts);
                };
                let slope: f64 = g.iter().zip(&dz).map(|(a, b)| a * b).sum();
                steps += 1;
                if -slope / 2.0 <= CENTERED {
                    break;
                }
                let mut step = 1.0;
                loop {
                    let trial = Point {
                        v: z.v.iter().zip(&dz).map(|(x, d)| x + step * d).collect(),
                        t: z.t + step * dz[dz.len() - 1],
                    };
                    if let Some(te) = self.evaluate(&trial, s) {
                        if te.value <= e.value + 0.25 * step * slope {
                            z = trial;
                            break;
                        }
                    }
                    step *= 0.5;
                    if step < 1e-14 {
                        break;
                    }
                }
                if z.t > 0.0 {
                    return Ok(Decomposition::Feasible(self.certificate(&z, steps)));
                }
                if step < 1e-14 {
                    break;
                }
            }
            let gap = barrier_dim / s;
            if z.t + gap < 0.0 || gap < GAP_FLOOR * scale {
                return self.undecided(&z, steps, opts);
            }
            s *= PATH_STEP;
        }
    }
}

/// [`solve_spd`] with a growing ridge when `h` is numerically singular.
fn solve_regularized(h: &[f64], g: &[f64]) -> Option<Vec<f64>> {
    let dim = g.len();
    let peak = (0..dim).map(|i| h[i * dim + i].abs()).fold(0.0, f64::max);
    let mut ridge = 0.0;
    for _ in 0..6 {
        let mut m = h.to_vec();
        for i in 0..dim {
            m[i * dim + i] += ridge;
        }
        if let Some(x) = solve_spd(&mut m, g) {
            return Some(x);
        }
        ridge = if ridge == 0.0 { 1e-14 * peak.max(1.0) } else { ridge * 100.0 };
    }
    None
}

/// Solves `h x = -g` for symmetric positive definite `h` (row-major) by
/// Cholesky; `h` is overwritten.
fn solve_spd(h: &mut [f64], g: &[f64]) -> Option<Vec<f64>> {
    let n = g.len();
    for j in 0..n {
        let mut d = h[j * n + j];
        for k in 0..j {
            d -= h[j * n + k] * h[j * n + k];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        h[j * n + j] = d;
        for i in j + 1..n {
            let mut acc = h[i * n + j];
            for k in 0..j {
                acc -= h[i * n + k] * h[j * n + k];
            }
            h[i * n + j] = acc / d;
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut acc = -g[i];
        for k in 0..i {
            acc -= h[i * n + k] * y[k];
        }
        y[i] = acc / h[i * n + i];
    }
    for i in (0..n).rev() {
        let mut acc = y[i];
        for k in i + 1..n {
            acc -= h[k * n + i] * y[k];
        }
        y[i] = acc / h[i * n + i];
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Point2D, PointSequence};

    fn seq(points: &[(f64, f64)]) -> PointSequence {
        PointSequence::new(points.iter().map(|&(a, b)| Point2D::real(a, b).unwrap()).collect()).unwrap()
    }

    #[test]
    fn spd_solve_matches_hand_solution() {
        let mut h = vec![4.0, 2.0, 2.0, 3.0];
        let x = solve_spd(&mut h, &[-2.0, -1.0]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-14 && x[1].abs() < 1e-14);
    }

    #[test]
    fn ones_matrix_is_feasible_and_certified() {
        let s = seq(&[(0.0, 0.0), (0.6, -0.2), (-0.3, 0.7)]);
        let p = DecompositionProblem::new(s, HermitianMatrix::ones(3)).unwrap();
        let cert = barrier_solve(&p, &SolverOptions::default()).unwrap().into_certificate().expect("feasible");
        assert!(cert.residual < 1e-12);
        assert!(cert.gamma.min_eigenvalue().unwrap() > 0.0 && cert.delta.min_eigenvalue().unwrap() > 0.0);
    }

    #[test]
    fn boundary_problem_is_accepted_within_tolerance() {
        let p = DecompositionProblem::new(seq(&[(0.3, 0.1)]), HermitianMatrix::zeros(1)).unwrap();
        let cert = barrier_solve(&p, &SolverOptions::default()).unwrap().into_certificate().expect("feasible");
        assert!(cert.residual <= 1e-7);
    }

    #[test]
    fn negative_identity_is_infeasible() {
        let s = seq(&[(0.1, 0.0), (0.5, 0.4)]);
        let p = DecompositionProblem::new(s, HermitianMatrix::identity(2).scale(-1.0)).unwrap();
        assert!(!barrier_solve(&p, &SolverOptions::default()).unwrap().is_feasible());
    }
}
