//! Sequence diagnostics: Gleason distance, the BCL product, separation
//! constants, Riesz bounds and the Gram/Carleson comparison.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::agler::{bisect_constant, BisectOptions, BisectResult, BisectTarget, PickProblem};
use crate::error::{Error, Result};
use crate::kernels::{normalized_grammian, KernelSample, Point2D, PointSequence};
use crate::linalg::{eigh, psd_factor, Cholesky, ComplexMatrix, HermitianMatrix};

/// Bisection cap for weak separation.
pub const SEPARATION_CAP: f64 = 1e6;

/// `|a - b| / |1 - conj(b) a|`.
pub fn pseudo_hyperbolic(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (Complex64::new(1.0, 0.0) - b.conj() * a).norm()
}

/// Coordinatewise maximum of the pseudo-hyperbolic distances.
pub fn gleason(p: &Point2D, q: &Point2D) -> f64 {
    pseudo_hyperbolic(p.c1(), q.c1()).max(pseudo_hyperbolic(p.c2(), q.c2()))
}

/// `min_i prod_{j != i} rho(l_i, l_j)`; 1 for a single point.
pub fn bcl_condition(seq: &PointSequence) -> f64 {
    let pts = seq.points();
    (0..pts.len())
        .map(|i| (0..pts.len()).filter(|&j| j != i).map(|j| gleason(&pts[i], &pts[j])).product::<f64>())
        .fold(1.0, f64::min)
}

/// `min_{i != j} rho(l_i, l_j)`; 1 for a single point.
pub fn gleason_min(seq: &PointSequence) -> f64 {
    let pts = seq.points();
    let mut m = 1.0_f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.min(gleason(&pts[i], &pts[j]));
        }
    }
    m
}

/// A bisected level, or the cap when the bracket could not be closed below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CappedLevel {
    pub value: f64,
    pub cap_exceeded: bool,
}

/// Largest two-point constant `M(l_i -> 1, l_j -> 0)` over ordered pairs.
pub fn weak_separation(seq: &PointSequence, opts: &BisectOptions) -> Result<CappedLevel> {
    let n = seq.len();
    if n < 2 {
        return Ok(CappedLevel { value: 1.0, cap_exceeded: false });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let opts = BisectOptions { cap: opts.cap.min(SEPARATION_CAP), ..*opts };
    let levels = pairs
        .par_iter()
        .map(|&(i, j)| {
            let sub = seq.subsequence(&[i, j])?;
            let prob = PickProblem::scalar(sub, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])?;
            Ok(capped(bisect_constant(&BisectTarget::Pick(prob), 1.0, 2.0, &opts), opts.cap)?.0)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(levels.into_iter().fold(CappedLevel { value: 1.0, cap_exceeded: false }, |acc, l| CappedLevel {
        value: acc.value.max(l.value),
        cap_exceeded: acc.cap_exceeded || l.cap_exceeded,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    pub gleason_min: f64,
    pub bcl_c: f64,
    pub weak_m: CappedLevel,
    /// Bisected level of `N J - I`.
    pub strong_n: CappedLevel,
    /// Bisected level of `M I - J`.
    pub a_m: CappedLevel,
}

/// The report together with the certificates behind `strong_n` and `a_m`;
/// a certificate is absent when its level hit the cap.
#[derive(Debug, Clone)]
pub struct SeparationAnalysis {
    pub report: SeparationReport,
    pub upper: Option<BisectResult>,
    pub lower: Option<BisectResult>,
}

fn capped(r: Result<BisectResult>, cap: f64) -> Result<(CappedLevel, Option<BisectResult>)> {
    match r {
        Ok(r) => Ok((CappedLevel { value: r.level, cap_exceeded: false }, Some(r))),
        Err(Error::BracketFailure { .. }) => Ok((CappedLevel { value: cap, cap_exceeded: true }, None)),
        Err(e) => Err(e),
    }
}

/// All separation constants; every bisection stops at `min(opts.cap, SEPARATION_CAP)`.
pub fn separation_report(seq: &PointSequence, opts: &BisectOptions) -> Result<SeparationAnalysis> {
    let weak_m = weak_separation(seq, opts)?;
    let opts = BisectOptions { cap: opts.cap.min(SEPARATION_CAP), ..*opts };
    let (upper, lower) = rayon::join(
        || bisect_constant(&BisectTarget::UpperBound(seq.clone()), 1.0, 2.0, &opts),
        || bisect_constant(&BisectTarget::LowerBound(seq.clone()), 1.0, 2.0, &opts),
    );
    let (a_m, upper) = capped(upper, opts.cap)?;
    let (strong_n, lower) = capped(lower, opts.cap)?;
    Ok(SeparationAnalysis {
        report: SeparationReport { gleason_min: gleason_min(seq), bcl_c: bcl_condition(seq), weak_m, strong_n, a_m },
        upper,
        lower,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonReport {
    /// `lambda_max(G^k)`.
    pub gram_norm: f64,
    /// Best constant squared in `sum |f(l_i)|^2 / ||k_i||^2 <= C^2 ||f||^2` on the span of the `k_i`.
    pub embed_sq: f64,
    pub riesz_lo: f64,
    pub riesz_hi: f64,
}

/// Gram norm against the frame-operator norm of the normalized kernel functions.
///
/// With `G = L L^*` the normalized functions have coordinates given by the
/// rows of `L`, and their frame operator is `L^* L`, whose top eigenvalue is
/// the squared Carleson constant.
pub fn carleson_report(sample: &KernelSample) -> Result<CarlesonReport> {
    let g = normalized_grammian(sample)?;
    let d = eigh(g.matrix())?;
    let factor: ComplexMatrix = match Cholesky::new(g.matrix()) {
        Some(c) => c.factor().clone(),
        None => psd_factor(g.matrix(), 1e-12)?,
    };
    let frame = HermitianMatrix::from_matrix_lossy(&factor.adjoint().matmul(&factor)?);
    Ok(CarlesonReport {
        gram_norm: d.max_eigenvalue(),
        embed_sq: frame.max_eigenvalue()?,
        riesz_lo: d.min_eigenvalue().max(0.0),
        riesz_hi: d.max_eigenvalue(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszEntry {
    pub riesz_lo: f64,
    pub riesz_hi: f64,
    pub violated: bool,
}

#[derive(Debug, Clone)]
pub struct RieszReport {
    pub level: f64,
    pub entries: Vec<RieszEntry>,
}

impl RieszReport {
    pub fn violations(&self) -> usize {
        self.entries.iter().filter(|e| e.violated).count()
    }
}

/// Tests `1/M^2 - tol <= lambda_min(G^k)` and `lambda_max(G^k) <= M^2 + tol`
/// on every kernel.
pub fn riesz_check(seq: &PointSequence, kernels: &[KernelSample], level: f64, tol: f64) -> Result<RieszReport> {
    if !(level > 0.0) {
        return Err(Error::Input(format!("Riesz level must be positive, got {level}")));
    }
    let m2 = level * level;
    let entries = kernels
        .par_iter()
        .map(|k| {
            if k.base() != seq {
                return Err(Error::Input("kernel sampled on a different sequence".into()));
            }
            let r = carleson_report(k)?;
            let violated = r.riesz_lo < 1.0 / m2 - tol || r.riesz_hi > m2 + tol;
            Ok(RieszEntry { riesz_lo: r.riesz_lo, riesz_hi: r.riesz_hi, violated })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RieszReport { level, entries })
}

/// Sampled lower estimate of the interpolation constant.
#[derive(Debug, Clone)]
pub struct InterpolationEstimate {
    /// Maximum over the sampled targets.
    pub value: f64,
    pub levels: Vec<f64>,
}

/// Maximum of the bisected Pick constant over `samples` random unimodular
/// target vectors.
pub fn interpolation_constant_estimate(
    seq: &PointSequence,
    samples: usize,
    seed: u64,
    opts: &BisectOptions,
) -> Result<InterpolationEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<Vec<Complex64>> = (0..samples)
        .map(|_| (0..seq.len()).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect())
        .collect();
    let levels = targets
        .into_par_iter()
        .map(|w| {
            let t = BisectTarget::Pick(PickProblem::scalar(seq.clone(), w)?);
            let (lo, hi) = t.default_bracket();
            Ok(bisect_constant(&t, lo, hi, opts)?.level)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(InterpolationEstimate { value: levels.iter().copied().fold(0.0, f64::max), levels })
}

/// Classical disk Pick constant: `sqrt` of the top generalized eigenvalue of
/// `(conj(w_i) w_j S_ij)` against the Szegő Gram `S`.
pub fn one_variable_pick_constant(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if z.len() != w.len() || z.is_empty() {
        return Err(Error::Input(format!("{} nodes and {} targets", z.len(), w.len())));
    }
    let n = z.len();
    let s = HermitianMatrix::from_upper(n, |i, j| {
        Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z[i].conj() * z[j])
    });
    let inv_sqrt = eigh(&s)?.reconstruct_with(|l| 1.0 / l.sqrt());
    let ws = HermitianMatrix::from_upper(n, |i, j| w[i].conj() * w[j] * s[(i, j)]);
    let t = inv_sqrt.as_matrix().matmul(ws.as_matrix())?.matmul(inv_sqrt.as_matrix())?;
    Ok(HermitianMatrix::from_matrix_lossy(&t).max_eigenvalue()?.max(0.0).sqrt())
}

/// The disk coordinates of a sequence lying in a coordinate slice
/// (`l^2 = 0` or `l^1 = 0` throughout), if it does.
pub fn one_variable_slice(seq: &PointSequence) -> Option<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    if seq.points().iter().all(|p| p.c2() == zero) {
        Some(seq.points().iter().map(Point2D::c1).collect())
    } else if seq.points().iter().all(|p| p.c1() == zero) {
        Some(seq.points().iter().map(Point2D::c2).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{sample_kernel, ProductKernel};

    fn seq(points: &[(f64, f64)]) -> PointSequence {
        PointSequence::new(points.iter().map(|&(a, b)| Point2D::real(a, b).unwrap()).collect()).unwrap()
    }

    fn pt(a: f64, b: f64) -> Point2D {
        Point2D::real(a, b).unwrap()
    }

    #[test]
    fn gleason_examples() {
        assert_eq!(gleason(&pt(0.3, -0.2), &pt(0.3, -0.2)), 0.0);
        assert!((gleason(&pt(0.0, 0.0), &pt(0.5, 0.3)) - 0.5).abs() < 1e-15);
        let (p, q) = (pt(0.7, 0.1), pt(-0.2, 0.6));
        assert!((gleason(&p, &q) - gleason(&q, &p)).abs() < 1e-15);
    }

    #[test]
    fn bcl_examples() {
        assert_eq!(bcl_condition(&seq(&[(0.2, 0.4)])), 1.0);
        let two = seq(&[(0.0, 0.0), (0.5, 0.3)]);
        assert!((bcl_condition(&two) - 0.5).abs() < 1e-15);
        let three = seq(&[(-0.5, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        let far = pseudo_hyperbolic(Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0));
        // the middle node sees two factors of 1/2, each end sees 1/2 * far
        assert!((bcl_condition(&three) - 0.25_f64.min(0.5 * far)).abs() < 1e-15);
    }

    #[test]
    fn antipodal_weak_separation() {
        let s = seq(&[(0.9, 0.0), (-0.9, 0.0)]);
        let w = weak_separation(&s, &BisectOptions::default()).unwrap();
        assert!((w.value - 1.81 / 1.8).abs() < 2e-4, "{}", w.value);
        assert!(!w.cap_exceeded);
    }

    #[test]
    fn carleson_two_points() {
        let s = seq(&[(0.0, 0.0), (0.5, 0.0)]);
        let r = carleson_report(&sample_kernel(&s, &ProductKernel).unwrap()).unwrap();
        let g = 3f64.sqrt() / 2.0;
        assert!((r.gram_norm - (1.0 + g)).abs() < 1e-12);
        assert!((r.riesz_lo - (1.0 - g)).abs() < 1e-12);
        assert!((r.embed_sq - r.gram_norm).abs() < 1e-12);
    }

    #[test]
    fn disk_constant_for_the_identity_data() {
        let z = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
        let m = one_variable_pick_constant(&z, &z).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }
}
