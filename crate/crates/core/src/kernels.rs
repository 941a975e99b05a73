//! Points of the bidisk, reproducing kernels and their Gram matrices.
//!
//! A kernel sample is the matrix `K[i][j] = k(l_i, l_j)` on a finite node
//! set; with the Szego convention `s(l, z) = 1 / (1 - conj(l) z)` the row
//! index carries the conjugated point. Admissibility of a kernel on the
//! nodes means both Schur products `(1 - conj(l_i^m) l_j^m) * K[i][j]` are
//! positive semidefinite.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigh, HermitianMatrix};

/// Minimal max-coordinate distance between two nodes of a sequence.
pub const DISTINCT_TOL: f64 = 1e-12;
/// PSD slack allowed when validating sampled kernel matrices.
pub const SAMPLE_PSD_TOL: f64 = 1e-10;

/// A point `(l^1, l^2)` of the open bidisk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    c1: Complex64,
    c2: Complex64,
}

impl Point2D {
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(c1) || !finite(c2) {
            return Err(Error::Domain(format!("non-finite coordinates ({c1}, {c2})")));
        }
        if c1.norm() >= 1.0 || c2.norm() >= 1.0 {
            return Err(Error::Domain(format!("({c1}, {c2}) has a coordinate of modulus >= 1")));
        }
        Ok(Self { c1, c2 })
    }

    /// Convenience constructor from real coordinates.
    pub fn real(x1: f64, x2: f64) -> Result<Self> {
        Self::new(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    pub fn origin() -> Self {
        Self { c1: Complex64::new(0.0, 0.0), c2: Complex64::new(0.0, 0.0) }
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    /// Coordinate `m` (1 or 2).
    pub fn coord(&self, m: usize) -> Complex64 {
        match m {
            1 => self.c1,
            2 => self.c2,
            _ => panic!("the bidisk has coordinates 1 and 2, not {m}"),
        }
    }

    /// `max(|l^1|, |l^2|)`, the norm of the diagonal symbol at this point.
    pub fn sup_modulus(&self) -> f64 {
        self.c1.norm().max(self.c2.norm())
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.c1 - other.c1).norm().max((self.c2 - other.c2).norm())
    }
}

/// A finite, nonempty list of pairwise distinct bidisk points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSequence {
    points: Vec<Point2D>,
}

impl PointSequence {
    pub fn new(points: Vec<Point2D>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("a point sequence needs at least one point".into()));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i].distance(&points[j]) <= DISTINCT_TOL {
                    return Err(Error::Input(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Point2D {
        self.points[i]
    }

    /// Coordinate defect matrix `X_m[i][j] = 1 - conj(l_i^m) l_j^m`.
    pub fn defect_matrix(&self, m: usize) -> HermitianMatrix {
        let p = &self.points;
        HermitianMatrix::from_upper(p.len(), |i, j| Complex64::new(1.0, 0.0) - p[i].coord(m).conj() * p[j].coord(m))
    }

    /// Sub-sequence on the given node indices.
    pub fn subsequence(&self, idx: &[usize]) -> Result<Self> {
        Self::new(idx.iter().map(|&i| self.points[i]).collect())
    }
}

fn check_disk(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{z} is not in the open unit disk")))
    }
}

/// Szego kernel `1 / (1 - conj(l) z)` of the Hardy space on the disk.
pub fn szego(l: Complex64, z: Complex64) -> Result<Complex64> {
    check_disk(l)?;
    check_disk(z)?;
    Ok(szego_unchecked(l, z))
}

fn szego_unchecked(l: Complex64, z: Complex64) -> Complex64 {
    (Complex64::new(1.0, 0.0) - l.conj() * z).inv()
}

/// Product of Szego kernels, the kernel of the Hardy space of the bidisk.
pub fn product_kernel(l: &Point2D, z: &Point2D) -> Complex64 {
    szego_unchecked(l.c1, z.c1) * szego_unchecked(l.c2, z.c2)
}

/// A two-point function on the bidisk evaluated as `k(l, z)`.
pub trait Kernel {
    fn eval(&self, l: &Point2D, z: &Point2D) -> Complex64;
}

impl<F> Kernel for F
where
    F: Fn(&Point2D, &Point2D) -> Complex64,
{
    fn eval(&self, l: &Point2D, z: &Point2D) -> Complex64 {
        self(l, z)
    }
}

/// The product (Hardy space) kernel as a `Kernel` value.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProductKernel;

impl Kernel for ProductKernel {
    fn eval(&self, l: &Point2D, z: &Point2D) -> Complex64 {
        product_kernel(l, z)
    }
}

/// Polynomial of degree at most 2 in each variable: `sum a[p][q] z1^p z2^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    pub coeffs: [[Complex64; 3]; 3],
}

impl BiPoly {
    pub fn one() -> Self {
        let mut coeffs = [[Complex64::new(0.0, 0.0); 3]; 3];
        coeffs[0][0] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn eval(&self, z: &Point2D) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut z1p = Complex64::new(1.0, 0.0);
        for row in &self.coeffs {
            let mut z2q = Complex64::new(1.0, 0.0);
            for a in row {
                acc += a * z1p * z2q;
                z2q *= z.c2;
            }
            z1p *= z.c1;
        }
        acc
    }
}

/// Weighted sum of modulated product kernels
/// `k(l, z) = sum_t w_t conj(h_t(l)) h_t(z) / ((1 - conj(l^1) z^1)(1 - conj(l^2) z^2))`.
///
/// Every member is admissible: each Schur test reduces to a positive
/// combination of `D_t^* S D_t` with `S` a Szego Gram matrix. This is a
/// subfamily of the admissible kernels, not a parametrization of all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleFamily {
    pub terms: Vec<(f64, BiPoly)>,
}

impl AdmissibleFamily {
    /// The single term `h = 1`, `w = 1`: the product kernel itself.
    pub fn product() -> Self {
        Self { terms: vec![(1.0, BiPoly::one())] }
    }

    /// Draws a family member whose polynomials do not vanish on `seq`.
    pub fn random(seq: &PointSequence, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let count = rng.gen_range(1..=3);
            let terms: Vec<(f64, BiPoly)> = (0..count)
                .map(|_| {
                    let weight = rng.gen_range(0.1..1.0);
                    let mut coeffs = [[Complex64::new(0.0, 0.0); 3]; 3];
                    for row in coeffs.iter_mut() {
                        for a in row.iter_mut() {
                            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                        }
                    }
                    (weight, BiPoly { coeffs })
                })
                .collect();
            let clear = terms
                .iter()
                .all(|(_, h)| seq.points().iter().all(|p| h.eval(p).norm() > 1e-6));
            if clear {
                return Ok(Self { terms });
            }
        }
        Err(Error::DegenerateDraw(format!("seed {seed}: 100 draws vanished on a node")))
    }
}

impl Kernel for AdmissibleFamily {
    fn eval(&self, l: &Point2D, z: &Point2D) -> Complex64 {
        let base = product_kernel(l, z);
        self.terms.iter().map(|(w, h)| h.eval(l).conj() * h.eval(z) * base * *w).sum()
    }
}

/// Kernel values on a node set, validated Hermitian and PSD.
#[derive(Debug, Clone)]
pub struct KernelSample {
    base: PointSequence,
    matrix: HermitianMatrix,
}

impl KernelSample {
    /// Validates an explicit kernel matrix on `base`.
    pub fn from_matrix(base: PointSequence, matrix: HermitianMatrix) -> Result<Self> {
        if matrix.dim() != base.len() {
            return Err(Error::Dimension(format!("{}-dim kernel matrix on {} points", matrix.dim(), base.len())));
        }
        if let Some(d) = matrix.diagonal().into_iter().find(|&d| d <= 0.0) {
            return Err(Error::NotPsd { eigenvalue: d });
        }
        let eig = eigh(&matrix)?;
        if eig.min_eigenvalue() < -SAMPLE_PSD_TOL * eig.max_eigenvalue().max(1.0) {
            return Err(Error::NotPsd { eigenvalue: eig.min_eigenvalue() });
        }
        Ok(Self { base, matrix })
    }

    pub fn base(&self) -> &PointSequence {
        &self.base
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }
}

/// Evaluates `k` on all node pairs.
pub fn sample_kernel(seq: &PointSequence, k: &dyn Kernel) -> Result<KernelSample> {
    let p = seq.points();
    let n = p.len();
    let mut asym = 0.0_f64;
    let mut upper = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let kij = k.eval(&p[i], &p[j]);
            let kji = k.eval(&p[j], &p[i]);
            if !(kij.re.is_finite() && kij.im.is_finite()) {
                return Err(Error::NonFinite("kernel value"));
            }
            asym = asym.max((kij - kji.conj()).norm());
            upper[i * n + j] = kij;
        }
    }
    if asym > 1e-10 {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let matrix = HermitianMatrix::from_upper(n, |i, j| upper[i * n + j]);
    KernelSample::from_matrix(seq.clone(), matrix)
}

/// Gram matrix of the normalized kernel functions, unit diagonal.
#[derive(Debug, Clone)]
pub struct NormalizedGrammian {
    base: PointSequence,
    matrix: HermitianMatrix,
}

impl NormalizedGrammian {
    pub fn base(&self) -> &PointSequence {
        &self.base
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }
}

pub fn normalized_grammian(s: &KernelSample) -> Result<NormalizedGrammian> {
    let diag = s.matrix.diagonal();
    if let Some(&d) = diag.iter().find(|&&d| d <= 0.0) {
        return Err(Error::NotPsd { eigenvalue: d });
    }
    let inv_sqrt: Vec<f64> = diag.iter().map(|d| d.sqrt().recip()).collect();
    let matrix = HermitianMatrix::from_upper(diag.len(), |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            s.matrix[(i, j)] * (inv_sqrt[i] * inv_sqrt[j])
        }
    });
    Ok(NormalizedGrammian { base: s.base.clone(), matrix })
}

/// Smallest eigenvalues of the two coordinate Schur tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    pub psd1_mineig: f64,
    pub psd2_mineig: f64,
    pub admissible: bool,
}

pub fn check_admissible(s: &KernelSample, tol: f64) -> Result<AdmissibilityReport> {
    let psd1_mineig = s.base.defect_matrix(1).schur(&s.matrix).min_eigenvalue()?;
    let psd2_mineig = s.base.defect_matrix(2).schur(&s.matrix).min_eigenvalue()?;
    Ok(AdmissibilityReport {
        psd1_mineig,
        psd2_mineig,
        admissible: psd1_mineig >= -tol && psd2_mineig >= -tol,
    })
}

/// Samples a random member of [`AdmissibleFamily`] on `seq`; deterministic in `seed`.
pub fn random_admissible(seq: &PointSequence, seed: u64) -> Result<KernelSample> {
    sample_kernel(seq, &AdmissibleFamily::random(seq, seed)?)
}

/// Seed of the `k`-th kernel in a batch drawn from `seed`.
pub fn batch_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x2545_F491_4F6C_DD1D) ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `count` independent random admissible kernels on `seq`.
pub fn admissible_batch(seq: &PointSequence, count: usize, seed: u64) -> Result<Vec<KernelSample>> {
    (0..count).map(|k| random_admissible(seq, batch_seed(seed, k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn szego_values() {
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(szego(c(0.0), z).unwrap(), c(1.0));
        assert!((szego(c(0.5), c(0.5)).unwrap() - c(4.0 / 3.0)).norm() < 1e-15);
        assert!((szego(c(0.5), c(-0.5)).unwrap() - c(0.8)).norm() < 1e-15);
        assert!(matches!(szego(c(1.0), z), Err(Error::Domain(_))));
    }

    #[test]
    fn product_kernel_values() {
        let z = Point2D::new(Complex64::new(0.1, 0.4), c(-0.7)).unwrap();
        assert_eq!(product_kernel(&Point2D::origin(), &z), c(1.0));
        let a = Point2D::real(0.5, 0.0).unwrap();
        assert!((product_kernel(&a, &a) - c(4.0 / 3.0)).norm() < 1e-15);
        let b = Point2D::real(0.5, 0.5).unwrap();
        assert!((product_kernel(&b, &b) - c(16.0 / 9.0)).norm() < 1e-15);
    }

    #[test]
    fn boundary_point_rejected() {
        assert!(Point2D::real(0.2, 1.0).is_err());
        assert!(Point2D::new(Complex64::new(0.6, 0.8), c(0.0)).is_err());
    }

    #[test]
    fn repeated_nodes_rejected() {
        let p = Point2D::real(0.1, 0.2).unwrap();
        assert!(PointSequence::new(vec![p, p]).is_err());
        assert!(PointSequence::new(vec![]).is_err());
    }

    #[test]
    fn two_point_sample_and_grammian() {
        let seq = PointSequence::new(vec![Point2D::origin(), Point2D::real(0.5, 0.0).unwrap()]).unwrap();
        let s = sample_kernel(&seq, &ProductKernel).unwrap();
        let expected = [[1.0, 1.0], [1.0, 4.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((s.matrix()[(i, j)] - c(expected[i][j])).norm() < 1e-15);
            }
        }
        let g = normalized_grammian(&s).unwrap();
        assert!((g.matrix()[(0, 1)].re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(g.matrix()[(0, 0)], c(1.0));
    }

    #[test]
    fn single_point_sample() {
        let seq = PointSequence::new(vec![Point2D::origin()]).unwrap();
        let s = sample_kernel(&seq, &ProductKernel).unwrap();
        assert_eq!(s.matrix()[(0, 0)], c(1.0));
        assert_eq!(normalized_grammian(&s).unwrap().matrix()[(0, 0)], c(1.0));
    }

    #[test]
    fn diagonal_sample_normalizes_to_identity() {
        let seq = PointSequence::new(vec![Point2D::origin(), Point2D::real(0.5, 0.0).unwrap()]).unwrap();
        let s = KernelSample::from_matrix(seq, HermitianMatrix::from_real_diagonal(&[2.0, 5.0])).unwrap();
        let g = normalized_grammian(&s).unwrap();
        assert!(g.matrix().max_abs_diff(&HermitianMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn indefinite_kernel_matrix_rejected() {
        let seq = PointSequence::new(vec![Point2D::origin(), Point2D::real(0.5, 0.0).unwrap()]).unwrap();
        let m = HermitianMatrix::from_upper(2, |i, j| if i == j { c(1.0) } else { c(2.0) });
        match KernelSample::from_matrix(seq, m) {
            Err(Error::NotPsd { eigenvalue }) => assert!((eigenvalue + 1.0).abs() < 1e-12),
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_kernel_rejected() {
        let seq = PointSequence::new(vec![Point2D::origin(), Point2D::real(0.5, 0.0).unwrap()]).unwrap();
        let skew = |l: &Point2D, z: &Point2D| Complex64::new(1.0, l.c1().re - 2.0 * z.c1().re);
        assert!(matches!(sample_kernel(&seq, &skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn constant_kernel_fails_the_schur_test() {
        // X1 o J = X1 = [[1, 1], [1, 1 - r^2]] has determinant -r^2.
        let r = 0.5;
        let seq = PointSequence::new(vec![Point2D::origin(), Point2D::real(r, 0.0).unwrap()]).unwrap();
        let one = |_: &Point2D, _: &Point2D| c(1.0);
        let s = sample_kernel(&seq, &one).unwrap();
        let rep = check_admissible(&s, 1e-10).unwrap();
        assert!(!rep.admissible);
        assert!(rep.psd1_mineig < -0.05);
        assert!(rep.psd2_mineig > -1e-12);
    }

    #[test]
    fn product_family_member_is_product_kernel() {
        let seq = PointSequence::new(vec![
            Point2D::real(0.2, -0.3).unwrap(),
            Point2D::new(Complex64::new(0.0, 0.5), c(0.4)).unwrap(),
        ])
        .unwrap();
        let a = sample_kernel(&seq, &AdmissibleFamily::product()).unwrap();
        let b = sample_kernel(&seq, &ProductKernel).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn random_admissible_is_deterministic() {
        let seq = PointSequence::new(vec![Point2D::real(0.2, -0.3).unwrap(), Point2D::real(-0.6, 0.1).unwrap()]).unwrap();
        let a = random_admissible(&seq, 7).unwrap();
        let b = random_admissible(&seq, 7).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert!(check_admissible(&a, 1e-8).unwrap().admissible);
    }
}
