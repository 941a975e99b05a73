//! Test-side generators and oracles. Nothing here calls the library's own
//! solvers, so agreement with them is evidence rather than tautology.
#![allow(dead_code)]

use bidisk_pick::kernels::{Point2D, PointSequence};
use bidisk_pick::linalg::HermitianMatrix;
use bidisk_pick::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the disk of radius `r`.
pub fn disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::from_polar(r * rng.gen_range(0.0f64..1.0).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn pseudo_hyperbolic(a: Complex64, b: Complex64) -> f64 {
    ((a - b) / (Complex64::new(1.0, 0.0) - b.conj() * a)).norm()
}

/// `max_m |a^m - b^m| / |1 - conj(b^m) a^m|`.
pub fn gleason_oracle(p: &Point2D, q: &Point2D) -> f64 {
    pseudo_hyperbolic(p.c1(), q.c1()).max(pseudo_hyperbolic(p.c2(), q.c2()))
}

/// `n` random points in the bidisk of radius `r`, pairwise Gleason
/// distance at least `sep`.
pub fn separated_sequence(rng: &mut ChaCha8Rng, n: usize, r: f64, sep: f64) -> PointSequence {
    loop {
        let pts: Vec<Point2D> = (0..n).map(|_| Point2D::new(disk(rng, r), disk(rng, r)).unwrap()).collect();
        let ok = (0..n).all(|i| (0..i).all(|j| gleason_oracle(&pts[i], &pts[j]) >= sep));
        if ok {
            return PointSequence::new(pts).unwrap();
        }
    }
}

/// `n` points of the disk of radius `r`, pairwise pseudo-hyperbolic distance at least `sep`.
pub fn separated_disk_points(rng: &mut ChaCha8Rng, n: usize, r: f64, sep: f64) -> Vec<Complex64> {
    loop {
        let z: Vec<Complex64> = (0..n).map(|_| disk(rng, r)).collect();
        if (0..n).all(|i| (0..i).all(|j| pseudo_hyperbolic(z[i], z[j]) >= sep)) {
            return z;
        }
    }
}

pub fn slice(z: &[Complex64]) -> PointSequence {
    let zero = Complex64::new(0.0, 0.0);
    PointSequence::new(z.iter().map(|&c| Point2D::new(c, zero).unwrap()).collect()).unwrap()
}

/// Classical disk Pick constant by bisection on the positivity of
/// `(M^2 - conj(w_i) w_j) / (1 - conj(z_i) z_j)`.
pub fn disk_pick_oracle(z: &[Complex64], w: &[Complex64]) -> f64 {
    let n = z.len();
    let one = Complex64::new(1.0, 0.0);
    let psd = |m: f64| {
        let p = HermitianMatrix::from_upper(n, |i, j| (m * m - w[i].conj() * w[j]) / (one - z[i].conj() * z[j]));
        p.min_eigenvalue().unwrap() >= 0.0
    };
    let mut lo = w.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut hi = lo.max(1.0);
    while !psd(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if psd(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `lhs - Gamma o X1 - Delta o X2` in Frobenius norm, defects rebuilt from the points.
pub fn decomposition_residual(
    seq: &PointSequence,
    lhs: &HermitianMatrix,
    gamma: &HermitianMatrix,
    delta: &HermitianMatrix,
) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let p = seq.points();
    let mut sum = 0.0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            let x1 = one - p[i].c1().conj() * p[j].c1();
            let x2 = one - p[i].c2().conj() * p[j].c2();
            sum += (lhs[(i, j)] - gamma[(i, j)] * x1 - delta[(i, j)] * x2).norm_sqr();
        }
    }
    sum.sqrt()
}

/// `K_ij / sqrt(K_ii K_jj)`.
pub fn normalize(k: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::from_upper(k.dim(), |i, j| k[(i, j)] / (k[(i, i)].re * k[(j, j)].re).sqrt())
}
