use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::Point2D;

/// Radii of the default sup-norm grid.
pub const DEFAULT_RADII: [f64; 5] = [0.0, 0.3, 0.6, 0.9, 0.99];

/// `count` radii: the default set for 5, otherwise evenly spaced on `[0, 0.99]`.
pub fn grid_radii(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        5 => DEFAULT_RADII.to_vec(),
        _ => (0..count).map(|k| 0.99 * k as f64 / (count - 1) as f64).collect(),
    }
}

/// Tensor grid: every coordinate runs over `r e^{2 pi i k / phases}`.
///
/// Has `(radii.len() * phases)^2` points, repeated points at radius zero
/// included.
pub fn tensor_grid(radii: &[f64], phases: usize) -> Result<Vec<Point2D>> {
    if let Some(r) = radii.iter().find(|r| !(0.0..1.0).contains(*r)) {
        return Err(Error::Domain(format!("grid radius {r} outside [0, 1)")));
    }
    let ring: Vec<Complex64> = radii
        .iter()
        .flat_map(|&r| (0..phases).map(move |k| Complex64::from_polar(r, TAU * k as f64 / phases as f64)))
        .collect();
    ring.iter()
        .flat_map(|&a| ring.iter().map(move |&b| Point2D::new(a, b)))
        .collect()
}

/// Points with independent coordinates uniform on the disk.
pub fn random_bidisk_samples(count: usize, seed: u64) -> Vec<Point2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disk = |rng: &mut ChaCha8Rng| {
        // r = sqrt(U) is uniform in area; keep strictly inside
        let r: f64 = rng.gen::<f64>().sqrt() * (1.0 - 1e-12);
        Complex64::from_polar(r, rng.gen_range(0.0..TAU))
    };
    (0..count)
        .map(|_| {
            let a = disk(&mut rng);
            let b = disk(&mut rng);
            Point2D::new(a, b).expect("sample inside the bidisk")
        })
        .collect()
}

/// The default sup-norm sample: the 5-radius, 16-phase tensor grid plus
/// `random` uniform samples.
pub fn sup_norm_samples(random: usize, seed: u64) -> Vec<Point2D> {
    let mut pts = tensor_grid(&DEFAULT_RADII, 16).expect("default radii are valid");
    pts.extend(random_bidisk_samples(random, seed));
    pts
}

/// Largest value of `f` over `points`, evaluated in parallel.
pub fn sampled_sup<F>(points: &[Point2D], f: F) -> Result<f64>
where
    F: Fn(&Point2D) -> Result<f64> + Sync,
{
    let values = points.par_iter().map(&f).collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}
