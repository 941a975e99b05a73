//! On the slice `l^2 = 0` the bidisk constant is the classical disk Pick constant.

use bidisk_pick::agler::{bisect_constant, BisectOptions, BisectTarget, PickProblem};
use bidisk_pick::analysis::one_variable_pick_constant;
use bidisk_pick::kernels::{Point2D, PointSequence};
use bidisk_pick::{Complex64, Result};

fn main() -> Result<()> {
    let z = [Complex64::new(0.1, 0.2), Complex64::new(-0.6, 0.1), Complex64::new(0.3, -0.7), Complex64::new(0.8, 0.0)];
    let w = vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.9), Complex64::new(-0.4, 0.3), Complex64::new(0.2, 0.2)];
    let zero = Complex64::new(0.0, 0.0);
    let seq = PointSequence::new(z.iter().map(|&c| Point2D::new(c, zero)).collect::<Result<_>>()?)?;
    let target = BisectTarget::Pick(PickProblem::scalar(seq, w.clone())?);
    let (lo, hi) = target.default_bracket();
    let r = bisect_constant(&target, lo, hi, &BisectOptions::default())?;
    let oracle = one_variable_pick_constant(&z, &w)?;
    println!("bidisk M_star {:.6}, disk constant {:.6}, difference {:.1e}", r.level, oracle, r.level - oracle);
    Ok(())
}
