//! Gram norm versus Carleson embedding, and Riesz bounds across admissible kernels.

use bidisk_pick::agler::BisectOptions;
use bidisk_pick::analysis::{carleson_report, interpolation_constant_estimate, riesz_check};
use bidisk_pick::kernels::{admissible_batch, sample_kernel, Point2D, PointSequence, ProductKernel};
use bidisk_pick::Result;

fn main() -> Result<()> {
    let seq = PointSequence::new(vec![
        Point2D::real(0.1, 0.0)?,
        Point2D::real(-0.5, 0.3)?,
        Point2D::real(0.4, -0.6)?,
        Point2D::real(0.7, 0.7)?,
    ])?;
    let r = carleson_report(&sample_kernel(&seq, &ProductKernel)?)?;
    println!("gram_norm {:.10}  embed_sq {:.10}", r.gram_norm, r.embed_sq);
    println!("riesz bounds [{:.6}, {:.6}]", r.riesz_lo, r.riesz_hi);

    let est = interpolation_constant_estimate(&seq, 20, 5, &BisectOptions::default())?;
    let kernels = admissible_batch(&seq, 20, 9)?;
    for level in [est.value, est.value / 2.0] {
        let rep = riesz_check(&seq, &kernels, level, 1e-4)?;
        println!("level {level:.4}: {} of {} kernels violate the Riesz chain", rep.violations(), kernels.len());
    }
    Ok(())
}
