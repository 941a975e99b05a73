//! Random admissible kernels: both coordinate Schur tests and the normalized Grammian.

use bidisk_pick::kernels::{
    admissible_batch, check_admissible, normalized_grammian, sample_kernel, Point2D, PointSequence, ProductKernel,
};
use bidisk_pick::Result;

fn main() -> Result<()> {
    let seq = PointSequence::new(vec![Point2D::real(0.2, 0.1)?, Point2D::real(-0.3, 0.8)?, Point2D::real(0.9, -0.4)?])?;
    let mut samples = vec![sample_kernel(&seq, &ProductKernel)?];
    samples.extend(admissible_batch(&seq, 4, 11)?);
    for (k, s) in samples.iter().enumerate() {
        let a = check_admissible(s, 1e-10)?;
        let g = normalized_grammian(s)?;
        println!(
            "kernel {k}: Schur tests ({:.2e}, {:.2e}) admissible={}  G spectrum [{:.4}, {:.4}]",
            a.psd1_mineig,
            a.psd2_mineig,
            a.admissible,
            g.matrix().min_eigenvalue()?,
            g.matrix().max_eigenvalue()?
        );
    }
    Ok(())
}
