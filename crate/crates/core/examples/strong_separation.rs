//! The separating family `phi_i(l_j) = delta_ij` behind a lower Grammian
//! bound, and its composition with a row function.

use bidisk_pick::agler::{bisect_constant, BisectOptions, BisectTarget};
use bidisk_pick::kernels::{Point2D, PointSequence};
use bidisk_pick::realization::{build_row_a, compose_iii_to_iv, strong_separation_family, RealizationOptions};
use bidisk_pick::{Complex64, Result};

fn main() -> Result<()> {
    let seq = PointSequence::new(vec![
        Point2D::real(0.0, 0.0)?,
        Point2D::real(0.6, -0.2)?,
        Point2D::new(Complex64::new(0.0, 0.5), Complex64::new(0.4, 0.4))?,
    ])?;
    let opts = BisectOptions::default();
    let ro = RealizationOptions::default();

    let lower = bisect_constant(&BisectTarget::LowerBound(seq.clone()), 1.0, 2.0, &opts)?;
    let family = strong_separation_family(&seq, lower.level, &lower.certificate, &ro)?;
    println!("N_star = {:.6}", lower.level);
    for (i, phi) in family.iter().enumerate() {
        let row: Vec<String> = seq.points().iter().map(|l| Ok(format!("{:.4}", phi.eval(l)?.norm()))).collect::<Result<_>>()?;
        println!("|phi_{i}(l_j)| = [{}]", row.join(", "));
    }

    let upper = bisect_constant(&BisectTarget::UpperBound(seq.clone()), 1.0, 2.0, &opts)?;
    let psi = build_row_a(&seq, upper.level, &upper.certificate, &ro)?;
    let column = compose_iii_to_iv(&psi, &family, lower.level.sqrt())?;
    let probe = Point2D::real(0.3, 0.1)?;
    let v = column.eval(&probe)?;
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    println!("composed column at (0.3, 0.1): |Phi|^2 = {total:.4} <= {:.4}", column.norm_bound().powi(2));
    Ok(())
}
