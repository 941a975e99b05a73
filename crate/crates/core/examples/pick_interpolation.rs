//! Smallest sup norm of a bidisk function through four prescribed values,
//! and an explicit interpolant attaining it.

use bidisk_pick::agler::{bisect_constant, BisectOptions, BisectTarget, PickProblem};
use bidisk_pick::kernels::{Point2D, PointSequence};
use bidisk_pick::realization::{build_interpolant, sampled_sup, sup_norm_samples, RealizationOptions};
use bidisk_pick::{Complex64, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    let nodes = PointSequence::new(vec![
        Point2D::new(c(0.0, 0.0), c(0.0, 0.0))?,
        Point2D::new(c(0.5, 0.0), c(0.0, 0.0))?,
        Point2D::new(c(0.0, 0.3), c(0.2, 0.1))?,
        Point2D::new(c(-0.4, 0.2), c(0.6, -0.1))?,
    ])?;
    let targets = vec![c(0.0, 0.0), c(0.3, 0.1), c(-0.2, 0.4), c(0.1, -0.5)];
    let prob = PickProblem::scalar(nodes, targets.clone())?;

    let target = BisectTarget::Pick(prob.clone());
    let (lo, hi) = target.default_bracket();
    let r = bisect_constant(&target, lo, hi, &BisectOptions::default())?;
    println!("M_star in [{:.6}, {:.6}] after {} probes", r.lower, r.level, r.probes);

    let f = build_interpolant(&prob, r.level, &r.certificate, &RealizationOptions::default())?;
    for (l, w) in prob.base().points().iter().zip(&targets) {
        println!("f{:?} = {:.6}   target {:.6}", (l.c1(), l.c2()), f.eval_scalar(l)?, w);
    }
    let samples = sup_norm_samples(10_000, 1);
    let sup = sampled_sup(&samples, |l| Ok(f.eval_scalar(l)?.norm()))?;
    println!("sampled sup |f| = {sup:.6} over {} points", samples.len());
    Ok(())
}
