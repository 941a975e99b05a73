//! Separation diagnostics for a sequence marching toward the distinguished boundary.

use bidisk_pick::agler::BisectOptions;
use bidisk_pick::analysis::separation_report;
use bidisk_pick::kernels::{Point2D, PointSequence};
use bidisk_pick::Result;

fn main() -> Result<()> {
    let pts = (0..5)
        .map(|k| {
            let r = 1.0 - 0.5f64.powi(k);
            Point2D::real(r, -r * 0.5)
        })
        .collect::<Result<Vec<_>>>()?;
    let seq = PointSequence::new(pts)?;
    let a = separation_report(&seq, &BisectOptions::default())?;
    let r = &a.report;
    println!("gleason min     {:.6}", r.gleason_min);
    println!("BCL constant    {:.6}", r.bcl_c);
    for (name, v) in [("weak M", r.weak_m), ("strong N", r.strong_n), ("upper M", r.a_m)] {
        println!("{name:<16}{:.6}{}", v.value, if v.cap_exceeded { " (cap)" } else { "" });
    }
    Ok(())
}
