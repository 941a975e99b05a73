//! The raw lurking-isometry realization of an Agler decomposition.

use bidisk_pick::agler::{pick_feasible_at, PickProblem, SolverOptions};
use bidisk_pick::kernels::{Point2D, PointSequence};
use bidisk_pick::realization::{lurking_isometry, RealizationOptions};
use bidisk_pick::{Complex64, Error, Result};

fn main() -> Result<()> {
    let seq = PointSequence::new(vec![Point2D::real(0.0, 0.0)?, Point2D::real(0.5, 0.5)?])?;
    let w = vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
    let prob = PickProblem::scalar(seq, w.clone())?;
    let level = 1.0;
    let cert = pick_feasible_at(&prob, level, &SolverOptions::default())?
        .into_certificate()
        .ok_or_else(|| Error::Numeric("expected a feasible level".into()))?;

    // u_i = M, v_i = w_i: the Pick matrix is u_i^* u_j - v_i^* v_j.
    let u: Vec<_> = w.iter().map(|_| vec![Complex64::new(level, 0.0)]).collect();
    let v: Vec<_> = w.iter().map(|&x| vec![x]).collect();
    let real = lurking_isometry(&prob.problem_at(level)?, &cert, &u, &v, &RealizationOptions::default())?;
    println!("state space {} + {}, unitarity defect {:.2e}", real.dim_h1(), real.dim_h2(), real.unitary().unitarity_defect());
    for l in prob.base().points() {
        let psi = real.eval(l)?[(0, 0)] * level;
        println!("f({}, {}) = {:.6}, resolvent margin {:.3}", l.c1().re, l.c2().re, psi, real.resolvent_margin(l)?);
    }
    Ok(())
}
