//! Jacobi eigensolver, PSD projection and factoring, unitary completion.

use bidisk_pick::linalg::{complete_to_unitary, eigh, project_psd, psd_factor, HermitianMatrix};
use bidisk_pick::{Complex64, Result};

fn main() -> Result<()> {
    let h = HermitianMatrix::from_upper(3, |i, j| {
        if i == j {
            Complex64::new([2.0, -1.0, 0.5][i], 0.0)
        } else {
            Complex64::new(0.3, 0.2 * (i + j) as f64)
        }
    });
    let e = eigh(&h)?;
    println!("eigenvalues {:?}", e.eigenvalues);
    println!("reconstruction error {:.2e}", e.reconstruct().max_abs_diff(&h));

    let p = project_psd(&h)?;
    println!("projected min eigenvalue {:.2e}", p.min_eigenvalue()?);
    let l = psd_factor(&p, 1e-12)?;
    println!("rank of the projection: {}", l.cols());

    let s = 0.5f64.sqrt();
    let pairs = vec![(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)])];
    let u = complete_to_unitary(&pairs, 2, 2, 1e-10)?;
    println!("unitarity defect {:.2e}", u.unitarity_defect());
    Ok(())
}
