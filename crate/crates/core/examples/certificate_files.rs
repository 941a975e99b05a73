//! Problem and certificate JSON files as read and written by the CLI.

use bidisk_pick::agler::{bisect_constant, BisectOptions, BisectTarget};
use bidisk_pick::cli::{CertificateFile, FileKind, ProblemFile};
use bidisk_pick::Result;

fn main() -> Result<()> {
    let file = ProblemFile::parse(
        r#"{"points": [[0, 0, 0, 0], [0.5, 0, 0.5, 0], [0, 0.4, -0.3, 0]],
            "targets": [[0, 0], [0.5, 0], [0, -0.5]]}"#,
    )?;
    println!("problem_hash {}", file.hash());

    let target = BisectTarget::Pick(file.pick_problem()?);
    let (lo, hi) = target.default_bracket();
    let r = bisect_constant(&target, lo, hi, &BisectOptions::default())?;
    let cert = CertificateFile::new(FileKind::Pick, r.level, &r.certificate, file.hash());
    let json = cert.to_json();
    let again = CertificateFile::parse(&json)?.to_json();
    println!("{} bytes, round trip identical: {}", json.len(), json == again);
    cert.check_hash(&file)?;
    println!("{}", json.lines().take(4).collect::<Vec<_>>().join("\n"));
    Ok(())
}
