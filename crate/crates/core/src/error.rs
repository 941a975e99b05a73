use thiserror::Error;

/// Errors raised by the numerical routines and the file front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the open bidisk: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("vector pairs are not isometric (Gram mismatch {mismatch:.3e})")]
    NotIsometric { mismatch: f64 },

    #[error("certificate inconsistent with its problem: {0}")]
    CertificateInconsistent(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("no feasible level found below {cap:.3e}")]
    BracketFailure { cap: f64 },

    #[error("degenerate kernel draw: {0}")]
    DegenerateDraw(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("problem hash mismatch: certificate {certificate}, problem {problem}")]
    HashMismatch { certificate: String, problem: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
