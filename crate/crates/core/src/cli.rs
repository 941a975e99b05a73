//! Command-line front end: JSON problem and certificate files, the
//! `pick`, `separation`, `eval`, `gram` and `verify` subcommands, and the
//! exit-code contract (0 ok, 2 input error, 3 certificate mismatch,
//! 4 numeric failure).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agler::{
    bisect_constant, lower_bound_lhs, upper_bound_lhs, verify_certificate, AglerCertificate, BisectOptions,
    BisectTarget, CertificateKind, DecompositionProblem, Method, PickProblem, SolverOptions, VerifyTolerances,
};
use crate::analysis::{
    carleson_report, interpolation_constant_estimate, one_variable_pick_constant, one_variable_slice, riesz_check,
    separation_report,
};
use crate::error::{Error, Result};
use crate::kernels::{admissible_batch, normalized_grammian, sample_kernel, Point2D, PointSequence, ProductKernel};
use crate::linalg::HermitianMatrix;
use crate::realization::{
    build_interpolant, build_realization_b, build_row_a, grid_radii, sampled_sup,
    sup_norm_samples, tensor_grid, InterpolantHandle, RealizationOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Solver parameters a problem file may carry; command-line flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bis_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Points as `[re1, im1, re2, im2]`, targets as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub points: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub options: FileOptions,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("problem file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn sequence(&self) -> Result<PointSequence> {
        if self.points.is_empty() {
            return Err(Error::Input("problem file has no points".into()));
        }
        let pts = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Point2D::new(Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3]))
                    .map_err(|e| Error::Input(format!("point {i} {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSequence::new(pts).map_err(|e| Error::Input(format!("points: {e}")))
    }

    pub fn targets(&self) -> Option<Vec<Complex64>> {
        self.targets.as_ref().map(|t| t.iter().map(|w| Complex64::new(w[0], w[1])).collect())
    }

    pub fn pick_problem(&self) -> Result<PickProblem> {
        let w = self.targets().ok_or_else(|| Error::Input("problem file has no targets".into()))?;
        if w.len() != self.points.len() {
            return Err(Error::Input(format!("{} targets for {} points", w.len(), self.points.len())));
        }
        PickProblem::scalar(self.sequence()?, w)
    }

    /// SHA-256 of the canonical JSON of the points and targets.
    pub fn hash(&self) -> String {
        let data = ProblemFile { points: self.points.clone(), targets: self.targets.clone(), options: FileOptions::default() };
        let bytes = serde_json::to_vec(&data).expect("problem data serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    /// `M^2 - conj(w_i) w_j`.
    Pick,
    /// `M I - J`.
    UpperBound,
    /// `N J - I`.
    LowerBound,
}

/// A serialized certificate; matrices are nested rows of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub kind: FileKind,
    pub level: f64,
    pub gamma: Vec<Vec<[f64; 2]>>,
    pub delta: Vec<Vec<[f64; 2]>>,
    pub residual: f64,
    pub iterations: usize,
    pub problem_hash: String,
}

fn matrix_rows(h: &HermitianMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..h.dim()).map(|i| (0..h.dim()).map(|j| [h[(i, j)].re, h[(i, j)].im]).collect()).collect()
}

fn rows_matrix(rows: &[Vec<[f64; 2]>], name: &str) -> Result<HermitianMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("{name} is not square")));
    }
    let m = crate::linalg::ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
    HermitianMatrix::from_matrix(&m, 0.0).map_err(|e| Error::Input(format!("{name}: {e}")))
}

impl CertificateFile {
    pub fn new(kind: FileKind, level: f64, cert: &AglerCertificate, problem_hash: String) -> Self {
        Self {
            kind,
            level,
            gamma: matrix_rows(&cert.gamma),
            delta: matrix_rows(&cert.delta),
            residual: cert.residual,
            iterations: cert.iterations,
            problem_hash,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("certificate file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    /// Pretty JSON with a trailing newline; parsing and re-serializing
    /// reproduces these bytes exactly.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn certificate(&self) -> Result<AglerCertificate> {
        Ok(AglerCertificate {
            gamma: rows_matrix(&self.gamma, "gamma")?,
            delta: rows_matrix(&self.delta, "delta")?,
            residual: self.residual,
            iterations: self.iterations,
        })
    }

    pub fn check_hash(&self, problem: &ProblemFile) -> Result<()> {
        let h = problem.hash();
        if h == self.problem_hash {
            Ok(())
        } else {
            Err(Error::HashMismatch { certificate: self.problem_hash.clone(), problem: h })
        }
    }

    /// The decomposition problem this certificate claims to solve.
    pub fn problem(&self, problem: &ProblemFile) -> Result<DecompositionProblem> {
        let seq = problem.sequence()?;
        let n = seq.len();
        match self.kind {
            FileKind::Pick => problem.pick_problem()?.problem_at(self.level),
            FileKind::UpperBound => DecompositionProblem::new(seq, upper_bound_lhs(n, self.level)),
            FileKind::LowerBound => DecompositionProblem::new(seq, lower_bound_lhs(n, self.level)),
        }
    }

    pub fn claim(&self) -> CertificateKind {
        match self.kind {
            FileKind::Pick => CertificateKind::Pick,
            FileKind::UpperBound => CertificateKind::UpperBound { level: self.level },
            FileKind::LowerBound => CertificateKind::LowerBound { level: self.level },
        }
    }

    /// Rebuilds the realization the certificate encodes.
    pub fn realize(&self, problem: &ProblemFile, opts: &RealizationOptions) -> Result<InterpolantHandle> {
        let cert = self.certificate()?;
        let seq = problem.sequence()?;
        match self.kind {
            FileKind::Pick => build_interpolant(&problem.pick_problem()?, self.level, &cert, opts),
            FileKind::UpperBound => build_row_a(&seq, self.level, &cert, opts),
            FileKind::LowerBound => build_realization_b(&seq, self.level, &cert, opts),
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Input(_) | Error::Domain(_) | Error::Dimension(_) | Error::NonFinite(_) | Error::Json(_) | Error::Io(_) => {
            EXIT_INPUT
        }
        Error::HashMismatch { .. } | Error::CertificateInconsistent(_) | Error::NotIsometric { .. } => EXIT_MISMATCH,
        _ => EXIT_NUMERIC,
    }
}

#[derive(Debug, Parser)]
#[command(name = "bidisk-pick", version, about = "Pick interpolation and Agler decompositions on the bidisk")]
#[command(after_help = "Environment: BIDISK_PICK_THREADS caps the worker threads.\n\
Exit codes: 0 success or diagnostic, 2 input error, 3 certificate mismatch, 4 numeric failure.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Barrier,
    Dykstra,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Dykstra feasibility tolerance (Frobenius residual).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration budget per feasibility probe.
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Final bisection bracket width.
    #[arg(long = "bis-tol")]
    pub bis_tol: Option<f64>,
    /// Seed for kernel and target sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Feasibility engine.
    #[arg(long, value_enum, default_value_t = MethodArg::Barrier)]
    pub method: MethodArg,
}

impl SolverArgs {
    fn bisect(&self, file: &FileOptions) -> BisectOptions {
        let d = BisectOptions::default();
        BisectOptions {
            bis_tol: self.bis_tol.or(file.bis_tol).unwrap_or(d.bis_tol),
            solver: SolverOptions {
                feas_tol: self.tol.or(file.tol).unwrap_or(d.solver.feas_tol),
                max_iter: self.max_iter.or(file.max_iter).unwrap_or(d.solver.max_iter),
                method: match self.method {
                    MethodArg::Barrier => Method::Barrier,
                    MethodArg::Dykstra => Method::Dykstra,
                },
                ..d.solver
            },
            ..d
        }
    }

    fn seed(&self, file: &FileOptions) -> u64 {
        self.seed.or(file.seed).unwrap_or(0)
    }
}

/// `R,P`: radii count and phases per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub radii: usize,
    pub phases: usize,
}

impl std::str::FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (r, p) = s.split_once(',').ok_or_else(|| format!("expected R,P, got {s:?}"))?;
        let radii = r.trim().parse().map_err(|e| format!("radii: {e}"))?;
        let phases = p.trim().parse().map_err(|e| format!("phases: {e}"))?;
        if radii == 0 || phases == 0 {
            return Err("grid sizes must be positive".into());
        }
        Ok(Self { radii, phases })
    }
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<Point2D>> {
        tensor_grid(&grid_radii(self.radii), self.phases)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bisect the Pick constant, build an interpolant and write its certificate.
    Pick {
        problem: PathBuf,
        /// Certificate output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare with the disk Pick constant (inputs on a coordinate slice).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Separation diagnostics and the two Grammian-bound certificates.
    Separation {
        problem: PathBuf,
        /// Directory receiving upper.json, lower.json and functions.csv.
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
        /// Export the strongly separating family on the grid (CSV).
        #[arg(long)]
        functions: bool,
        #[arg(long, default_value = "5,16")]
        grid: GridSpec,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Rebuild the realization of a certificate and evaluate it on a grid (CSV).
    Eval {
        certificate: PathBuf,
        problem: PathBuf,
        #[arg(long, default_value = "5,16")]
        grid: GridSpec,
        /// Append the nodes to the grid.
        #[arg(long)]
        nodes: bool,
        /// CSV output path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gram/Carleson report for the product kernel, optionally a Riesz check.
    Gram {
        problem: PathBuf,
        /// Riesz check over this many sampled admissible kernels.
        #[arg(long = "random-kernels")]
        random_kernels: Option<usize>,
        /// Riesz level (default: sampled interpolation constant).
        #[arg(long)]
        level: Option<f64>,
        /// Print the normalized Grammian.
        #[arg(long)]
        dump: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Recheck a certificate against its problem.
    Verify {
        certificate: PathBuf,
        problem: PathBuf,
        #[arg(long = "random-kernels", default_value_t = 50)]
        random_kernels: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Standard output of a successful command.
pub type Output = String;

/// Runs a parsed command; the `bool` is false when the command completed
/// but reports a failed check (exit code 3).
pub fn run(cli: &Cli) -> Result<(Output, bool)> {
    match &cli.command {
        Command::Pick { problem, out, oracle, solver } => cmd_pick(problem, out.as_deref(), *oracle, solver),
        Command::Separation { problem, out_dir, functions, grid, solver } => {
            cmd_separation(problem, out_dir.as_deref(), *functions, *grid, solver).map(|o| (o, true))
        }
        Command::Eval { certificate, problem, grid, nodes, out } => {
            cmd_eval(certificate, problem, *grid, *nodes, out.as_deref()).map(|o| (o, true))
        }
        Command::Gram { problem, random_kernels, level, dump, solver } => {
            cmd_gram(problem, *random_kernels, *level, *dump, solver).map(|o| (o, true))
        }
        Command::Verify { certificate, problem, random_kernels, seed } => {
            cmd_verify(certificate, problem, *random_kernels, seed.unwrap_or(0))
        }
    }
}

/// Entry point for the binary: parses, applies `BIDISK_PICK_THREADS`,
/// runs, prints and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Ok(v) = std::env::var("BIDISK_PICK_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: BIDISK_PICK_THREADS must be a positive integer, got {v:?}");
                return EXIT_INPUT;
            }
        }
    }
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_pick(path: &Path, out: Option<&Path>, oracle: bool, solver: &SolverArgs) -> Result<(Output, bool)> {
    let file = ProblemFile::read(path)?;
    let prob = file.pick_problem()?;
    let opts = solver.bisect(&file.options);
    let target = BisectTarget::Pick(prob.clone());
    let (lo, hi) = target.default_bracket();
    let r = bisect_constant(&target, lo, hi, &opts)?;
    let handle = build_interpolant(&prob, r.level, &r.certificate, &RealizationOptions::default())?;
    let w: Vec<Complex64> = (0..prob.base().len()).map(|i| prob.targets().vector(i)[0]).collect();
    let node_err = (0..w.len())
        .map(|i| Ok((handle.eval_scalar(&prob.base().get(i))? - w[i]).norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let samples = sup_norm_samples(10_000, solver.seed(&file.options));
    let sup = sampled_sup(&samples, |l| Ok(handle.eval_scalar(l)?.norm()))?;

    let mut s = String::new();
    writeln!(s, "points: {}", prob.base().len()).unwrap();
    writeln!(s, "M_star: {}", r.level).unwrap();
    writeln!(s, "bracket: [{}, {}]", r.lower, r.level).unwrap();
    writeln!(s, "probes: {}", r.probes).unwrap();
    writeln!(s, "certificate_residual: {:e}", r.certificate.residual).unwrap();
    writeln!(s, "max_node_error: {node_err:e}").unwrap();
    writeln!(s, "sampled_sup: {sup} ({} samples)", samples.len()).unwrap();
    if oracle {
        match one_variable_slice(prob.base()) {
            Some(z) => {
                let o = one_variable_pick_constant(&z, &w)?;
                writeln!(s, "oracle: {o}").unwrap();
                writeln!(s, "oracle_difference: {:e}", r.level - o).unwrap();
            }
            None => writeln!(s, "oracle: not applicable (points are not on a coordinate slice)").unwrap(),
        }
    }
    writeln!(s, "note: M_star is the feasible end of the bracket; bisection treats undecided probes as infeasible")
        .unwrap();
    let cert = CertificateFile::new(FileKind::Pick, r.level, &r.certificate, file.hash());
    match out {
        Some(p) => {
            write_text(p, &cert.to_json())?;
            writeln!(s, "certificate: {}", p.display()).unwrap();
        }
        None => s.push_str(&cert.to_json()),
    }
    Ok((s, true))
}

fn fmt_capped(v: &crate::analysis::CappedLevel) -> String {
    if v.cap_exceeded {
        format!(">{} (cap exceeded)", v.value)
    } else {
        v.value.to_string()
    }
}

fn cmd_separation(
    path: &Path,
    out_dir: Option<&Path>,
    functions: bool,
    grid: GridSpec,
    solver: &SolverArgs,
) -> Result<Output> {
    let file = ProblemFile::read(path)?;
    let seq = file.sequence()?;
    let opts = solver.bisect(&file.options);
    let a = separation_report(&seq, &opts)?;
    let r = &a.report;
    let mut s = String::new();
    writeln!(s, "points: {}", seq.len()).unwrap();
    writeln!(s, "gleason_min: {}", r.gleason_min).unwrap();
    writeln!(s, "bcl_c: {}", r.bcl_c).unwrap();
    writeln!(s, "weak_M: {}", fmt_capped(&r.weak_m)).unwrap();
    writeln!(s, "strong_N: {}", fmt_capped(&r.strong_n)).unwrap();
    writeln!(s, "a_M: {}", fmt_capped(&r.a_m)).unwrap();
    let hash = file.hash();
    let certs = [("upper.json", FileKind::UpperBound, &a.upper), ("lower.json", FileKind::LowerBound, &a.lower)];
    let csv = match (&a.lower, functions) {
        (Some(lower), true) => {
            let handle = build_realization_b(&seq, lower.level, &lower.certificate, &RealizationOptions::default())?;
            Some(grid_csv(&handle, &grid.points()?)?)
        }
        (None, true) => {
            writeln!(s, "functions: not exported (strong_N cap exceeded)").unwrap();
            None
        }
        _ => None,
    };
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
            for (name, kind, r) in certs {
                if let Some(r) = r {
                    let path = dir.join(name);
                    write_text(&path, &CertificateFile::new(kind, r.level, &r.certificate, hash.clone()).to_json())?;
                    writeln!(s, "certificate: {}", path.display()).unwrap();
                }
            }
            if let Some(csv) = csv {
                write_text(&dir.join("functions.csv"), &csv)?;
                writeln!(s, "functions: {}", dir.join("functions.csv").display()).unwrap();
            }
        }
        None => {
            if let Some(csv) = csv {
                s.push_str(&csv);
            }
        }
    }
    Ok(s)
}

/// CSV with the point coordinates followed by every entry of the value.
fn grid_csv(handle: &InterpolantHandle, points: &[Point2D]) -> Result<String> {
    let (rows, cols) = (handle.real.out_dim(), handle.real.in_dim());
    let mut s = String::from("l1_re,l1_im,l2_re,l2_im");
    let single = rows * cols == 1;
    for i in 0..rows {
        for j in 0..cols {
            if single {
                s.push_str(",value_re,value_im");
            } else {
                write!(s, ",v{i}_{j}_re,v{i}_{j}_im").unwrap();
            }
        }
    }
    s.push('\n');
    let values = {
        use rayon::prelude::*;
        points.par_iter().map(|l| handle.eval(l)).collect::<Result<Vec<_>>>()?
    };
    for (l, v) in points.iter().zip(values) {
        write!(s, "{},{},{},{}", l.c1().re, l.c1().im, l.c2().re, l.c2().im).unwrap();
        for i in 0..rows {
            for j in 0..cols {
                write!(s, ",{},{}", v[(i, j)].re, v[(i, j)].im).unwrap();
            }
        }
        s.push('\n');
    }
    Ok(s)
}

fn cmd_eval(cert_path: &Path, path: &Path, grid: GridSpec, nodes: bool, out: Option<&Path>) -> Result<Output> {
    let file = ProblemFile::read(path)?;
    let cert = CertificateFile::read(cert_path)?;
    cert.check_hash(&file)?;
    let handle = cert.realize(&file, &RealizationOptions::default())?;
    let mut points = grid.points()?;
    if nodes {
        points.extend_from_slice(file.sequence()?.points());
    }
    let csv = grid_csv(&handle, &points)?;
    match out {
        Some(p) => {
            write_text(p, &csv)?;
            Ok(format!("rows: {}\ncsv: {}\n", points.len(), p.display()))
        }
        None => Ok(csv),
    }
}

fn cmd_gram(path: &Path, random: Option<usize>, level: Option<f64>, dump: bool, solver: &SolverArgs) -> Result<Output> {
    let file = ProblemFile::read(path)?;
    let seq = file.sequence()?;
    let sample = sample_kernel(&seq, &ProductKernel)?;
    let r = carleson_report(&sample)?;
    let mut s = String::new();
    writeln!(s, "points: {}", seq.len()).unwrap();
    writeln!(s, "gram_norm: {}", r.gram_norm).unwrap();
    writeln!(s, "embed_sq: {}", r.embed_sq).unwrap();
    writeln!(s, "riesz_lo: {}", r.riesz_lo).unwrap();
    writeln!(s, "riesz_hi: {}", r.riesz_hi).unwrap();
    if dump {
        let g = normalized_grammian(&sample)?;
        writeln!(s, "normalized_grammian:").unwrap();
        for i in 0..seq.len() {
            let row: Vec<String> = (0..seq.len()).map(|j| format!("{}{:+}i", g.matrix()[(i, j)].re, g.matrix()[(i, j)].im)).collect();
            writeln!(s, "  {}", row.join(" ")).unwrap();
        }
    }
    if let Some(count) = random {
        let seed = solver.seed(&file.options);
        let m = match level {
            Some(m) => m,
            None => interpolation_constant_estimate(&seq, 20, seed, &solver.bisect(&file.options))?.value,
        };
        let kernels = admissible_batch(&seq, count, seed)?;
        let report = riesz_check(&seq, &kernels, m, 1e-4)?;
        writeln!(s, "riesz_level: {m}").unwrap();
        for (k, e) in report.entries.iter().enumerate() {
            let verdict = if e.violated { "VIOLATION" } else { "ok" };
            writeln!(s, "kernel {k}: riesz_lo={} riesz_hi={} {verdict}", e.riesz_lo, e.riesz_hi).unwrap();
        }
        writeln!(s, "violations: {}", report.violations()).unwrap();
    }
    Ok(s)
}

fn cmd_verify(cert_path: &Path, path: &Path, count: usize, seed: u64) -> Result<(Output, bool)> {
    let file = ProblemFile::read(path)?;
    let cert = CertificateFile::read(cert_path)?;
    cert.check_hash(&file)?;
    let p = cert.problem(&file)?;
    let kernels = admissible_batch(p.base(), count, seed)?;
    let report = verify_certificate(&p, &cert.certificate()?, cert.claim(), &VerifyTolerances::default(), &kernels)?;
    let mut s = String::new();
    writeln!(s, "kind: {:?}", cert.kind).unwrap();
    writeln!(s, "level: {}", cert.level).unwrap();
    writeln!(s, "residual: {:e} ({})", report.residual, ok(report.residual_ok)).unwrap();
    writeln!(s, "gamma_min_eigenvalue: {:e}", report.gamma_mineig).unwrap();
    writeln!(s, "delta_min_eigenvalue: {:e} ({})", report.delta_mineig, ok(report.psd_ok)).unwrap();
    let failed = report.kernel_checks.iter().filter(|k| !k.passed).count();
    writeln!(s, "kernel_checks: {} of {} passed", report.kernel_checks.len() - failed, report.kernel_checks.len())
        .unwrap();
    writeln!(s, "verdict: {}", if report.passed() { "PASS" } else { "FAIL" }).unwrap();
    Ok((s, report.passed()))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses() {
        assert_eq!("5,16".parse::<GridSpec>().unwrap(), GridSpec { radii: 5, phases: 16 });
        assert!("5".parse::<GridSpec>().is_err());
        assert!("0,3".parse::<GridSpec>().is_err());
    }

    #[test]
    fn hash_ignores_options_and_formatting() {
        let a = ProblemFile::parse(r#"{"points": [[0, 0, 0.5, 0]], "targets": [[0.7, 0]]}"#).unwrap();
        let b = ProblemFile::parse(r#"{ "points":[[0.0,0.0,0.5,0.0]],"targets":[[0.7,0.0]],"options":{"seed":3} }"#)
            .unwrap();
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn boundary_point_is_an_input_error_naming_the_index() {
        let f = ProblemFile::parse(r#"{"points": [[0, 0, 0, 0], [1, 0, 0, 0]]}"#).unwrap();
        let err = f.sequence().unwrap_err();
        assert_eq!(exit_code(&err), EXIT_INPUT);
        assert!(err.to_string().contains("point 1"), "{err}");
    }

    #[test]
    fn certificate_json_round_trips() {
        let cert = AglerCertificate {
            gamma: HermitianMatrix::from_upper(2, |i, j| Complex64::new(0.1 + i as f64 / 3.0, (j as f64) * 1e-17)),
            delta: HermitianMatrix::identity(2).scale(std::f64::consts::PI),
            residual: 1.234e-15,
            iterations: 7,
        };
        let text = CertificateFile::new(FileKind::LowerBound, 1.5, &cert, "ab".into()).to_json();
        assert_eq!(CertificateFile::parse(&text).unwrap().to_json(), text);
    }
}
