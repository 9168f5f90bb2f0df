//! `bmat`: classification, error-constant bounds, sampled verification and
//! exact LCP checks for B-matrices.
//!
//! Exit codes: 0 success, 2 the input is not of the required class,
//! 3 a bound or a reproduced value failed its check, 64 usage or parse
//! error, 65 dimension error.

pub mod num;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use bmat_core::generators::FamilySpec;
use bmat_core::io::{parse_matrix, parse_vector, write_matrix};
use bmat_core::lcp::{solve_enumeration, validate_against, LcpInstance};
use bmat_core::matrix::{b_matrix_violation, P_MATRIX_MAX_DIM};
use bmat_core::{
    is_p_matrix_bruteforce, is_sdd, sample_max_norm, split_b_plus, BoundQuantities, Error,
    OracleConfig, SquareMatrix, DEFAULT_TOL,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::num::{parse_real, sig6, sig6_list};
use crate::report::BoundReportDocument;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CLASSIFICATION: u8 = 2;
pub const EXIT_SOUNDNESS: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DIMENSION: u8 = 65;

/// Allowed shortfall of a bound below the sampled maximum.
pub const SOUNDNESS_SLACK: f64 = 1e-9;
/// Allowed deviation of `bmat reproduce` from the published values.
pub const REPRODUCE_TOL: f64 = 5e-4;

#[derive(Debug, Parser)]
#[command(
    name = "bmat",
    version,
    about = "Error-constant bounds for B-matrix linear complementarity problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a matrix: B-matrix, SDD B+ part, P-matrix.
    Check {
        /// Matrix file, or `-` for stdin.
        path: PathBuf,
        /// Strictness margin of the B-matrix and SDD tests.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Compute the three bounds and their intermediate quantities.
    Bounds {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the bounds with a sampled lower estimate of the constant.
    Verify {
        path: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve LCP(M, q) exactly and optionally check the error bound at x.
    Lcp {
        matrix: PathBuf,
        q: PathBuf,
        /// Point at which to check `‖x − x*‖∞ ≤ bound_new · ‖min(x, Mx + q)‖∞`.
        #[arg(long)]
        x: Option<PathBuf>,
    },
    /// Write a generated matrix in the text format.
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Output file; stdout when absent.
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Recompute the reference comparison table and check it.
    Reproduce,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Grid intervals per axis; 0 disables the grid.
    #[arg(long, default_value_t = 4)]
    pub grid_steps: u32,
    /// Skip the 2ⁿ vertices of the cube.
    #[arg(long)]
    pub no_vertices: bool,
    #[arg(long, default_value_t = 0)]
    pub random_samples: u64,
    #[arg(long, env = "BMAT_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl OracleArgs {
    pub fn config(&self) -> OracleConfig {
        OracleConfig {
            grid_steps: (self.grid_steps > 0).then_some(self.grid_steps),
            include_vertices: !self.no_vertices,
            random_samples: self.random_samples,
            rng_seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// 4×4 family with parameter k ≥ 1.
    Example1 {
        #[arg(long, value_parser = parse_real, default_value = "1")]
        k: f64,
    },
    /// 2×2 family; accepts fractions such as 8/9.
    Example2 {
        #[arg(long, value_parser = parse_real, default_value = "4/5")]
        a: f64,
        #[arg(long, value_parser = parse_real, default_value = "8/9")]
        k: f64,
    },
    /// Random B-matrix with row margin 0.05.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, env = "BMAT_SEED", default_value_t = 0)]
        seed: u64,
        /// Use row margin 1e-3 and no diagonal slack.
        #[arg(long)]
        near_singular: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotBMatrix | Error::NotSdd | Error::NotSddMMatrix | Error::NotPMatrix => {
                EXIT_CLASSIFICATION
            }
            Error::DimensionMismatch { .. }
            | Error::DimensionTooLarge { .. }
            | Error::DimensionTooSmall { .. } => EXIT_DIMENSION,
            Error::SingularMatrix { .. } | Error::NoSolutionFound => EXIT_SOUNDNESS,
            Error::EmptyMatrix
            | Error::LengthMismatch { .. }
            | Error::NonFiniteEntry { .. }
            | Error::ScalingOutOfRange { .. }
            | Error::SampleBudgetExceeded { .. }
            | Error::InvalidConfig(_)
            | Error::ParameterOutOfRange { .. }
            | Error::Parse { .. } => EXIT_USAGE,
        };
        Self::new(code, e.to_string())
    }
}

type CmdResult = std::result::Result<(u8, String), Failure>;

/// Parses `args` and runs the command, writing reports to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command) {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "bmat: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command) -> CmdResult {
    match command {
        Command::Check { path, tol } => cmd_check(&path, tol),
        Command::Bounds { path, format } => cmd_bounds(&path, format),
        Command::Verify {
            path,
            oracle,
            format,
        } => cmd_verify(&path, &oracle.config(), format),
        Command::Lcp { matrix, q, x } => cmd_lcp(&matrix, &q, x.as_deref()),
        Command::Gen { family, output } => cmd_gen(&family, output.as_deref()),
        Command::Reproduce => cmd_reproduce(),
    }
}

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn read_matrix(path: &Path) -> std::result::Result<SquareMatrix, Failure> {
    parse_matrix(&read_input(path)?)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn read_vector(path: &Path) -> std::result::Result<Vec<f64>, Failure> {
    parse_vector(&read_input(path)?)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn require_b_matrix(m: &SquareMatrix) -> std::result::Result<(), Failure> {
    match b_matrix_violation(m, DEFAULT_TOL) {
        None => Ok(()),
        Some(v) => Err(Failure::new(
            EXIT_CLASSIFICATION,
            format!("not a B-matrix: {v}"),
        )),
    }
}

fn quantities(m: &SquareMatrix) -> std::result::Result<BoundQuantities, Failure> {
    require_b_matrix(m)?;
    Ok(BoundQuantities::compute(&split_b_plus(m))?)
}

fn render(doc: &BoundReportDocument, format: Format) -> String {
    match format {
        Format::Text => doc.to_text(),
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    }
}

pub fn cmd_check(path: &Path, tol: f64) -> CmdResult {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--tol must be finite and non-negative, got {tol}"),
        ));
    }
    let m = read_matrix(path)?;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut s = String::new();
    let violation = b_matrix_violation(&m, tol);
    match &violation {
        None => writeln!(s, "B-matrix: yes"),
        Some(v) => writeln!(s, "B-matrix: no ({v})"),
    }
    .expect("write to string");
    let split = split_b_plus(&m);
    let sdd = split.b_plus.diagonal().iter().all(|&v| v > 0.0) && is_sdd(&split.b_plus, tol);
    let _ = writeln!(s, "SDD B+: {}", yes_no(sdd));
    if m.n() <= P_MATRIX_MAX_DIM {
        let _ = writeln!(s, "P-matrix: {}", yes_no(is_p_matrix_bruteforce(&m)?));
    } else {
        let _ = writeln!(s, "P-matrix: not checked (n > {P_MATRIX_MAX_DIM})");
    }
    let code = if violation.is_none() {
        EXIT_OK
    } else {
        EXIT_CLASSIFICATION
    };
    Ok((code, s))
}

pub fn cmd_bounds(path: &Path, format: Format) -> CmdResult {
    let q = quantities(&read_matrix(path)?)?;
    let doc = BoundReportDocument::new(&path.display().to_string(), &q, None);
    Ok((EXIT_OK, render(&doc, format)))
}

pub fn cmd_verify(path: &Path, cfg: &OracleConfig, format: Format) -> CmdResult {
    let m = read_matrix(path)?;
    let q = quantities(&m)?;
    let r = sample_max_norm(&m, cfg)?;
    let doc = BoundReportDocument::new(&path.display().to_string(), &q, Some(&r));
    let sound = doc
        .slacks()
        .expect("oracle present")
        .iter()
        .all(|&(_, slack)| slack >= -SOUNDNESS_SLACK);
    let mut text = render(&doc, format);
    if r.vertices_skipped && format == Format::Text {
        let _ = writeln!(
            text,
            "note: vertices skipped (n > {})",
            bmat_core::oracle::MAX_VERTEX_DIM
        );
    }
    Ok((if sound { EXIT_OK } else { EXIT_SOUNDNESS }, text))
}

pub fn cmd_lcp(matrix: &Path, q_path: &Path, x_path: Option<&Path>) -> CmdResult {
    let m = read_matrix(matrix)?;
    let q = read_vector(q_path)?;
    let x = x_path.map(read_vector).transpose()?;
    if let Some(x) = &x {
        if x.len() != m.n() {
            return Err(Error::DimensionMismatch {
                expected: m.n(),
                got: x.len(),
            }
            .into());
        }
    }
    let inst = LcpInstance::new(m.clone(), q)?;
    require_b_matrix(&m)?;
    let sol = solve_enumeration(&inst)?;
    let mut s = String::new();
    let _ = writeln!(s, "x*: {}", sig6_list(&sol.x_star));
    let support: Vec<String> = sol.support.iter().map(|i| (i + 1).to_string()).collect();
    let _ = writeln!(s, "support: {}", support.join(" "));
    let mut code = EXIT_OK;
    if let Some(x) = x {
        let bound = BoundQuantities::compute(&split_b_plus(&m))?.bound_new;
        let c = validate_against(&inst, &sol, &x, bound)?;
        let _ = writeln!(s, "bound_new: {}", sig6(bound));
        let _ = writeln!(s, "lhs: {}", sig6(c.lhs));
        let _ = writeln!(s, "rhs: {}", sig6(c.rhs));
        let _ = writeln!(s, "holds: {}", c.holds);
        if !c.holds {
            code = EXIT_SOUNDNESS;
        }
    }
    Ok((code, s))
}

pub fn cmd_gen(family: &Family, output: Option<&Path>) -> CmdResult {
    let (spec, label) = match *family {
        Family::Example1 { k } => (FamilySpec::example1(k)?, format!("example1 k={k}")),
        Family::Example2 { a, k } => (FamilySpec::example2(a, k)?, format!("example2 a={a} k={k}")),
        Family::Random {
            n,
            seed,
            near_singular,
        } => (
            FamilySpec::random_b(n, seed, near_singular)?,
            format!(
                "random n={n} seed={seed}{}",
                if near_singular { " near-singular" } else { "" }
            ),
        ),
    };
    let text = format!("# {label}\n{}", write_matrix(&spec.build()?));
    match output {
        None => Ok((EXIT_OK, text)),
        Some(p) => {
            std::fs::write(p, text)
                .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", p.display())))?;
            Ok((EXIT_OK, String::new()))
        }
    }
}

/// A row of the reference table: family, parameters, and the published
/// values of the three bounds.
pub struct ReferenceRow {
    pub label: &'static str,
    pub spec: FamilySpec,
    pub expected: [f64; 3],
    /// `expected` as published.
    pub published: [&'static str; 3],
}

pub fn reference_rows() -> Vec<ReferenceRow> {
    vec![
        ReferenceRow {
            label: "example1 k=1",
            spec: FamilySpec::Example1 { k: 1.0 },
            expected: [60.0, 14.3775, 13.9878],
            published: ["60", "14.3775", "13.9878"],
        },
        ReferenceRow {
            label: "example1 k=2",
            spec: FamilySpec::Example1 { k: 2.0 },
            expected: [90.0, 14.4246, 14.0265],
            published: ["90", "14.4246", "14.0265"],
        },
        ReferenceRow {
            label: "example2 a=4/5 k=8/9",
            spec: FamilySpec::Example2 {
                a: 4.0 / 5.0,
                k: 8.0 / 9.0,
            },
            expected: [360.0 / 81.0, 425.0 / 81.0, 306.0 / 81.0],
            published: ["360/81", "425/81", "306/81"],
        },
    ]
}

pub fn cmd_reproduce() -> CmdResult {
    let mut s = format!(
        "{:<22} {:>10} {:>10} {:>10}  {}\n",
        "matrix", "bound_gep", "bound_li", "bound_new", "status"
    );
    let mut all_match = true;
    for row in reference_rows() {
        let q = BoundQuantities::compute(&split_b_plus(&row.spec.build()?))?;
        let got = [q.bound_gep, q.bound_li, q.bound_new];
        let ok = got
            .iter()
            .zip(row.expected)
            .all(|(g, e)| (g - e).abs() <= REPRODUCE_TOL);
        all_match &= ok;
        let _ = writeln!(
            s,
            "{:<22} {:>10} {:>10} {:>10}  {}",
            row.label,
            sig6(got[0]),
            sig6(got[1]),
            sig6(got[2]),
            if ok { "ok" } else { "MISMATCH" }
        );
        let _ = writeln!(
            s,
            "{:<22} {:>10} {:>10} {:>10}  published",
            "", row.published[0], row.published[1], row.published[2]
        );
    }
    Ok((if all_match { EXIT_OK } else { EXIT_SOUNDNESS }, s))
}
