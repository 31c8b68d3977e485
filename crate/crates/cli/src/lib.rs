//! Command-line surface of the equispace solver.
//!
//! Every subcommand reads one instance file and writes one JSON document
//! (the `homotopy` subcommand writes a CSV curve and a JSON summary). Reals
//! are printed with 17 significant digits, and output is a pure function of
//! the instance and flags.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use equispace::covering::{self, CoverageOptions, CoverageReport, FaceCoveringFamily};
use equispace::grid::BaryGrid;
use equispace::homotopy::{self, Homotopy};
use equispace::instance::{self, Problem};
use equispace::numfmt::fmt_real;
use equispace::{Error, HFamily, Point};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "equispace", version, about = "Equally spaced points of convex face coverings of a simplex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Common distance eps0 and equally spaced point of n+1 sets.
    Solve(Common),
    /// Whether the sets cover the simplex (grid test).
    Cover(Common),
    /// Whether the sets cover every facet of the simplex (grid test).
    Boundary(Common),
    /// Distance curve of the blends between the faces and the given covers.
    Homotopy(Common),
    /// Threshold at which the blended family starts to cover.
    T0(Common),
    /// Common point of a face covering family, or a failing subfamily.
    Helly(Common),
    /// Brute-force grid estimates of max-min and min-max distance.
    Oracle(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 128)]
    grid_depth: usize,
    /// Uniform samples of the homotopy parameter below t0.
    #[arg(long, default_value_t = homotopy::DEFAULT_UNIFORM_SAMPLES)]
    t_samples: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary file for `homotopy`; standard error when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

/// Failure of a command together with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_convergence_failure() { EXIT_NONCONVERGENCE } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure { code: EXIT_INVALID, message: format!("{}: {e}", path.display()) }
}

/// A real printed as a JSON number with 17 significant digits; non-finite
/// values become `null`.
#[derive(Debug, Clone, Copy)]
struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_real(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn reals(p: &Point) -> Vec<Real> {
    p.iter().copied().map(Real).collect()
}

#[derive(Serialize)]
struct SolveDoc {
    eps0: Real,
    v: Vec<Real>,
    distances: Vec<Real>,
    covering: bool,
    iterations: usize,
}

#[derive(Serialize)]
struct CoverDoc {
    covered: bool,
    mesh: Real,
    value: Real,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_uncovered: Option<Vec<Real>>,
}

#[derive(Serialize)]
struct HomotopyDoc {
    t0: Real,
    delta0: Option<Real>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failed_t: Vec<Real>,
}

#[derive(Serialize)]
struct T0Doc {
    t0: Real,
}

#[derive(Serialize)]
struct HellyDoc {
    intersects: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Real>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct OracleDoc {
    maximin: Real,
    minimax: Real,
    argmax: Vec<Real>,
    argmin: Vec<Real>,
    mesh: Real,
}

fn json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Documents go to `out` unless redirected by `--out`;
/// diagnostics go to `err`.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(common: &Common) -> Result<Problem, Failure> {
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        return Err(invalid(format!("--tol must be positive, got {}", common.tol)));
    }
    if common.grid_depth == 0 {
        return Err(invalid("--grid-depth must be at least 1"));
    }
    if common.t_samples == 0 {
        return Err(invalid("--t-samples must be at least 1"));
    }
    let text = fs::read_to_string(&common.instance).map_err(|e| io_failure(&common.instance, e))?;
    let inst = instance::parse_instance(&text)
        .map_err(|e| Failure { code: EXIT_INVALID, message: format!("{}: {e}", common.instance.display()) })?;
    Ok(inst.to_problem()?)
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

fn emit(common: &Common, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| invalid(e.to_string())),
    }
}

fn face_family(p: &Problem) -> Result<FaceCoveringFamily, Failure> {
    let fam = match &p.assignment {
        Some(a) => FaceCoveringFamily::with_assignment(p.simplex.clone(), p.bodies.clone(), a.clone())?,
        None => FaceCoveringFamily::new(p.simplex.clone(), p.bodies.clone())?,
    };
    Ok(fam)
}

/// The sets reordered so that set `i` contains face `i`.
fn by_face(p: &Problem) -> Result<Vec<usize>, Failure> {
    let n = p.simplex.dim();
    if p.bodies.len() != n + 1 {
        return Err(invalid(format!("expected {} sets, got {}", n + 1, p.bodies.len())));
    }
    let fam = face_family(p)?;
    let order: Vec<usize> = fam.assignment().iter().flatten().copied().collect();
    let mut seen = order.clone();
    seen.sort_unstable();
    seen.dedup();
    if order.len() != n + 1 || seen.len() != n + 1 {
        return Err(invalid("no assignment of the faces to distinct sets containing them"));
    }
    Ok(order)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Solve(c) => {
            let p = load(&c)?;
            let order = by_face(&p)?;
            let fam = HFamily::new(p.simplex.clone(), order.iter().map(|&j| p.bodies[j].clone()).collect())?;
            let r = equispace::solve(&fam, c.tol)?;
            let distances = p.bodies.iter().map(|b| b.distance(&r.v).map(Real)).collect::<Result<Vec<_>, _>>()?;
            let doc = SolveDoc {
                eps0: Real(r.eps0),
                v: reals(&r.v),
                distances,
                covering: r.covering,
                iterations: r.iterations,
            };
            emit(&c, &json(&doc), out)?;
        }
        Command::Cover(c) => {
            let p = load(&c)?;
            let r = covering::covers_simplex(&p.simplex, &p.bodies, coverage(&c))?;
            emit(&c, &json(&cover_doc(&r)), out)?;
        }
        Command::Boundary(c) => {
            let p = load(&c)?;
            let r = covering::covers_boundary(&p.simplex, &p.bodies, coverage(&c))?;
            emit(&c, &json(&cover_doc(&r)), out)?;
        }
        Command::Homotopy(c) => {
            let p = load(&c)?;
            let h = homotopy_of(&p)?;
            let t0 = h.find_t0(c.tol)?;
            let samples = homotopy::default_samples(t0, c.t_samples, c.tol);
            let curve = h.epsilon_curve_with_t0(t0, &samples, c.tol)?;
            let mut csv = Vec::new();
            curve.write_csv(&mut csv).map_err(|e| invalid(e.to_string()))?;
            emit(&c, &String::from_utf8(csv).expect("csv is utf-8"), out)?;
            let doc = HomotopyDoc {
                t0: Real(curve.t0),
                delta0: curve.delta0.map(Real),
                failed_t: curve.failures.iter().map(|(t, _)| Real(*t)).collect(),
            };
            let text = json(&doc);
            match &c.summary {
                Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e))?,
                None => err.write_all(text.as_bytes()).map_err(|e| invalid(e.to_string()))?,
            }
            if let Some((t, e)) = curve.failures.first() {
                let _ = writeln!(err, "error: solve failed at t = {}: {e}", fmt_real(*t));
                return Ok(EXIT_NONCONVERGENCE);
            }
        }
        Command::T0(c) => {
            let p = load(&c)?;
            let t0 = homotopy_of(&p)?.find_t0(c.tol)?;
            emit(&c, &json(&T0Doc { t0: Real(t0) }), out)?;
        }
        Command::Helly(c) => {
            let p = load(&c)?;
            let r = covering::helly_criterion(&face_family(&p)?, coverage(&c))?;
            let doc = HellyDoc {
                intersects: r.intersects,
                witness: r.witness.as_ref().map(reals),
                counterexample: r.counterexample.map(|idx| idx.iter().map(|i| i + 1).collect()),
            };
            emit(&c, &json(&doc), out)?;
        }
        Command::Oracle(c) => {
            let p = load(&c)?;
            let grid = BaryGrid::over_simplex(&p.simplex, c.grid_depth)?;
            let ex = grid.extrema(&p.bodies)?;
            let doc = OracleDoc {
                maximin: Real(ex.maximin.value),
                minimax: Real(ex.minimax.value),
                argmax: reals(&ex.maximin.point),
                argmin: reals(&ex.minimax.point),
                mesh: Real(ex.mesh),
            };
            emit(&c, &json(&doc), out)?;
        }
    }
    Ok(EXIT_OK)
}

fn coverage(c: &Common) -> CoverageOptions {
    CoverageOptions { grid_depth: c.grid_depth, tol: c.tol, cross_check: true }
}

fn cover_doc(r: &CoverageReport) -> CoverDoc {
    CoverDoc {
        covered: r.covered,
        mesh: Real(r.mesh),
        value: Real(r.value),
        witness_uncovered: r.witness_uncovered.as_ref().map(reals),
    }
}

fn homotopy_of(p: &Problem) -> Result<Homotopy, Failure> {
    let order = by_face(p)?;
    Ok(Homotopy::new(p.simplex.clone(), order.iter().map(|&j| p.bodies[j].clone()).collect())?)
}
