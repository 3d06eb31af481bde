//! Command line front end: argument parsing, file formats and report emission.
//!
//! Every JSON document carries a `"schema"` field. Reports embed the diagram
//! (and any sampled matrix) they were computed from, in the same format the
//! readers accept, so outputs can be fed back in.

use crate::diagram::{
    all_bicolorings, coloring_word, diagram_from_json, diagram_to_json, Bicoloring, Color, LandauDiagram, Triangle,
};
use crate::discriminant::{
    disc_via_recursion, ls_disc_box, nls_disc_doublebox, pentabox_resultant_exact, sls_res_penta, RecursionBase,
};
use crate::enumeration::{
    expected_disc_degree, ls_degree, multidegree_complete_intersection, per_line_degrees, sls_degree_vector, GenusTable,
};
use crate::geometry::{join_points, Line, Point};
use crate::positivity::{
    column_pairs, columns_needed, copositivity_experiment, expected_count, reality_experiment, sample_tp_matrix,
    sample_tp_matrix_exact, trial_seed, CopositivityEvaluator, CopositivityReport, ParameterDistribution, RealityOptions,
    RealityReport, TrialStatus,
};
use crate::positroid::{build_plabic_logged, consistency_report, perfect_orientations, trip_permutation};
use crate::rational::{line_to_strings, tr_rat_factors, tree_rational_fibers, triangle_rational_fibers, ExternalTriangleData};
use crate::scalars::{rational_from_f64, rational_to_f64, ExactRational};
use crate::schubert::fiber::incidence_values;
use crate::schubert::{solve_fiber, FiberSolution};
use crate::{LandauError, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const MATRIX_SCHEMA: &str = "landau.matrix/1";

/// Exit code for an empirical counterexample (a non-real fiber or a sign violation).
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "landau", version, about = "Landau analysis of planar diagrams as line incidence problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Per-trial plot data (`reality` and `copos` only).
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Sample {
    /// Consecutive column pairs of a sampled totally positive matrix.
    Tp,
    /// Random complex lines.
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Exact,
    Numeric,
}

#[derive(clap::Args, Debug)]
struct Sampling {
    /// Log-uniform parameter range of the totally positive sampler.
    #[arg(long, default_value_t = 0.1)]
    lo: f64,
    #[arg(long, default_value_t = 10.0)]
    hi: f64,
}

impl Sampling {
    fn dist(&self) -> Result<ParameterDistribution> {
        if !(self.lo > 0.0 && self.lo <= self.hi) {
            return Err(LandauError::Domain(format!("need 0 < lo ≤ hi, got [{}, {}]", self.lo, self.hi)));
        }
        Ok(ParameterDistribution::LogUniform { lo: self.lo, hi: self.hi })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multidegree of the incidence variety of the internal graph.
    Multidegree {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// LS degree, SLS degree vector or expected discriminant degrees, whichever `u` calls for.
    Degrees {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Solve the fiber of the Landau map.
    Solve {
        #[arg(long)]
        diagram: PathBuf,
        /// `4 × n` matrix whose consecutive column pairs span the external lines.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Data to use when no matrix is given.
        #[arg(long, value_enum, default_value_t = Sample::Tp)]
        sample: Sample,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the LS discriminant, SLS resultant or NLS discriminant.
    Disc {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Route::Exact)]
        route: Route,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact fibers of `H△` diagrams, with the triangle's factor values.
    Rational {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Colouring word of one component; defaults to the diagram's `sigma` or to all.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reality of fibers over positive data.
    Reality {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-6)]
        imag_tol: f64,
        #[arg(long, default_value_t = 1e-7)]
        residual_tol: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Sign of a closed form over positive data.
    Copos {
        /// box, penta, tr_mixed or tr_component.
        #[arg(long)]
        evaluator: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Plabic graph, trip permutation and bases of the positroid of a component.
    Positroid {
        #[arg(long)]
        diagram: PathBuf,
        /// Colouring word in triangle order, e.g. `bw`; defaults to the diagram's
        /// `sigma` or to every component.
        #[arg(long)]
        sigma: Option<String>,
        /// Number of bases to list.
        #[arg(long, default_value_t = 10)]
        bases: usize,
        /// Also count the fiber on each component numerically.
        #[arg(long)]
        consistency: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e);
        return e.exit_code();
    }
    match execute(&cli) {
        Ok((text, code)) => match write_output(cli.output.as_deref(), &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {}", e);
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    }
}

/// Applies `LANDAU_THREADS` to the global worker pool.
fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("LANDAU_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| LandauError::Parse(format!("LANDAU_THREADS must be a positive integer, got {:?}", v)))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| LandauError::Parse(format!("{}: {}", p.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| LandauError::Precondition(format!("--seed is required for {}", what)))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let csv_ok = matches!(cli.command, Command::Reality { .. } | Command::Copos { .. });
    if cli.format == Format::Csv && !csv_ok {
        return Err(LandauError::Unsupported("--format csv is only available for reality and copos".into()));
    }
    match &cli.command {
        Command::Multidegree { diagram } => Ok((pretty(&multidegree_json(&read_diagram(diagram)?)?), 0)),
        Command::Degrees { diagram } => Ok((pretty(&degrees_json(&read_diagram(diagram)?)?), 0)),
        Command::Solve { diagram, matrix, sample, seed } => {
            let d = read_diagram(diagram)?;
            Ok((pretty(&solve_json(&d, matrix.as_deref(), *sample, need_seed(*seed, "solve")?)?), 0))
        }
        Command::Disc { diagram, matrix, route, seed } => {
            let d = read_diagram(diagram)?;
            Ok((pretty(&disc_json(&d, matrix.as_deref(), *route, *seed)?), 0))
        }
        Command::Rational { diagram, matrix, sigma, seed } => {
            let d = read_diagram(diagram)?;
            Ok((pretty(&rational_json(&d, matrix.as_deref(), sigma.as_deref(), *seed)?), 0))
        }
        Command::Reality { diagram, trials, seed, imag_tol, residual_tol, sampling } => {
            let d = read_diagram(diagram)?;
            let mut opts = RealityOptions::new(*trials, need_seed(*seed, "reality")?);
            opts.dist = sampling.dist()?;
            opts.imag_tol = *imag_tol;
            opts.residual_tol = *residual_tol;
            let rep = reality_experiment(&d, &opts)?;
            let code = if rep.not_real > 0 { EXIT_VIOLATION } else { 0 };
            let text = match cli.format {
                Format::Csv => emit_plot_data(&reality_plot_rows(&rep)),
                Format::Json => pretty(&json!({
                    "schema": "landau.reality/1",
                    "diagram": diagram_to_json(&d),
                    "options": opts,
                    "report": rep,
                })),
            };
            Ok((text, code))
        }
        Command::Copos { evaluator, trials, seed, sampling } => {
            let ev = CopositivityEvaluator::parse(evaluator)?;
            let rep = copositivity_experiment(ev, *trials, need_seed(*seed, "copos")?, sampling.dist()?)?;
            let code = if ev.conjectured_positive() && rep.sign_violations > 0 { EXIT_VIOLATION } else { 0 };
            let text = match cli.format {
                Format::Csv => emit_plot_data(&copositivity_plot_rows(&rep)),
                Format::Json => pretty(&json!({
                    "schema": "landau.copos/1",
                    "conjectured_positive": ev.conjectured_positive(),
                    "report": rep,
                })),
            };
            Ok((text, code))
        }
        Command::Positroid { diagram, sigma, bases, consistency, seed } => {
            let d = read_diagram(diagram)?;
            let seed = if *consistency { Some(need_seed(*seed, "positroid --consistency")?) } else { *seed };
            let (v, ok) = positroid_json(&d, sigma.as_deref(), *bases, seed, *consistency)?;
            Ok((pretty(&v), if ok { 0 } else { 3 }))
        }
    }
}

// ---------------------------------------------------------------------------
// Readers

fn read_json(path: &Path) -> Result<Value> {
    let s = std::fs::read_to_string(path).map_err(|e| LandauError::Parse(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&s).map_err(|e| LandauError::Parse(format!("{}: {}", path.display(), e)))
}

/// Reads a diagram file, or the `"diagram"` member of a report.
pub fn read_diagram(path: &Path) -> Result<LandauDiagram> {
    diagram_from_value(&read_json(path)?)
}

pub fn diagram_from_value(v: &Value) -> Result<LandauDiagram> {
    let v = v.get("diagram").unwrap_or(v);
    diagram_from_json(&v.to_string())
}

/// One matrix entry: exact when given as an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Exact(ExactRational),
    Float(f64),
}

impl Entry {
    fn parse(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Entry::Exact(ExactRational::from_integer(BigInt::from(i))))
                } else {
                    Ok(Entry::Float(n.as_f64().ok_or_else(|| LandauError::Parse(format!("bad number {}", n)))?))
                }
            }
            Value::String(s) => {
                if let Ok(q) = ExactRational::from_str(s.trim()) {
                    return Ok(Entry::Exact(q));
                }
                s.trim().parse::<f64>().map(Entry::Float).map_err(|_| LandauError::Parse(format!("bad matrix entry {:?}", s)))
            }
            _ => Err(LandauError::Parse(format!("bad matrix entry {}", v))),
        }
    }
    pub fn to_exact(&self) -> Result<ExactRational> {
        match self {
            Entry::Exact(q) => Ok(q.clone()),
            Entry::Float(x) => rational_from_f64(*x).ok_or_else(|| LandauError::Domain(format!("{} is not finite", x))),
        }
    }
    pub fn to_f64(&self) -> f64 {
        match self {
            Entry::Exact(q) => rational_to_f64(q),
            Entry::Float(x) => *x,
        }
    }
}

/// A `4 × n` matrix as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixData {
    pub columns: Vec<[Entry; 4]>,
}

impl MatrixData {
    pub fn exact(&self) -> Result<Vec<Point<ExactRational>>> {
        self.columns
            .iter()
            .map(|c| Ok(Point::new([c[0].to_exact()?, c[1].to_exact()?, c[2].to_exact()?, c[3].to_exact()?])))
            .collect()
    }
    pub fn float(&self) -> Vec<Point<f64>> {
        self.columns.iter().map(|c| Point::new(std::array::from_fn(|r| c[r].to_f64()))).collect()
    }
    pub fn is_exact(&self) -> bool {
        self.columns.iter().flatten().all(|e| matches!(e, Entry::Exact(_)))
    }
}

/// Accepts `{"schema", "rows": [[…]; 4]}`, a bare array of four rows, or a report
/// with a `"matrix"` member.
pub fn matrix_from_value(v: &Value) -> Result<MatrixData> {
    let v = v.get("matrix").unwrap_or(v);
    let rows = v.get("rows").unwrap_or(v);
    let rows = rows.as_array().ok_or_else(|| LandauError::Parse("matrix must be an array of rows".into()))?;
    if rows.len() != 4 {
        return Err(LandauError::Dimension(format!("matrix has {} rows, expected 4", rows.len())));
    }
    let parsed: Vec<Vec<Entry>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| LandauError::Parse("matrix row must be an array".into()))?
                .iter()
                .map(Entry::parse)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let n = parsed[0].len();
    if parsed.iter().any(|r| r.len() != n) {
        return Err(LandauError::Dimension("matrix rows have different lengths".into()));
    }
    let columns = (0..n).map(|j| std::array::from_fn(|r| parsed[r][j].clone())).collect();
    Ok(MatrixData { columns })
}

pub fn read_matrix(path: &Path) -> Result<MatrixData> {
    matrix_from_value(&read_json(path)?)
}

pub fn matrix_to_json_f64(cols: &[Point<f64>]) -> Value {
    let rows: Vec<Vec<f64>> = (0..4).map(|r| cols.iter().map(|c| c.x[r]).collect()).collect();
    json!({ "schema": MATRIX_SCHEMA, "rows": rows })
}

pub fn matrix_to_json_exact(cols: &[Point<ExactRational>]) -> Value {
    let rows: Vec<Vec<String>> = (0..4).map(|r| cols.iter().map(|c| c.x[r].to_string()).collect()).collect();
    json!({ "schema": MATRIX_SCHEMA, "rows": rows })
}

fn lines_from_columns<F: crate::scalars::Field>(d: &LandauDiagram, cols: &[Point<F>]) -> Result<Vec<Line<F>>> {
    let pairs = column_pairs(d)?;
    let need = pairs.last().map(|p| p.1).unwrap_or(0);
    if cols.len() != need {
        return Err(LandauError::Dimension(format!("diagram needs {} columns, matrix has {}", need, cols.len())));
    }
    Ok(pairs.iter().map(|&(a, b)| join_points(&cols[a - 1], &cols[b - 1])).collect())
}

// ---------------------------------------------------------------------------
// Subcommands

fn big(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

fn sigma_json(s: &Bicoloring) -> Value {
    Value::Object(s.iter().map(|(t, c)| (t.id(), json!(c.letter().to_string()))).collect())
}

fn multidegree_json(d: &LandauDiagram) -> Result<Value> {
    let m = multidegree_complete_intersection(&d.graph)?;
    let table = m.table();
    let total: BigInt = table.values().sum();
    let terms: Vec<Value> = table.iter().map(|(u, g)| json!({ "u": u, "gamma": big(g) })).collect();
    let at_u = if d.u.iter().sum::<u32>() == m.dim() { Some(big(&m.gamma(&d.u))) } else { None };
    Ok(json!({
        "schema": "landau.multidegree/1",
        "diagram": diagram_to_json(d),
        "dim": m.dim(),
        "terms": terms,
        "term_count": table.len(),
        "coefficient_sum": big(&total),
        "gamma_at_u": at_u,
    }))
}

fn degrees_json(d: &LandauDiagram) -> Result<Value> {
    let dim = multidegree_complete_intersection(&d.graph)?.dim();
    let s: u32 = d.u.iter().sum();
    let mut out = json!({ "schema": "landau.degrees/1", "diagram": diagram_to_json(d), "dim": dim, "size": s });
    if s == dim {
        out["regime"] = json!("LS");
        out["ls_degree"] = big(&ls_degree(&d.graph, &d.u)?);
        out["disc_degree"] = match expected_disc_degree(&d.graph, &d.u, &GenusTable::builtin()) {
            Ok(v) => json!(v),
            Err(LandauError::MissingGenus(u)) => json!({ "missing_genus": u }),
            Err(e) => return Err(e),
        };
    } else if s == dim + 1 {
        let per_vertex = sls_degree_vector(&d.graph, &d.u)?;
        out["regime"] = json!("SLS");
        out["sls_per_vertex"] = Value::Array(per_vertex.iter().map(big).collect());
        out["sls_per_line"] = Value::Array(per_line_degrees(&d.u, &per_vertex).iter().map(big).collect());
    } else if s + 1 == dim {
        out["regime"] = json!("NLS");
    } else {
        return Err(LandauError::Dimension(format!("|u| = {} is not within one of dim V_G = {}", s, dim)));
    }
    Ok(out)
}

fn c64_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn solution_json(s: &FiberSolution) -> Value {
    json!({
        "lines": s.lines.iter().map(|l| l.p.iter().map(c64_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "max_residual": s.max_residual,
        "real": s.is_real,
        "max_imag": s.max_imag,
        "component": s.component.as_ref().map(sigma_json),
    })
}

fn random_c64_lines(n: usize, rng: &mut ChaCha8Rng) -> Vec<Line<Complex64>> {
    let mut pt = || Point::new(std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    (0..n).map(|_| join_points(&pt(), &pt())).collect()
}

fn solve_json(d: &LandauDiagram, matrix: Option<&Path>, sample: Sample, seed: u64) -> Result<Value> {
    let mut out = json!({ "schema": "landau.solve/1", "diagram": diagram_to_json(d), "seed": seed });
    let m: Vec<Line<Complex64>> = match (matrix, sample) {
        (Some(p), _) => {
            let cols = read_matrix(p)?.float();
            out["matrix"] = matrix_to_json_f64(&cols);
            lines_from_columns(d, &cols)?.iter().map(crate::geometry::line_to_c64).collect()
        }
        (None, Sample::Tp) => {
            let z = sample_tp_matrix(columns_needed(d)?, seed, ParameterDistribution::default())?;
            out["matrix"] = matrix_to_json_f64(&z.columns);
            lines_from_columns(d, &z.columns)?.iter().map(crate::geometry::line_to_c64).collect()
        }
        (None, Sample::Complex) => {
            if !d.h.is_empty() {
                return Err(LandauError::Unsupported("random complex lines ignore external incidences; pass a matrix".into()));
            }
            random_c64_lines(d.d(), &mut ChaCha8Rng::seed_from_u64(seed))
        }
    };
    let (route, sols) = solve_fiber(d, &m, seed)?;
    out["route"] = json!(format!("{:?}", route));
    out["expected"] = json!(expected_count(d).ok());
    out["count"] = json!(sols.len());
    out["solutions"] = Value::Array(sols.iter().map(solution_json).collect());
    Ok(out)
}

/// Which closed form `disc` evaluates for a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DiscKind {
    Box,
    Pentagon,
    Pentabox,
    DoubleBox,
    Recursion(RecursionBase),
}

fn disc_kind(d: &LandauDiagram) -> Result<DiscKind> {
    if !d.h.is_empty() {
        return Err(LandauError::Unsupported("discriminants of diagrams with external incidences".into()));
    }
    let k2 = d.ell() == 2 && d.graph.has_edge(1, 2);
    Ok(match (d.ell(), d.u.as_slice()) {
        (1, [4]) => DiscKind::Box,
        (1, [5]) => DiscKind::Pentagon,
        (2, [4, 3]) if k2 => DiscKind::Pentabox,
        (2, [3, 3]) if k2 => DiscKind::DoubleBox,
        _ => {
            let dim = d.dim() as u32;
            let s: u32 = d.u.iter().sum();
            if s == dim {
                DiscKind::Recursion(RecursionBase::BoxGram)
            } else if s == dim + 1 {
                DiscKind::Recursion(RecursionBase::PentaGram)
            } else {
                return Err(LandauError::Unsupported(format!("no closed form for u = {:?}", d.u)));
            }
        }
    })
}

fn disc_json(d: &LandauDiagram, matrix: Option<&Path>, route: Route, seed: Option<u64>) -> Result<Value> {
    let kind = disc_kind(d)?;
    let mut out = json!({
        "schema": "landau.disc/1",
        "diagram": diagram_to_json(d),
        "kind": format!("{:?}", kind),
        "route": format!("{:?}", route).to_lowercase(),
    });
    let n = columns_needed(d)?;
    if route == Route::Numeric || matches!(kind, DiscKind::Recursion(_)) {
        let cols = match matrix {
            Some(p) => read_matrix(p)?.float(),
            None => sample_tp_matrix(n, need_seed(seed, "disc without --matrix")?, ParameterDistribution::default())?.columns,
        };
        out["matrix"] = matrix_to_json_f64(&cols);
        let m = lines_from_columns(d, &cols)?;
        let value = match kind {
            DiscKind::Box => json!(ls_disc_box(&m.clone().try_into().unwrap())),
            DiscKind::Pentagon => json!(sls_res_penta(&m.clone().try_into().unwrap())),
            DiscKind::DoubleBox => {
                let r = nls_disc_doublebox(&m.clone().try_into().unwrap())?;
                out["degenerate"] = json!(r.degenerate);
                json!(r.value)
            }
            DiscKind::Pentabox => {
                let m = m.iter().map(crate::geometry::line_to_c64).collect::<Vec<_>>();
                let r = disc_via_recursion(d, &m, RecursionBase::BoxGram)?;
                out["branches"] = json!(r.branches);
                c64_json(&r.value)
            }
            DiscKind::Recursion(base) => {
                let m = m.iter().map(crate::geometry::line_to_c64).collect::<Vec<_>>();
                let r = disc_via_recursion(d, &m, base)?;
                out["branches"] = json!(r.branches);
                out["peeled"] = json!(r.peeled);
                c64_json(&r.value)
            }
        };
        out["value"] = value;
        return Ok(out);
    }
    let cols = match matrix {
        Some(p) => read_matrix(p)?.exact()?,
        None => sample_tp_matrix_exact(n, need_seed(seed, "disc without --matrix")?)?.columns,
    };
    out["matrix"] = matrix_to_json_exact(&cols);
    let m = lines_from_columns(d, &cols)?;
    let value = match kind {
        DiscKind::Box => ls_disc_box(&m.try_into().unwrap()),
        DiscKind::Pentagon => sls_res_penta(&m.try_into().unwrap()),
        DiscKind::DoubleBox => {
            let r = nls_disc_doublebox(&m.try_into().unwrap())?;
            out["degenerate"] = json!(r.degenerate);
            r.value
        }
        DiscKind::Pentabox => {
            let r = pentabox_resultant_exact(&m.try_into().unwrap())?;
            out["resultant"] = json!(r.res.to_string());
            out["det_gram"] = json!(r.det_gram.to_string());
            r.delta
        }
        DiscKind::Recursion(_) => unreachable!("recursion is numeric"),
    };
    out["value"] = json!(value.to_string());
    out["sign"] = json!(if value.is_zero() { 0 } else if value > ExactRational::zero() { 1 } else { -1 });
    Ok(out)
}

fn rational_json(d: &LandauDiagram, matrix: Option<&Path>, sigma: Option<&str>, seed: Option<u64>) -> Result<Value> {
    if !d.h_triangle {
        return Err(LandauError::Precondition("rational fibers need the H△ degeneration (\"H\": \"triangle\")".into()));
    }
    let cols = match matrix {
        Some(p) => read_matrix(p)?.exact()?,
        None => sample_tp_matrix_exact(columns_needed(d)?, need_seed(seed, "rational without --matrix")?)?.columns,
    };
    let m = lines_from_columns(d, &cols)?;
    let wanted = match (sigma, &d.sigma) {
        (Some(w), _) => Some(parse_sigma_word(d, w)?),
        (None, s) => s.clone(),
    };
    let fibers = if d.graph.is_tree() { tree_rational_fibers(d, &m)? } else { triangle_rational_fibers(d, &m)? };
    let sols: Vec<Value> = fibers
        .iter()
        .filter(|s| wanted.is_none() || s.component == wanted)
        .map(|s| {
            let exact_zero = incidence_values(d, &m, &s.lines).iter().all(|v| v.is_zero());
            json!({
                "component": s.component.as_ref().map(sigma_json),
                "lines": s.lines.iter().map(line_to_strings).collect::<Vec<_>>(),
                "residuals_zero": exact_zero,
            })
        })
        .collect();
    let mut out = json!({
        "schema": "landau.rational/1",
        "diagram": diagram_to_json(d),
        "matrix": matrix_to_json_exact(&cols),
        "count": sols.len(),
        "solutions": sols,
    });
    if !d.graph.is_tree() {
        let data: [ExternalTriangleData<ExactRational>; 3] =
            ExternalTriangleData::for_diagram(d, &m)?.try_into().expect("triangle has three vertices");
        let internal = Triangle::Internal([1, 2, 3]);
        let colors = match wanted.as_ref().and_then(|s| s.get(&internal)) {
            Some(c) => vec![*c],
            None => vec![Color::Black, Color::White],
        };
        let mut factors = serde_json::Map::new();
        for c in colors {
            let (comp, mixed) = tr_rat_factors(&data, c)?;
            let f = |v: &[crate::rational::TriangleFactor<ExactRational>]| {
                Value::Array(v.iter().map(|t| json!({ "label": t.label, "value": t.value.to_string() })).collect())
            };
            factors.insert(c.letter().to_string(), json!({ "component": f(&comp), "mixed": f(&mixed) }));
        }
        out["factors"] = Value::Object(factors);
    }
    Ok(out)
}

fn parse_sigma_word(d: &LandauDiagram, w: &str) -> Result<Bicoloring> {
    let tris = d.colorable_triangles();
    if w.chars().count() != tris.len() {
        return Err(LandauError::Dimension(format!("σ word {:?} for {} triangles", w, tris.len())));
    }
    tris.iter()
        .zip(w.chars())
        .map(|(t, c)| match c {
            'b' => Ok((*t, Color::Black)),
            'w' => Ok((*t, Color::White)),
            _ => Err(LandauError::Parse(format!("σ letters are b or w, got {:?}", c))),
        })
        .collect()
}

fn positroid_json(
    d: &LandauDiagram,
    sigma: Option<&str>,
    bases: usize,
    seed: Option<u64>,
    consistency: bool,
) -> Result<(Value, bool)> {
    let sigmas: Vec<Bicoloring> = match (sigma, &d.sigma) {
        (Some(w), _) => vec![parse_sigma_word(d, w)?],
        (None, Some(s)) => vec![s.clone()],
        (None, None) => all_bicolorings(&d.colorable_triangles()),
    };
    let triangles: Vec<String> = d.colorable_triangles().iter().map(Triangle::id).collect();
    let mut comps = vec![];
    let mut ok = true;
    let mut total = 0;
    for (k, s) in sigmas.iter().enumerate() {
        let (g, log) = build_plabic_logged(d, s)?;
        let pi = trip_permutation(&g)?;
        let orient = perfect_orientations(&g, bases.max(1), seed.unwrap_or(0).wrapping_add(k as u64))?;
        let mut c = json!({
            "sigma": sigma_json(s),
            "word": coloring_word(s),
            "n": g.n,
            "k": orient.k,
            "dimension": g.expected_dimension(),
            "permutation": pi.pi,
            "coloops": pi.coloops,
            "bases": orient.bases.iter().take(bases).collect::<Vec<_>>(),
            "bases_total": if orient.exhaustive { Some(orient.bases.len()) } else { None },
            "exchange_ok": orient.exchange_ok,
            "surgery": log,
            "graph": g,
        });
        ok &= orient.exchange_ok && pi.rank() == orient.k;
        if consistency {
            let r = consistency_report(d, s, seed.expect("checked by caller").wrapping_add(k as u64))?;
            ok &= r.dimension_matches && r.k == r.trip_rank;
            total += r.fiber_count;
            c["consistency"] = serde_json::to_value(&r).expect("report serializes");
        }
        comps.push(c);
    }
    let mut out = json!({
        "schema": "landau.positroid/1",
        "diagram": diagram_to_json(d),
        "triangles": triangles,
        "components": comps,
    });
    if consistency && sigmas.len() == 1 << d.colorable_triangles().len() {
        let expected = expected_count(d)?;
        ok &= total == expected;
        out["fiber_total"] = json!(total);
        out["expected_total"] = json!(expected);
    }
    out["consistent"] = json!(ok);
    Ok((out, ok))
}

// ---------------------------------------------------------------------------
// Plot data

/// One CSV row of per-trial plot data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotRow {
    pub trial: usize,
    pub seed: u64,
    /// Smallest distance between fiber points; empty for copositivity runs.
    pub margin: Option<f64>,
    /// Largest imaginary part (reality) or smallest factor value (copositivity).
    pub value: f64,
    /// All real (reality) or strictly positive (copositivity).
    pub real: bool,
}

pub fn reality_plot_rows(rep: &RealityReport) -> Vec<PlotRow> {
    let mut rows: Vec<PlotRow> = rep
        .records
        .iter()
        .map(|r| PlotRow {
            trial: r.trial,
            seed: r.seed,
            margin: Some(r.margin),
            value: r.max_imag,
            real: r.status == TrialStatus::AllReal,
        })
        .collect();
    rows.sort_by_key(|r| r.trial);
    rows
}

pub fn copositivity_plot_rows(rep: &CopositivityReport) -> Vec<PlotRow> {
    rep.per_trial_min
        .iter()
        .enumerate()
        .map(|(t, &v)| PlotRow { trial: t, seed: trial_seed(rep.seed, t), margin: None, value: v, real: v > 0.0 })
        .collect()
}

/// CSV with columns `trial,seed,margin,value,real`; always has the header row.
pub fn emit_plot_data(rows: &[PlotRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
    w.write_record(["trial", "seed", "margin", "value", "real"]).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
