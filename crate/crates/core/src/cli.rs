//! Command-line front end: report types, JSON and text rendering, CSV traces.
//!
//! Exit codes: 0 on success, 2 for input errors (bad flags, unparsable
//! expressions, point not on the variety), 3 when a solver or the tracer
//! gives up.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{self, Estimate, TraceSample};
use crate::parse::{parse_point, parse_poly};
use crate::plane::{self, Curvature, PlaneBranch};
use crate::ratpoly::{rational_to_f64, RatPoly, Rational};
use crate::singular::{self, ProjDirection};
use crate::space::{self, SpaceBranch, Torsion};
use crate::surface::{self, SurfaceBranch};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const ORACLE_H0: f64 = 1e-2;
const ORACLE_STEPS: usize = 12;

#[derive(Parser, Debug)]
#[command(
    name = "singcurv",
    version,
    about = "Tangents and branch-wise curvature at points of algebraic curves and surfaces",
    after_help = "Expressions use + - * ^ and parentheses over rational constants; \
                  juxtaposition multiplies (2x, x(y+1)). `^` binds to the atom only, \
                  so -x^2 is -(x^2)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Branches of a plane curve F(x, y) = 0
    Plane(SolveArgs),
    /// Tangent planes and curvatures of a surface F(x, y, z) = 0
    Surface(SolveArgs),
    /// Branches of a space curve F = G = 0
    Space(SolveArgs),
    /// Numeric samples of one branch as CSV
    Trace(TraceArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Second surface (space curves only)
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Comma-separated rationals, e.g. 0,1/2,-3
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long)]
    pub max_order: Option<u32>,
    #[arg(long)]
    pub json: bool,
    /// Append numeric tracing estimates for each real branch
    #[arg(long)]
    pub oracle: bool,
    /// Comma-separated variable names
    #[arg(long)]
    pub vars: Option<String>,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Comma-separated components of the traced direction
    #[arg(long, allow_hyphen_values = true)]
    pub direction: String,
    #[arg(long, default_value_t = 1e-2)]
    pub h0: f64,
    #[arg(long, default_value_t = 12)]
    pub steps: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long)]
    pub vars: Option<String>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub version: &'static str,
    pub kind: &'static str,
    pub f: Option<String>,
    pub g: Option<String>,
    pub point: Option<Vec<String>>,
    pub multiplicity: Option<Multiplicity>,
    pub branches: Vec<BranchRecord>,
    pub errors: Vec<ErrorRecord>,
}

/// A single multiplicity, or one per surface for space curves.
#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum Multiplicity {
    Single(u32),
    Pair([u32; 2]),
}

#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum BranchRecord {
    Plane(PlaneRecord),
    Surface(SurfaceRecord),
    Space(SpaceRecord),
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub code: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq)]
pub struct CurvatureRecord {
    pub finite: bool,
    pub value: Option<f64>,
}

impl From<Curvature> for CurvatureRecord {
    fn from(c: Curvature) -> Self {
        CurvatureRecord {
            finite: c.is_finite(),
            value: c.value(),
        }
    }
}

impl From<Estimate> for CurvatureRecord {
    fn from(e: Estimate) -> Self {
        CurvatureRecord {
            finite: !e.infinite,
            value: (!e.infinite).then_some(e.value),
        }
    }
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq)]
pub struct TorsionRecord {
    pub defined: bool,
    pub value: Option<f64>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct PlaneRecord {
    pub tangent: Vec<[f64; 2]>,
    pub tangent_is_real: bool,
    pub tangent_multiplicity: u32,
    pub multiplicity: u32,
    pub curvature: CurvatureRecord,
    pub contact_order: u32,
    pub deficit: i64,
    pub diagnostics: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<PlaneOracle>,
}

/// Curvatures of all traced branches leaving along the tangent.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct PlaneOracle {
    pub estimates: Vec<CurvatureRecord>,
    pub error: Option<ErrorRecord>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SurfaceRecord {
    pub normal: Vec<[f64; 2]>,
    pub normal_is_real: bool,
    pub multiplicity: u32,
    pub gauss: Option<f64>,
    pub mean_signed: Option<f64>,
    pub mean_abs: Option<f64>,
    pub contact_order: u32,
    pub diagnostics: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<SurfaceOracle>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SurfaceOracle {
    pub gauss: Option<f64>,
    pub mean_signed: Option<f64>,
    pub error: Option<ErrorRecord>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SpaceRecord {
    pub tangent: Vec<[f64; 2]>,
    pub tangent_is_real: bool,
    pub curvature: CurvatureRecord,
    pub torsion: TorsionRecord,
    pub multiplicity: u32,
    pub diagnostics: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<SpaceOracle>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SpaceOracle {
    pub curvature: Option<CurvatureRecord>,
    pub torsion: Option<f64>,
    pub error: Option<ErrorRecord>,
}

fn pairs(d: &ProjDirection) -> Vec<[f64; 2]> {
    d.components.iter().map(|z| [z.re, z.im]).collect()
}

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        2
    } else {
        3
    }
}

fn variables(vars: &Option<String>, default: &[&str]) -> Vec<String> {
    match vars {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
        None => default.iter().map(|s| s.to_string()).collect(),
    }
}

fn check_point(p: &[Rational], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: p.len(),
        });
    }
    Ok(())
}

struct Inputs {
    f: RatPoly,
    g: Option<RatPoly>,
    point: Vec<Rational>,
}

fn read_inputs(kind: &'static str, args: &SolveArgs, report: &mut Report) -> Result<Inputs> {
    let default: &[&str] = if kind == "plane" { &["x", "y"] } else { &["x", "y", "z"] };
    let vars = variables(&args.vars, default);
    if vars.len() != default.len() {
        return Err(Error::InvalidInput(format!(
            "{kind} needs {} variable names",
            default.len()
        )));
    }
    let f = parse_poly(&args.f, &vars)?;
    report.f = Some(f.to_string());
    let g = match (kind, &args.g) {
        ("space", Some(text)) => Some(parse_poly(text, &vars)?),
        ("space", None) => return Err(Error::InvalidInput("space needs --g".into())),
        (_, Some(_)) => return Err(Error::InvalidInput(format!("{kind} takes no --g"))),
        (_, None) => None,
    };
    report.g = g.as_ref().map(|g| g.to_string());
    let point = parse_point(&args.point)?;
    check_point(&point, vars.len())?;
    report.point = Some(point.iter().map(|r| r.to_string()).collect());
    Ok(Inputs { f, g, point })
}

/// Runs one analysis subcommand and returns the report with its exit code.
pub fn analyze(kind: &'static str, args: &SolveArgs) -> (Report, i32) {
    let mut report = Report {
        version: VERSION,
        kind,
        f: None,
        g: None,
        point: None,
        multiplicity: None,
        branches: Vec::new(),
        errors: Vec::new(),
    };
    let result = read_inputs(kind, args, &mut report).and_then(|inp| match kind {
        "plane" => plane_branches(&inp, args, &mut report),
        "surface" => surface_branches(&inp, args, &mut report),
        _ => space_branches(&inp, args, &mut report),
    });
    match result {
        Ok(()) => (report, 0),
        Err(e) => {
            report.errors.push(ErrorRecord::from(&e));
            (report, exit_code(&e))
        }
    }
}

fn plane_branches(inp: &Inputs, args: &SolveArgs, report: &mut Report) -> Result<()> {
    report.multiplicity = Some(Multiplicity::Single(singular::multiplicity(&inp.f, &inp.point)?));
    let branches = plane::plane_branch_curvatures(&inp.f, &inp.point, args.max_order)?;
    let mut traced: Vec<(ProjDirection, PlaneOracle)> = Vec::new();
    for b in &branches {
        let oracle = match (args.oracle, b.tangent.real_vector()) {
            (true, Some(d)) => {
                let known = traced.iter().find(|(t, _)| t == &b.tangent).map(|(_, o)| o.clone());
                let o = known.unwrap_or_else(|| plane_oracle(&inp.f, &inp.point, &d));
                traced.push((b.tangent.clone(), o.clone()));
                Some(o)
            }
            _ => None,
        };
        report.branches.push(BranchRecord::Plane(plane_record(b, oracle)));
    }
    Ok(())
}

fn plane_record(b: &PlaneBranch, oracle: Option<PlaneOracle>) -> PlaneRecord {
    PlaneRecord {
        tangent: pairs(&b.tangent),
        tangent_is_real: b.tangent.is_real,
        tangent_multiplicity: b.tangent.multiplicity,
        multiplicity: b.branch_multiplicity,
        curvature: b.curvature.into(),
        contact_order: b.contact_order,
        deficit: b.deficit,
        diagnostics: b.diagnostics.name(),
        oracle,
    }
}

/// Traces along `d`, or along `-d` when no branch leaves that way.
fn plane_oracle(f: &RatPoly, p: &[Rational], d: &[f64]) -> PlaneOracle {
    let back: Vec<f64> = d.iter().map(|x| -x).collect();
    let traces = oracle::trace_plane_branches(f, p, d, ORACLE_H0, ORACLE_STEPS)
        .or_else(|_| oracle::trace_plane_branches(f, p, &back, ORACLE_H0, ORACLE_STEPS));
    let estimates = traces.and_then(|ts| {
        ts.iter()
            .map(|t| oracle::estimate_curvature(t).map(CurvatureRecord::from))
            .collect::<Result<Vec<_>>>()
    });
    match estimates {
        Ok(estimates) => PlaneOracle { estimates, error: None },
        Err(e) => PlaneOracle {
            estimates: Vec::new(),
            error: Some(ErrorRecord::from(&e)),
        },
    }
}

fn surface_branches(inp: &Inputs, args: &SolveArgs, report: &mut Report) -> Result<()> {
    report.multiplicity = Some(Multiplicity::Single(singular::multiplicity(&inp.f, &inp.point)?));
    for b in surface::surface_branch_curvatures(&inp.f, &inp.point, args.max_order)? {
        let oracle = match (args.oracle, b.normal.real_vector()) {
            (true, Some(n)) if b.gauss.is_some() => Some(
                match oracle::surface_curvatures(&inp.f, &inp.point, &n, ORACLE_H0, ORACLE_STEPS) {
                    Ok((kg, km)) => SurfaceOracle {
                        gauss: Some(kg),
                        mean_signed: Some(km),
                        error: None,
                    },
                    Err(e) => SurfaceOracle {
                        gauss: None,
                        mean_signed: None,
                        error: Some(ErrorRecord::from(&e)),
                    },
                },
            ),
            _ => None,
        };
        report.branches.push(BranchRecord::Surface(surface_record(&b, oracle)));
    }
    Ok(())
}

fn surface_record(b: &SurfaceBranch, oracle: Option<SurfaceOracle>) -> SurfaceRecord {
    SurfaceRecord {
        normal: pairs(&b.normal),
        normal_is_real: b.normal.is_real,
        multiplicity: b.multiplicity,
        gauss: b.gauss,
        mean_signed: b.mean_signed,
        mean_abs: b.mean_abs,
        contact_order: b.contact_order,
        diagnostics: b.diagnostics.name(),
        oracle,
    }
}

fn space_branches(inp: &Inputs, args: &SolveArgs, report: &mut Report) -> Result<()> {
    let g = inp.g.as_ref().expect("space inputs carry G");
    let rf = singular::multiplicity(&inp.f, &inp.point)?;
    let rg = singular::multiplicity(g, &inp.point)?;
    report.multiplicity = Some(Multiplicity::Pair([rf, rg]));
    for b in space::space_branch_frenet(&inp.f, g, &inp.point, args.max_order)? {
        let oracle = match (args.oracle, b.tangent.real_vector()) {
            (true, Some(d)) if b.curvature.is_finite() => Some(space_oracle(&inp.f, g, &inp.point, &d)),
            _ => None,
        };
        report.branches.push(BranchRecord::Space(space_record(&b, oracle)));
    }
    Ok(())
}

fn space_record(b: &SpaceBranch, oracle: Option<SpaceOracle>) -> SpaceRecord {
    SpaceRecord {
        tangent: pairs(&b.tangent),
        tangent_is_real: b.tangent.is_real,
        curvature: b.curvature.into(),
        torsion: TorsionRecord {
            defined: matches!(b.torsion, Torsion::Value(_)),
            value: b.torsion.value(),
        },
        multiplicity: b.branch_multiplicity,
        diagnostics: b.diagnostics.name(),
        oracle,
    }
}

fn space_oracle(f: &RatPoly, g: &RatPoly, p: &[Rational], d: &[f64]) -> SpaceOracle {
    let back: Vec<f64> = d.iter().map(|x| -x).collect();
    let est = oracle::trace_space_branch(f, g, p, d, ORACLE_H0, ORACLE_STEPS)
        .or_else(|_| oracle::trace_space_branch(f, g, p, &back, ORACLE_H0, ORACLE_STEPS))
        .and_then(|s| oracle::estimate_frenet(&s));
    match est {
        Ok((k, tau)) => SpaceOracle {
            curvature: Some(k.into()),
            torsion: Some(tau),
            error: None,
        },
        Err(e) => SpaceOracle {
            curvature: None,
            torsion: None,
            error: Some(ErrorRecord::from(&e)),
        },
    }
}

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn fmt_vec(v: &[[f64; 2]]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|[re, im]| {
            if *im == 0.0 {
                fmt_num(*re)
            } else if *re == 0.0 {
                format!("{}i", fmt_num(*im))
            } else {
                let sign = if *im < 0.0 { '-' } else { '+' };
                format!("{}{sign}{}i", fmt_num(*re), fmt_num(im.abs()))
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

fn fmt_curv(c: &CurvatureRecord) -> String {
    match c.value {
        Some(v) if c.finite => fmt_num(v),
        _ => "inf".into(),
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("-".into(), fmt_num)
}

/// Plain-text rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let mut line = |t: String| {
        s.push_str(&t);
        s.push('\n');
    };
    if let Some(f) = &r.f {
        line(format!("F = {f}"));
    }
    if let Some(g) = &r.g {
        line(format!("G = {g}"));
    }
    if let Some(p) = &r.point {
        line(format!("P = ({})", p.join(", ")));
    }
    match &r.multiplicity {
        Some(Multiplicity::Single(m)) => line(format!("multiplicity {m}")),
        Some(Multiplicity::Pair([a, b])) => line(format!("multiplicities {a}, {b}")),
        None => {}
    }
    for (i, b) in r.branches.iter().enumerate() {
        match b {
            BranchRecord::Plane(b) => {
                line(format!(
                    "branch {}: tangent {} (x{}) mult {} curvature {} [{}]",
                    i + 1,
                    fmt_vec(&b.tangent),
                    b.tangent_multiplicity,
                    b.multiplicity,
                    fmt_curv(&b.curvature),
                    b.diagnostics
                ));
                if let Some(o) = &b.oracle {
                    let ks: Vec<String> = o.estimates.iter().map(fmt_curv).collect();
                    match &o.error {
                        Some(e) => line(format!("  oracle: {}", e.code)),
                        None => line(format!("  oracle: curvature {}", ks.join(", "))),
                    }
                }
            }
            BranchRecord::Surface(b) => {
                line(format!(
                    "branch {}: normal {} (x{}) K_G {} K_M {} |K_M| {} [{}]",
                    i + 1,
                    fmt_vec(&b.normal),
                    b.multiplicity,
                    fmt_opt(b.gauss),
                    fmt_opt(b.mean_signed),
                    fmt_opt(b.mean_abs),
                    b.diagnostics
                ));
                if let Some(o) = &b.oracle {
                    match &o.error {
                        Some(e) => line(format!("  oracle: {}", e.code)),
                        None => line(format!(
                            "  oracle: K_G {} K_M {}",
                            fmt_opt(o.gauss),
                            fmt_opt(o.mean_signed)
                        )),
                    }
                }
            }
            BranchRecord::Space(b) => {
                line(format!(
                    "branch {}: tangent {} mult {} curvature {} torsion {} [{}]",
                    i + 1,
                    fmt_vec(&b.tangent),
                    b.multiplicity,
                    fmt_curv(&b.curvature),
                    fmt_opt(b.torsion.value),
                    b.diagnostics
                ));
                if let Some(o) = &b.oracle {
                    match &o.error {
                        Some(e) => line(format!("  oracle: {}", e.code)),
                        None => line(format!(
                            "  oracle: curvature {} torsion {}",
                            o.curvature.as_ref().map_or("-".into(), fmt_curv),
                            fmt_opt(o.torsion)
                        )),
                    }
                }
            }
        }
    }
    for e in &r.errors {
        line(format!("error: {}: {}", e.code, e.message));
    }
    s
}

/// Samples for the `trace` subcommand.
pub fn trace(args: &TraceArgs) -> Result<Vec<TraceSample>> {
    let default: &[&str] = if args.g.is_some() { &["x", "y", "z"] } else { &["x", "y"] };
    let vars = variables(&args.vars, default);
    let f = parse_poly(&args.f, &vars)?;
    let point = parse_point(&args.point)?;
    check_point(&point, vars.len())?;
    let direction: Vec<f64> = parse_point(&args.direction)?.iter().map(rational_to_f64).collect();
    check_point(&vec![Rational::default(); direction.len()], vars.len())?;
    match &args.g {
        Some(g) => {
            let g = parse_poly(g, &vars)?;
            oracle::trace_space_branch(&f, &g, &point, &direction, args.h0, args.steps)
        }
        None => oracle::trace_plane_branch(&f, &point, &direction, args.h0, args.steps),
    }
}

/// CSV with header `idx,h,x,y[,z],residual`.
pub fn render_csv(samples: &[TraceSample], dim: usize) -> String {
    let coords = ["x", "y", "z"];
    let mut s = format!("idx,h,{},residual\n", coords[..dim].join(","));
    for (i, t) in samples.iter().enumerate() {
        let pts: Vec<String> = t.point.iter().map(|x| format!("{x:e}")).collect();
        s.push_str(&format!("{i},{:e},{},{:e}\n", t.h, pts.join(","), t.residual));
    }
    s
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = out.write_all(e.render().to_string().as_bytes());
            return 0;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: bad arguments");
            let _ = writeln!(err, "{first}");
            return 2;
        }
    };
    match cli.command {
        Command::Plane(a) => emit(analyze("plane", &a), a.json, out, err),
        Command::Surface(a) => emit(analyze("surface", &a), a.json, out, err),
        Command::Space(a) => emit(analyze("space", &a), a.json, out, err),
        Command::Trace(a) => match trace(&a) {
            Ok(samples) => {
                let dim = samples.first().map_or(2, |s| s.point.len());
                let csv = render_csv(&samples, dim);
                match &a.out {
                    Some(path) => match std::fs::write(path, csv) {
                        Ok(()) => 0,
                        Err(e) => {
                            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                            2
                        }
                    },
                    None => {
                        let _ = out.write_all(csv.as_bytes());
                        0
                    }
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", e.code());
                exit_code(&e)
            }
        },
    }
}

fn emit((report, code): (Report, i32), json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        let _ = writeln!(out, "{text}");
    } else if code == 0 {
        let _ = out.write_all(render_text(&report).as_bytes());
    }
    if code != 0 {
        if let Some(e) = report.errors.first() {
            let _ = writeln!(err, "error: {}: {}", e.code, e.message);
        }
    }
    code
}
