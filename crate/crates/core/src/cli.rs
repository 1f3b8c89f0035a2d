//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//!
//! * `0` success
//! * `1` usage error
//! * `2` model or computation error
//! * `3` some fixed point could not be classified

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::expr::{canonicalize_all, parse_rational, Binding, Expr, Value};
use crate::kcc::{
    higher_invariants, kcc_deviation, kcc_invariants, matrix_json, matrix_text, tensor3_json,
    tensor3_text, tensor4_json, tensor4_text, Matrix, Model, Tensor3, Tensor4,
};
use crate::models;
use crate::numerics::{
    focusing_profile, integrate, integrate_deviation, matrix_exp_solution, probe_times,
    DEFAULT_T_PROBE,
};
use crate::stability::{
    airfoil_region_conditions, assemble_semialgebraic_with_budget, count_stable, find_fixed_points,
    RegionReport, SearchBox, StabilityCount, Verdict, DEFAULT_MONOMIAL_BUDGET, DEFAULT_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MODEL: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "kcc", version, about = "Jacobi stability of second-order ODE systems via KCC invariants")]
pub struct Cli {
    /// Built-in model name (wound_strings, airfoil, tractor_seat) or path to a model file.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Parameter values, `name=value` separated by commas; rationals such as 2017/256 are exact.
    #[arg(long, global = true, allow_hyphen_values = true, action = clap::ArgAction::Append)]
    pub params: Vec<String>,
    /// Output file (output directory for `simulate`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Absolute tolerance for sign decisions on the normalized tensor.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Connections, deviation curvature, first invariant and higher tensors.
    Invariants {
        /// Print canonical rational forms instead of the raw trees.
        #[arg(long)]
        canonical: bool,
    },
    /// Deviation matrices A21, A22 and the deviation equations.
    Deviation {
        /// Evaluate at this position (velocities zero), e.g. `-2,1`.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Fixed points found by Newton from a seed grid.
    FixedPoints(SearchArgs),
    /// Routh–Hurwitz verdict at every fixed point; prints k last.
    Classify(SearchArgs),
    /// The polynomial equations, inequations and sign conditions.
    Conditions {
        /// Largest admissible monomial count of any polynomial.
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_BUDGET)]
        budget: usize,
    },
    /// Write trajectory.csv, deviation.csv and focusing.csv.
    Simulate(SimArgs),
    /// Focusing diagnostic at a fixed point.
    Focusing {
        /// Base point, e.g. `-2,1`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Initial deviation velocity W.
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value_t = DEFAULT_T_PROBE)]
        t_probe: f64,
    },
    /// Airfoil parameter-plane conditions at (Minf, V).
    Region,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// `lo:hi` for every axis, or one `lo:hi` per axis separated by commas.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub search_box: Option<String>,
    /// Seeds per axis, endpoints included.
    #[arg(long, default_value_t = 9)]
    pub seeds: usize,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Initial position; defaults to the base point.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Initial velocity; defaults to zero.
    #[arg(long, allow_hyphen_values = true)]
    pub y0: Option<String>,
    /// Fixed point the deviation equations are frozen at.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    /// Initial deviation velocity W.
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
    pub dt: f64,
    #[arg(long, default_value_t = DEFAULT_T_PROBE)]
    pub t_probe: f64,
}

/// Failure of a subcommand, tagged with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Model(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Model(Error::Io(e))
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `name=value` pairs; rational literals stay exact.
pub fn parse_params(items: &[String]) -> std::result::Result<Binding, String> {
    let mut b = Binding::new();
    for item in items.iter().flat_map(|s| s.split(',')).map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected name=value, got `{item}`"))?;
        let (k, v) = (k.trim(), v.trim());
        let value = match parse_rational(v) {
            Some(r) => Value::Exact(r),
            None => Value::Float(v.parse::<f64>().map_err(|_| format!("bad value `{v}` for `{k}`"))?),
        };
        b.set(k, value);
    }
    Ok(b)
}

/// Comma-separated floats.
pub fn parse_vector(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            parse_rational(t)
                .and_then(|r| num_traits::ToPrimitive::to_f64(&r))
                .or_else(|| t.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number `{t}`"))
        })
        .collect()
}

/// `lo:hi` for all axes or a comma-separated list of per-axis ranges.
pub fn parse_box(s: &str, n: usize) -> std::result::Result<SearchBox, String> {
    let ranges: Vec<(f64, f64)> = s
        .split(',')
        .map(|r| {
            let (lo, hi) = r.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{r}`"))?;
            let lo = parse_vector(lo)?;
            let hi = parse_vector(hi)?;
            Ok((lo[0], hi[0]))
        })
        .collect::<std::result::Result<_, String>>()?;
    let (lo, hi): (Vec<f64>, Vec<f64>) = match ranges.len() {
        1 => (vec![ranges[0].0; n], vec![ranges[0].1; n]),
        k if k == n => ranges.into_iter().unzip(),
        k => return Err(format!("box has {k} ranges for a {n}-dimensional model")),
    };
    SearchBox::new(lo, hi).map_err(|e| e.to_string())
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn model(&self) -> std::result::Result<Model, Failure> {
        let spec = self.cli.model.as_deref().ok_or_else(|| usage("--model is required"))?;
        Ok(models::resolve(spec)?)
    }

    fn params(&self) -> std::result::Result<Binding, Failure> {
        parse_params(&self.cli.params).map_err(usage)
    }

    fn bound(&self, model: &Model) -> std::result::Result<Binding, Failure> {
        Ok(model.bind_params(&self.params()?)?)
    }

    /// Writes `body` to `--out` when given, else to stdout.
    fn emit(&mut self, body: &str) -> std::result::Result<(), Failure> {
        match &self.cli.out {
            Some(p) => fs::write(p, body)?,
            None => self.out.write_all(body.as_bytes())?,
        }
        Ok(())
    }

    fn say(&mut self, line: &str) -> std::result::Result<(), Failure> {
        writeln!(self.out, "{line}")?;
        Ok(())
    }
}

fn vector_arg(s: &str, n: usize, what: &str) -> std::result::Result<Vec<f64>, Failure> {
    let v = parse_vector(s).map_err(usage)?;
    if v.len() != n {
        return Err(usage(format!("{what} needs {n} components, got {}", v.len())));
    }
    Ok(v)
}

fn canonical_matrix(m: &Matrix, model: &Model) -> crate::error::Result<Matrix> {
    let c = canonicalize_all(&m.concat(), &model.var_order())?;
    let w = m.first().map_or(0, Vec::len).max(1);
    Ok(c.chunks(w).map(|r| r.iter().map(|e| e.to_expr()).collect()).collect())
}

fn canonical_t3(t: &Tensor3, model: &Model) -> crate::error::Result<Tensor3> {
    t.iter().map(|m| canonical_matrix(m, model)).collect()
}

fn canonical_t4(t: &Tensor4, model: &Model) -> crate::error::Result<Tensor4> {
    t.iter().map(|m| canonical_t3(m, model)).collect()
}

fn cmd_invariants(ctx: &mut Ctx, canonical: bool) -> CmdResult {
    let model = ctx.model()?;
    let inv = kcc_invariants(&model);
    let hi = higher_invariants(&model, &inv);
    let dev = kcc_deviation(&model);
    let eps: Matrix = vec![inv.epsilon.clone()];
    let (mut n, mut b, mut p, mut e, mut a21, mut a22) =
        (inv.n.clone(), inv.berwald.clone(), inv.p.clone(), eps, dev.a21.clone(), dev.a22.clone());
    let (mut tor, mut rie, mut dou) = (hi.torsion, hi.riemann, hi.douglas);
    if canonical {
        n = canonical_matrix(&n, &model)?;
        b = canonical_t3(&b, &model)?;
        p = canonical_matrix(&p, &model)?;
        e = canonical_matrix(&e, &model)?;
        a21 = canonical_matrix(&a21, &model)?;
        a22 = canonical_matrix(&a22, &model)?;
        tor = canonical_t3(&tor, &model)?;
        rie = canonical_t4(&rie, &model)?;
        dou = canonical_t4(&dou, &model)?;
    }
    let epsilon: Vec<Expr> = e.concat();
    let body = match ctx.cli.format {
        Format::Json => {
            let j = json!({
                "model": model.name,
                "N": matrix_json(&n),
                "berwald": tensor3_json(&b),
                "P": matrix_json(&p),
                "epsilon": epsilon.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "A21": matrix_json(&a21),
                "A22": matrix_json(&a22),
                "torsion": tensor3_json(&tor),
                "riemann": tensor4_json(&rie),
                "douglas": tensor4_json(&dou),
            });
            serde_json::to_string_pretty(&j).expect("json") + "\n"
        }
        Format::Text | Format::Csv => {
            let mut sections = vec![
                ("nonlinear connection", matrix_text("N", &n)),
                ("Berwald connection", tensor3_text("G", &b)),
                ("deviation curvature tensor", matrix_text("P", &p)),
                (
                    "first invariant",
                    epsilon.iter().enumerate().map(|(i, x)| format!("eps[{}] = {x}\n", i + 1)).collect(),
                ),
                ("deviation matrix A21", matrix_text("A21", &a21)),
                ("deviation matrix A22", matrix_text("A22", &a22)),
                ("torsion", tensor3_text("T", &tor)),
                ("Riemann-Christoffel curvature", tensor4_text("R", &rie)),
                ("Douglas tensor", tensor4_text("D", &dou)),
            ];
            if ctx.cli.format == Format::Csv {
                let mut s = String::from("entry,expr\n");
                for (_, text) in sections.drain(..) {
                    for line in text.lines() {
                        let (k, v) = line.split_once(" = ").expect("entry line");
                        s.push_str(&format!("{k},\"{v}\"\n"));
                    }
                }
                s
            } else {
                let mut s = format!("# model {}\n", model.name);
                for (title, text) in sections {
                    s.push_str(&format!("\n# {title}\n{text}"));
                }
                s
            }
        }
    };
    ctx.emit(&body)?;
    Ok(EXIT_OK)
}

fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn cmd_deviation(ctx: &mut Ctx, at: Option<&str>) -> CmdResult {
    let model = ctx.model()?;
    let dev = kcc_deviation(&model);
    let numeric = match at {
        Some(s) => {
            let x = vector_arg(s, model.dim(), "--at")?;
            let b = ctx.bound(&model)?;
            Some((x.clone(), dev.at_fixed_point(&b, &x)?))
        }
        None => None,
    };
    let body = match ctx.cli.format {
        Format::Json => {
            let mut j = json!({
                "model": model.name,
                "A21": matrix_json(&dev.a21),
                "A22": matrix_json(&dev.a22),
                "equations": dev.residuals(),
            });
            if let Some((x, nd)) = &numeric {
                j["at"] = json!(x);
                j["A21_value"] = json!(matrix_rows(&nd.a21));
                j["A22_value"] = json!(matrix_rows(&nd.a22));
            }
            serde_json::to_string_pretty(&j).expect("json") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("block,i,j,value\n");
            match &numeric {
                Some((_, nd)) => {
                    for (name, m) in [("A21", &nd.a21), ("A22", &nd.a22)] {
                        for i in 0..m.nrows() {
                            for j in 0..m.ncols() {
                                s.push_str(&format!("{name},{},{},{}\n", i + 1, j + 1, crate::numerics::format_f64(m[(i, j)])));
                            }
                        }
                    }
                }
                None => {
                    for (name, m) in [("A21", &dev.a21), ("A22", &dev.a22)] {
                        for (i, row) in m.iter().enumerate() {
                            for (j, e) in row.iter().enumerate() {
                                s.push_str(&format!("{name},{},{},\"{e}\"\n", i + 1, j + 1));
                            }
                        }
                    }
                }
            }
            s
        }
        Format::Text => {
            let mut s = format!("# model {}\n\n# A21\n{}\n# A22\n{}\n# deviation equations\n", model.name, matrix_text("A21", &dev.a21), matrix_text("A22", &dev.a22));
            for r in dev.residuals() {
                s.push_str(&r);
                s.push('\n');
            }
            if let Some((x, nd)) = &numeric {
                s.push_str(&format!("\n# at x = {x:?}, y = 0\n"));
                for (name, m) in [("A21", &nd.a21), ("A22", &nd.a22)] {
                    for i in 0..m.nrows() {
                        for j in 0..m.ncols() {
                            s.push_str(&format!("{name}[{}][{}] = {}\n", i + 1, j + 1, m[(i, j)] + 0.0));
                        }
                    }
                }
            }
            s
        }
    };
    ctx.emit(&body)?;
    Ok(EXIT_OK)
}

fn search_box(args: &SearchArgs, n: usize) -> std::result::Result<SearchBox, Failure> {
    if args.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    match &args.search_box {
        Some(s) => parse_box(s, n).map_err(usage),
        None => Ok(SearchBox::cube(n, -10.0, 10.0)),
    }
}

fn cmd_fixed_points(ctx: &mut Ctx, args: &SearchArgs) -> CmdResult {
    let model = ctx.model()?;
    let bx = search_box(args, model.dim())?;
    let params = ctx.params()?;
    let fps = find_fixed_points(&model, &params, &bx, args.seeds)?;
    let body = match ctx.cli.format {
        Format::Json => serde_json::to_string_pretty(&fps).expect("json") + "\n",
        Format::Csv => {
            let mut s = model.vars.join(",") + ",residual,backward_error,denom_margin\n";
            for fp in &fps {
                let xs: Vec<String> = fp.x.iter().map(|v| crate::numerics::format_f64(*v)).collect();
                s.push_str(&format!("{},{:e},{:e},{:e}\n", xs.join(","), fp.residual, fp.backward_error, fp.denom_margin));
            }
            s
        }
        Format::Text => {
            let mut s = format!("# {} fixed point(s) of {}\n", fps.len(), model.name);
            for fp in &fps {
                s.push_str(&format!("x = {:?}  residual = {:e}  denom_margin = {:e}\n", fp.x, fp.residual, fp.denom_margin));
            }
            s
        }
    };
    ctx.emit(&body)?;
    Ok(EXIT_OK)
}

fn is_airfoil(model: &Model) -> bool {
    model.name == "airfoil" && model.params == ["Minf", "V"]
}

fn region_of(model: &Model, bound: &Binding) -> crate::error::Result<Option<RegionReport>> {
    if !is_airfoil(model) {
        return Ok(None);
    }
    let m = bound.get("Minf").expect("bound").clone();
    let v = bound.get("V").expect("bound").clone();
    airfoil_region_conditions(m, v).map(Some)
}

fn classify_csv(model: &Model, count: &StabilityCount) -> String {
    let n = model.dim();
    let mut header: Vec<String> = model.vars.clone();
    header.extend((1..=n).map(|i| format!("a{i}")));
    header.extend((1..=n).map(|i| format!("delta{i}")));
    header.push("verdict".into());
    let mut s = header.join(",") + "\n";
    for r in &count.reports {
        let cells: Vec<String> = r
            .fixed_point
            .x
            .iter()
            .chain(&r.char_poly)
            .chain(&r.hurwitz)
            .map(|v| crate::numerics::format_f64(*v))
            .collect();
        s.push_str(&format!("{},{}\n", cells.join(","), r.verdict));
    }
    s
}

fn cmd_classify(ctx: &mut Ctx, args: &SearchArgs) -> CmdResult {
    let model = ctx.model()?;
    let bx = search_box(args, model.dim())?;
    let params = ctx.params()?;
    let bound = model.bind_params(&params)?;
    let count = count_stable(&model, &params, &bx, args.seeds, ctx.cli.tol)?;
    let region = region_of(&model, &bound)?;
    match ctx.cli.format {
        Format::Json => {
            let mut j = serde_json::to_value(&count).expect("json");
            if let Some(r) = &region {
                j["region"] = serde_json::to_value(r).expect("json");
            }
            ctx.emit(&(serde_json::to_string_pretty(&j).expect("json") + "\n"))?;
        }
        Format::Csv => {
            let csv = classify_csv(&model, &count);
            ctx.emit(&csv)?;
            if let Some(r) = &region {
                ctx.say(&format!("region={}", r.label.map_or("none".into(), |l| l.to_string())))?;
            }
            ctx.say(&format!("k={}", count.k))?;
        }
        Format::Text => {
            let mut s = format!("# model {}\n", model.name);
            let ps: Vec<String> = bound.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!("# params {}\n", ps.join(", ")));
            for (i, r) in count.reports.iter().enumerate() {
                s.push_str(&format!(
                    "{:>3}  x = {:?}  a = {:?}  Delta = {:?}  {}\n",
                    i + 1,
                    r.fixed_point.x,
                    r.char_poly,
                    r.hurwitz,
                    r.verdict
                ));
                for f in &r.margin_flags {
                    s.push_str(&format!("     warning: {f}\n"));
                }
            }
            if let Some(r) = &region {
                let sat: Vec<String> = r.satisfied.iter().map(|c| c.to_string()).collect();
                s.push_str(&format!(
                    "region: {} (satisfied: {})\n",
                    r.label.map_or("none".into(), |l| l.to_string()),
                    if sat.is_empty() { "none".into() } else { sat.join(" ") }
                ));
            }
            ctx.emit(&s)?;
            ctx.say(&format!("k={}", count.k))?;
        }
    }
    if count.reports.iter().any(|r| r.verdict == Verdict::Indeterminate) {
        return Ok(EXIT_INDETERMINATE);
    }
    Ok(EXIT_OK)
}

fn cmd_conditions(ctx: &mut Ctx, budget: usize) -> CmdResult {
    let model = ctx.model()?;
    let sys = assemble_semialgebraic_with_budget(&model, budget)?;
    let strings = |ps: Vec<Expr>| ps.iter().map(|e| e.to_string()).collect::<Vec<_>>();
    let body = match ctx.cli.format {
        Format::Json => {
            let pneq = sys.parameter_inequations.iter().map(|p| p.to_expr(&sys.variables)).collect();
            let j = json!({
                "variables": sys.variables,
                "EQ": strings(sys.equation_exprs()),
                "NEQ": strings(sys.inequation_exprs()),
                "GT": strings(sys.inequality_exprs()),
                "PNEQ": strings(pneq),
            });
            serde_json::to_string_pretty(&j).expect("json") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("tag,polynomial\n");
            for line in sys.lines() {
                let (t, p) = line.split_once(' ').expect("tagged line");
                s.push_str(&format!("{t},\"{p}\"\n"));
            }
            s
        }
        Format::Text => sys.to_string(),
    };
    ctx.emit(&body)?;
    Ok(EXIT_OK)
}

fn check_time_args(t_end: f64, dt: f64) -> std::result::Result<(), Failure> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(usage(format!("--dt must be positive, got {dt}")));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(usage(format!("--t-end must be positive, got {t_end}")));
    }
    Ok(())
}

fn nonzero_w(w: &[f64]) -> std::result::Result<(), Failure> {
    if w.iter().all(|v| *v == 0.0) {
        return Err(usage("--w must be nonzero"));
    }
    Ok(())
}

fn cmd_simulate(ctx: &mut Ctx, a: &SimArgs) -> CmdResult {
    check_time_args(a.t_end, a.dt)?;
    if a.t_probe.is_nan() || a.t_probe <= 0.0 {
        return Err(usage("--t-probe must be positive"));
    }
    let model = ctx.model()?;
    let n = model.dim();
    let at = vector_arg(&a.at, n, "--at")?;
    let w = vector_arg(&a.w, n, "--w")?;
    nonzero_w(&w)?;
    let x0 = match &a.x0 {
        Some(s) => vector_arg(s, n, "--x0")?,
        None => at.clone(),
    };
    let y0 = match &a.y0 {
        Some(s) => vector_arg(s, n, "--y0")?,
        None => vec![0.0; n],
    };
    let params = ctx.params()?;
    let traj = integrate(&model, &params, &x0, &y0, a.t_end, a.dt)?;
    let dev = integrate_deviation(&model, &params, &at, &w, a.t_end, a.dt)?;
    let prof = focusing_profile(&dev, &w, a.t_probe)?;
    let dir = ctx.cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let write = |name: &str, body: String| -> std::io::Result<PathBuf> {
        let p = Path::new(&dir).join(name);
        fs::write(&p, body)?;
        Ok(p)
    };
    let files = [
        write("trajectory.csv", traj.to_csv())?,
        write("deviation.csv", dev.to_csv())?,
        write("focusing.csv", prof.to_csv())?,
    ];
    match ctx.cli.format {
        Format::Json => {
            let j = json!({
                "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                "samples": traj.len(),
                "focusing": prof.verdict,
            });
            ctx.say(&serde_json::to_string_pretty(&j).expect("json"))?;
        }
        _ => {
            for p in &files {
                ctx.say(&format!("wrote {}", p.display()))?;
            }
            ctx.say(&format!("focusing: {}", prof.verdict))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_focusing(ctx: &mut Ctx, at: &str, w: &str, t_probe: f64) -> CmdResult {
    if t_probe.is_nan() || t_probe <= 0.0 {
        return Err(usage("--t-probe must be positive"));
    }
    let model = ctx.model()?;
    let n = model.dim();
    let x = vector_arg(at, n, "--at")?;
    let w = vector_arg(w, n, "--w")?;
    nonzero_w(&w)?;
    let bound = ctx.bound(&model)?;
    let dev = kcc_deviation(&model).at_fixed_point(&bound, &x)?;
    let tr = matrix_exp_solution(&dev, &w, &probe_times(t_probe))?;
    let prof = focusing_profile(&tr, &w, t_probe)?;
    match ctx.cli.format {
        Format::Json => ctx.emit(&(serde_json::to_string_pretty(&prof).expect("json") + "\n"))?,
        Format::Csv => ctx.emit(&prof.to_csv())?,
        Format::Text => {
            let worst = prof
                .norm_sq
                .iter()
                .zip(&prof.t_sq)
                .skip(1)
                .map(|(a, b)| a - b)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)));
            ctx.emit(&format!(
                "# focusing at x = {x:?}, W = {w:?}, window (0, {t_probe}]\nnorm_sq - t_sq ranges over [{:e}, {:e}]\nverdict: {}\n",
                worst.0, worst.1, prof.verdict
            ))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_region(ctx: &mut Ctx) -> CmdResult {
    let model = match &ctx.cli.model {
        Some(_) => ctx.model()?,
        None => models::builtin("airfoil")?,
    };
    if !is_airfoil(&model) {
        return Err(Failure::Model(Error::InvalidArgument(format!(
            "region conditions apply to the airfoil model, not `{}`",
            model.name
        ))));
    }
    let bound = ctx.bound(&model)?;
    let r = region_of(&model, &bound)?.expect("airfoil");
    let label = r.label.map_or("none".to_string(), |l| l.to_string());
    match ctx.cli.format {
        Format::Json => ctx.emit(&(serde_json::to_string_pretty(&r).expect("json") + "\n"))?,
        Format::Csv => {
            let mut s = String::from("R1,R2,R3,R4,R5,R6,generic,label,k\n");
            let rs: Vec<String> = r.r.iter().map(|v| crate::numerics::format_f64(*v)).collect();
            s.push_str(&format!(
                "{},{},{},{}\n",
                rs.join(","),
                r.generic,
                label,
                r.predicted_k().map_or("".into(), |k| k.to_string())
            ));
            ctx.emit(&s)?;
        }
        Format::Text => {
            let mut s = String::new();
            for (i, (v, sg)) in r.r.iter().zip(&r.signs).enumerate() {
                s.push_str(&format!("R{} = {v:e} (sign {sg:+})\n", i + 1));
            }
            let sat: Vec<String> = r.satisfied.iter().map(|c| c.to_string()).collect();
            s.push_str(&format!("generic: {}\n", r.generic));
            s.push_str(&format!("satisfied: {}\n", if sat.is_empty() { "none".into() } else { sat.join(" ") }));
            s.push_str(&format!("region: {label}\n"));
            if let Some(k) = r.predicted_k() {
                s.push_str(&format!("predicted k={k}\n"));
            }
            ctx.emit(&s)?;
        }
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let mut ctx = Ctx { cli, out };
    match &cli.command {
        Command::Invariants { canonical } => cmd_invariants(&mut ctx, *canonical),
        Command::Deviation { at } => cmd_deviation(&mut ctx, at.as_deref()),
        Command::FixedPoints(a) => cmd_fixed_points(&mut ctx, a),
        Command::Classify(a) => cmd_classify(&mut ctx, a),
        Command::Conditions { budget } => cmd_conditions(&mut ctx, *budget),
        Command::Simulate(a) => cmd_simulate(&mut ctx, a),
        Command::Focusing { at, w, t_probe } => cmd_focusing(&mut ctx, at, w, *t_probe),
        Command::Region => cmd_region(&mut ctx),
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Model(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_MODEL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_keep_rationals_exact() {
        let b = parse_params(&["Minf=2017/256, V=83/4".into(), "x=1e-3".into()]).unwrap();
        assert_eq!(b.get("Minf").unwrap().to_string(), "2017/256");
        assert!(matches!(b.get("x").unwrap(), Value::Exact(_)));
        assert!(parse_params(&["a".into()]).is_err());
    }

    #[test]
    fn boxes() {
        let b = parse_box("-4:4", 2).unwrap();
        assert_eq!(b, SearchBox::cube(2, -4.0, 4.0));
        let b = parse_box("-1:1,0:2", 2).unwrap();
        assert_eq!(b.hi, vec![1.0, 2.0]);
        assert!(parse_box("-1:1,0:2", 3).is_err());
        assert!(parse_box("1:-1", 1).is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("-2, 1/2,1e-5").unwrap(), vec![-2.0, 0.5, 1e-5]);
        assert!(parse_vector("x").is_err());
    }
}
