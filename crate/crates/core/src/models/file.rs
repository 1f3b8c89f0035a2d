//! The line-oriented `.kcc` model format.
//!
//! ```text
//! # comment
//! model <name>
//! mode kcc | linear-accel
//! params p1[=rational] p2 ...
//! vars x1 x2 ...
//! G1 = <expr>                 (kcc mode, one per variable)
//! M[i][j] = <expr>            (linear-accel mode, missing entries are 0)
//! f[i] = <expr>               (linear-accel mode, M·ẍ + f = 0)
//! ```
//!
//! A line ending in `\` continues on the next line. Velocity symbols
//! `y1..yn` are declared implicitly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::expr::{parse, parse_rational, Binding, Expr, ParseError, Rational};
use crate::kcc::{to_standard_form, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Kcc,
    LinearAccel,
}

/// Parsed contents of a model file, before conversion to standard form.
#[derive(Clone, Debug)]
pub struct ModelFile {
    pub name: String,
    pub mode: Mode,
    pub params: Vec<(String, Option<Rational>)>,
    pub vars: Vec<String>,
    /// `G^i` in kcc mode.
    pub g: Vec<Expr>,
    /// Sparse mass matrix in linear-accel mode, 0-based keys.
    pub mass: BTreeMap<(usize, usize), Expr>,
    pub force: BTreeMap<usize, Expr>,
}

struct Stmt {
    line: usize,
    text: String,
}

fn logical_lines(src: &str) -> Vec<Stmt> {
    let mut out: Vec<Stmt> = Vec::new();
    let mut pending: Option<Stmt> = None;
    for (idx, raw) in src.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let (body, cont) = match body.trim_end().strip_suffix('\\') {
            Some(b) => (b.to_string(), true),
            None => (body.to_string(), false),
        };
        match pending.as_mut() {
            Some(p) => {
                p.text.push('\n');
                p.text.push_str(&body);
            }
            None => pending = Some(Stmt { line: idx + 1, text: body }),
        }
        if !cont {
            let s = pending.take().unwrap();
            if !s.text.trim().is_empty() {
                out.push(s);
            }
        }
    }
    if let Some(s) = pending {
        if !s.text.trim().is_empty() {
            out.push(s);
        }
    }
    out
}

fn model_err(line: usize, message: impl Into<String>) -> Error {
    Error::ModelFile { line, message: message.into() }
}

/// Parses an expression that starts at `line`, column `col` of the file and
/// shifts error locations accordingly.
fn parse_at(src: &str, line: usize, col: usize) -> Result<Expr> {
    parse(src).map_err(|e| {
        let column = if e.line == 1 { e.column + col - 1 } else { e.column };
        Error::Parse(ParseError { line: line + e.line - 1, column, ..e })
    })
}

/// Parses `[i]` or `[i][j]` suffixes into 0-based indices.
fn indices(s: &str, count: usize, line: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while let Some(r) = rest.strip_prefix('[') {
        let close = r.find(']').ok_or_else(|| model_err(line, "missing `]`"))?;
        let k: usize = r[..close]
            .trim()
            .parse()
            .map_err(|_| model_err(line, format!("bad index `{}`", &r[..close])))?;
        if k == 0 {
            return Err(model_err(line, "indices start at 1"));
        }
        out.push(k - 1);
        rest = r[close + 1..].trim_start();
    }
    if out.len() != count || !rest.is_empty() {
        return Err(model_err(line, format!("expected {count} index brackets")));
    }
    Ok(out)
}

impl ModelFile {
    pub fn parse(src: &str) -> Result<ModelFile> {
        let mut name = None;
        let mut mode = None;
        let mut params = Vec::new();
        let mut vars: Option<Vec<String>> = None;
        let mut g: BTreeMap<usize, (usize, Expr)> = BTreeMap::new();
        let mut mass = BTreeMap::new();
        let mut force = BTreeMap::new();
        let mut uses: Vec<(usize, Expr)> = Vec::new();

        for stmt in logical_lines(src) {
            let line = stmt.line;
            let text = stmt.text.trim_start();
            let indent = stmt.text.len() - text.len();
            let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
            match head {
                "model" => name = Some(rest.trim().to_string()),
                "mode" => {
                    mode = Some(match rest.trim() {
                        "kcc" => Mode::Kcc,
                        "linear-accel" => Mode::LinearAccel,
                        other => return Err(model_err(line, format!("unknown mode `{other}`"))),
                    })
                }
                "params" => {
                    for tok in rest.split_whitespace() {
                        let (p, v) = match tok.split_once('=') {
                            Some((p, v)) => {
                                let r = parse_rational(v).ok_or_else(|| {
                                    model_err(line, format!("bad default value `{v}` for `{p}`"))
                                })?;
                                (p, Some(r))
                            }
                            None => (tok, None),
                        };
                        params.push((p.to_string(), v));
                    }
                }
                "vars" => vars = Some(rest.split_whitespace().map(str::to_string).collect()),
                _ => {
                    let (lhs, rhs) = text
                        .split_once('=')
                        .ok_or_else(|| model_err(line, format!("unrecognised line `{}`", text.trim())))?;
                    let col = indent + lhs.len() + 2;
                    let expr = parse_at(rhs, line, col)?;
                    let lhs = lhs.trim();
                    if let Some(k) = lhs.strip_prefix('G') {
                        let i: usize = k
                            .parse()
                            .ok()
                            .filter(|&i| i > 0)
                            .ok_or_else(|| model_err(line, format!("bad G index in `{lhs}`")))?;
                        if g.insert(i - 1, (line, expr.clone())).is_some() {
                            return Err(model_err(line, format!("G{i} defined twice")));
                        }
                    } else if let Some(r) = lhs.strip_prefix('M') {
                        let ij = indices(r, 2, line)?;
                        mass.insert((ij[0], ij[1]), expr.clone());
                    } else if let Some(r) = lhs.strip_prefix('f') {
                        let i = indices(r, 1, line)?;
                        force.insert(i[0], expr.clone());
                    } else {
                        return Err(model_err(line, format!("unknown definition `{lhs}`")));
                    }
                    uses.push((line, expr));
                }
            }
        }

        let name = name.ok_or_else(|| model_err(1, "missing `model` line"))?;
        let mode = mode.ok_or_else(|| model_err(1, "missing `mode` line"))?;
        let vars = vars.ok_or_else(|| model_err(1, "missing `vars` line"))?;
        let n = vars.len();
        if n == 0 {
            return Err(Error::Dimension("`vars` declares no variables".into()));
        }

        let mut declared: BTreeSet<String> = vars.iter().cloned().collect();
        declared.extend((1..=n).map(|i| format!("y{i}")));
        declared.extend(params.iter().map(|(p, _)| p.clone()));
        for (line, e) in &uses {
            if let Some(s) = e.free_symbols().into_iter().find(|s| !declared.contains(s)) {
                return Err(Error::UndeclaredSymbol { line: *line, symbol: s });
            }
        }

        let g_vec = match mode {
            Mode::Kcc => {
                if !mass.is_empty() || !force.is_empty() {
                    return Err(model_err(1, "M/f entries are only allowed in linear-accel mode"));
                }
                if g.len() != n || g.keys().any(|&i| i >= n) {
                    return Err(Error::Dimension(format!(
                        "{n} variables need G1..G{n}, found {} definitions",
                        g.len()
                    )));
                }
                g.into_values().map(|(_, e)| e).collect()
            }
            Mode::LinearAccel => {
                if let Some((_, (line, _))) = g.iter().next() {
                    return Err(model_err(*line, "G entries are only allowed in kcc mode"));
                }
                if let Some(&(i, j)) = mass.keys().find(|(i, j)| *i >= n || *j >= n) {
                    return Err(Error::Dimension(format!("M[{}][{}] outside {n}x{n}", i + 1, j + 1)));
                }
                if force.len() != n || force.keys().any(|&i| i >= n) {
                    return Err(Error::Dimension(format!(
                        "{n} variables need f[1]..f[{n}], found {} entries",
                        force.len()
                    )));
                }
                Vec::new()
            }
        };
        Ok(ModelFile { name, mode, params, vars, g: g_vec, mass, force })
    }

    /// Converts to a [`Model`], routing linear-accel files through the
    /// standard-form conversion.
    pub fn to_model(&self) -> Result<Model> {
        let n = self.vars.len();
        let g = match self.mode {
            Mode::Kcc => self.g.clone(),
            Mode::LinearAccel => {
                let mass: Vec<Vec<Expr>> = (0..n)
                    .map(|i| {
                        (0..n).map(|j| self.mass.get(&(i, j)).cloned().unwrap_or_else(Expr::zero)).collect()
                    })
                    .collect();
                let force: Vec<Expr> = (0..n).map(|i| self.force[&i].clone()).collect();
                to_standard_form(&mass, &force)?
            }
        };
        let defaults: Binding = self
            .params
            .iter()
            .filter_map(|(p, v)| v.clone().map(|v| (p.clone(), v)))
            .collect();
        let params = self.params.iter().map(|(p, _)| p.clone()).collect();
        Ok(Model::new(self.name.clone(), self.vars.clone(), params, g)?.with_defaults(defaults))
    }

    /// Renders back to file text.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "model {}", self.name);
        let _ = writeln!(
            s,
            "mode {}",
            match self.mode {
                Mode::Kcc => "kcc",
                Mode::LinearAccel => "linear-accel",
            }
        );
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(p, v)| match v {
                    Some(v) => format!("{p}={v}"),
                    None => p.clone(),
                })
                .collect();
            let _ = writeln!(s, "params {}", ps.join(" "));
        }
        let _ = writeln!(s, "vars {}", self.vars.join(" "));
        for (i, g) in self.g.iter().enumerate() {
            let _ = writeln!(s, "G{} = {g}", i + 1);
        }
        for ((i, j), e) in &self.mass {
            let _ = writeln!(s, "M[{}][{}] = {e}", i + 1, j + 1);
        }
        for (i, e) in &self.force {
            let _ = writeln!(s, "f[{}] = {e}", i + 1);
        }
        s
    }

    /// A kcc-mode file describing `model`.
    pub fn from_model(model: &Model) -> ModelFile {
        let params = model
            .params
            .iter()
            .map(|p| (p.clone(), model.defaults.get(p).and_then(|v| v.as_exact().cloned())))
            .collect();
        ModelFile {
            name: model.name.clone(),
            mode: Mode::Kcc,
            params,
            vars: model.vars.clone(),
            g: model.g.clone(),
            mass: BTreeMap::new(),
            force: BTreeMap::new(),
        }
    }
}

/// Reads and converts a model file.
pub fn load(path: impl AsRef<Path>) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    ModelFile::parse(&text)?.to_model()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undeclared_symbol_reports_line() {
        let src = "model t\nmode kcc\nvars x1\n\nG1 = z";
        match ModelFile::parse(src) {
            Err(Error::UndeclaredSymbol { line, symbol }) => {
                assert_eq!((line, symbol.as_str()), (5, "z"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_error_location_is_file_relative() {
        let src = "model t\nmode kcc\nvars x1\nG1 = x1 + * 2";
        match ModelFile::parse(src) {
            Err(Error::Parse(e)) => assert_eq!((e.line, e.column), (4, 11)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let src = "model t\nmode kcc\nvars x1 x2\nG1 = x1";
        assert!(matches!(ModelFile::parse(src), Err(Error::Dimension(_))));
        let src = "model t\nmode linear-accel\nvars x1\nM[1][1] = 1\nf[1] = x1\nf[2] = 0";
        assert!(matches!(ModelFile::parse(src), Err(Error::Dimension(_))));
    }

    #[test]
    fn singular_mass_matrix() {
        let src = "model t\nmode linear-accel\nparams a\nvars x1 x2\n\
                   M[1][1] = a\nM[1][2] = a\nM[2][1] = 1\nM[2][2] = 1\nf[1] = x1\nf[2] = x2";
        let mf = ModelFile::parse(src).unwrap();
        assert!(matches!(mf.to_model(), Err(Error::SingularMassMatrix)));
    }

    #[test]
    fn continuation_and_comments() {
        let src = "model t # name\nmode kcc\nparams k=1/4\nvars x1\nG1 = k* \\\n  x1 # spring\n";
        let m = ModelFile::parse(src).unwrap().to_model().unwrap();
        assert_eq!(m.g[0].to_string(), "k*x1");
        assert_eq!(m.defaults.get("k").unwrap().to_string(), "1/4");
    }
}
