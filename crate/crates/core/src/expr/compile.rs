//! Flat floating-point evaluator for a batch of expressions over a fixed
//! list of input variables. Used in the numeric inner loops (Newton, RK4)
//! where walking the tree with hashing would dominate.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::{Expr, Node};
use crate::error::{Error, Result};
use crate::expr::Binding;

#[derive(Clone, Debug)]
enum Op {
    Const(f64),
    Var(usize),
    Add(Vec<usize>),
    Mul(Vec<usize>),
    Pow(usize, i32),
    Div(usize, usize),
}

/// Compiled form of several expressions sharing common subtrees.
#[derive(Clone, Debug)]
pub struct CompiledExprs {
    ops: Vec<Op>,
    outputs: Vec<usize>,
    nvars: usize,
}

impl CompiledExprs {
    /// Compiles `exprs` with inputs `vars`; any other symbol must be bound
    /// in `fixed` and is frozen to its floating value.
    pub fn new(exprs: &[Expr], vars: &[String], fixed: &Binding) -> Result<CompiledExprs> {
        let index: HashMap<&str, usize> =
            vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut c = Compiler { ops: Vec::new(), memo: HashMap::new(), index, fixed };
        let outputs = exprs.iter().map(|e| c.emit(e)).collect::<Result<Vec<_>>>()?;
        Ok(CompiledExprs { ops: c.ops, outputs, nvars: vars.len() })
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.nvars
    }

    /// Writes every output and returns the smallest magnitude of any
    /// denominator met on the way (infinity when there is none).
    pub fn eval(&self, inputs: &[f64], out: &mut [f64]) -> f64 {
        let mut regs = vec![0.0; self.ops.len()];
        let mut margin = f64::INFINITY;
        for (i, op) in self.ops.iter().enumerate() {
            regs[i] = match op {
                Op::Const(c) => *c,
                Op::Var(v) => inputs[*v],
                Op::Add(xs) => xs.iter().map(|&x| regs[x]).sum(),
                Op::Mul(xs) => xs.iter().map(|&x| regs[x]).product(),
                Op::Pow(b, k) => {
                    if *k < 0 {
                        margin = margin.min(regs[*b].abs());
                    }
                    regs[*b].powi(*k)
                }
                Op::Div(n, d) => {
                    margin = margin.min(regs[*d].abs());
                    regs[*n] / regs[*d]
                }
            };
        }
        for (o, &r) in out.iter_mut().zip(&self.outputs) {
            *o = regs[r];
        }
        margin
    }

    pub fn eval_vec(&self, inputs: &[f64]) -> (Vec<f64>, f64) {
        let mut out = vec![0.0; self.outputs.len()];
        let m = self.eval(inputs, &mut out);
        (out, m)
    }
}

struct Compiler<'a> {
    ops: Vec<Op>,
    memo: HashMap<usize, usize>,
    index: HashMap<&'a str, usize>,
    fixed: &'a Binding,
}

impl Compiler<'_> {
    fn emit(&mut self, e: &Expr) -> Result<usize> {
        if let Some(&r) = self.memo.get(&e.ptr()) {
            return Ok(r);
        }
        let op = match e.node() {
            Node::Const(c) => Op::Const(c.to_f64().unwrap_or(f64::NAN)),
            Node::Symbol(s) => match self.index.get(&**s) {
                Some(&i) => Op::Var(i),
                None => match self.fixed.get(s) {
                    Some(v) => Op::Const(v.to_f64()),
                    None => return Err(Error::UnboundSymbol(s.to_string())),
                },
            },
            Node::Add(ts) => Op::Add(ts.iter().map(|t| self.emit(t)).collect::<Result<_>>()?),
            Node::Mul(fs) => Op::Mul(fs.iter().map(|f| self.emit(f)).collect::<Result<_>>()?),
            Node::Pow(b, k) => {
                let k = i32::try_from(*k)
                    .map_err(|_| Error::InvalidArgument(format!("exponent {k} too large")))?;
                Op::Pow(self.emit(b)?, k)
            }
            Node::Div(n, d) => Op::Div(self.emit(n)?, self.emit(d)?),
        };
        self.ops.push(op);
        let r = self.ops.len() - 1;
        self.memo.insert(e.ptr(), r);
        Ok(r)
    }
}
