//! Interpreter for [`ProcUnit`]s.
//!
//! Branches are tried in order; the first whose guard holds and whose
//! steps all succeed returns its outputs. Outputs written by a failed
//! branch are left as they are, since they only mean something on success.

use std::collections::HashMap;

use thiserror::Error;

use crate::semantics::{Fault, Interpretation, Structure, Value};
use crate::syntax::{Term, EQUALS, FALSE, TRUE};

use super::ir::{Cond, ProcFunction, ProcUnit, Stmt};
use super::modes::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecConfig {
    /// Deepest allowed call nesting; the entry call has depth 1.
    pub max_depth: usize,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig { max_depth: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("call depth exceeded the limit of {0}")]
    ResourceLimit(usize),
    #[error("type error: {0}")]
    TypeError(String),
    #[error("no procedure named `{0}`")]
    UnknownProcedure(String),
    #[error("`{name}` takes {expected} inputs, got {got}")]
    InputCount {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("`{0}` is read before it is bound")]
    UnboundRead(String),
    #[error("constant `{0}` has no value")]
    UnknownConstant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Values of the output parameters, in parameter order.
    Success(Vec<Value>),
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub outcome: Outcome,
    /// Deepest call nesting reached.
    pub max_depth: usize,
    pub calls: usize,
}

type Env = HashMap<String, Value>;

struct Machine<'a> {
    u: &'a ProcUnit,
    s: &'a Structure,
    data: Option<&'a Interpretation>,
    cfg: ExecConfig,
    max_depth: usize,
    calls: usize,
}

fn fault(what: &str, f: Fault) -> Option<ExecError> {
    match f {
        Fault::Undefined => None,
        Fault::KindMismatch => Some(ExecError::TypeError(format!(
            "operands of `{what}` have mismatched kinds"
        ))),
    }
}

impl Machine<'_> {
    fn eval(&self, t: &Term, env: &Env) -> Result<Option<Value>, ExecError> {
        match t {
            Term::Var(v) => env
                .get(v)
                .cloned()
                .map(Some)
                .ok_or_else(|| ExecError::UnboundRead(v.clone())),
            Term::Const(c) => self
                .s
                .functions
                .constant(c)
                .map(Some)
                .ok_or_else(|| ExecError::UnknownConstant(c.clone())),
            Term::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval(a, env)? {
                        Some(v) => vals.push(v),
                        None => return Ok(None),
                    }
                }
                match self.s.functions.apply(f, &vals) {
                    Ok(v) => Ok(Some(v)),
                    Err(e) => fault(f, e).map_or(Ok(None), Err),
                }
            }
        }
    }

    fn holds(&self, c: &Cond, env: &Env) -> Result<bool, ExecError> {
        let mut vals = Vec::with_capacity(c.args.len());
        for a in &c.args {
            match self.eval(a, env)? {
                Some(v) => vals.push(v),
                None => return Ok(false),
            }
        }
        Ok(match c.pred.as_str() {
            EQUALS => vals[0] == vals[1],
            TRUE => true,
            FALSE => false,
            p => match self.s.builtin_predicate(p) {
                Some(op) if vals.len() == 2 => match op.test(&vals[0], &vals[1]) {
                    Ok(b) => b,
                    Err(e) => return fault(p, e).map_or(Ok(false), Err),
                },
                _ => self.data.is_some_and(|i| i.contains(p, &vals)),
            },
        })
    }

    fn matches(
        &self,
        pattern: &Term,
        v: &Value,
        binds: &[String],
        env: &mut Env,
    ) -> Result<bool, ExecError> {
        match pattern {
            Term::Var(x) if binds.contains(x) => {
                env.insert(x.clone(), v.clone());
                Ok(true)
            }
            Term::App(f, args) if binds.iter().any(|b| mentions(pattern, b)) => {
                match self.s.functions.invert(f, v) {
                    Some(parts) => {
                        for (a, p) in args.iter().zip(&parts) {
                            if !self.matches(a, p, binds, env)? {
                                return Ok(false);
                            }
                        }
                        Ok(true)
                    }
                    None => Ok(false),
                }
            }
            _ => Ok(self.eval(pattern, env)?.as_ref() == Some(v)),
        }
    }

    fn step(&mut self, st: &Stmt, env: &mut Env, depth: usize) -> Result<bool, ExecError> {
        match st {
            Stmt::Assign { var, expr } => match self.eval(expr, env)? {
                Some(v) => {
                    env.insert(var.clone(), v);
                    Ok(true)
                }
                None => Ok(false),
            },
            Stmt::Test(c) => self.holds(c, env),
            Stmt::Match {
                value,
                pattern,
                binds,
            } => match self.eval(value, env)? {
                Some(v) => self.matches(pattern, &v, binds, env),
                None => Ok(false),
            },
            Stmt::Call { pred, args, modes } => {
                let mut ins = Vec::new();
                for (a, m) in args.iter().zip(modes) {
                    if *m == Mode::In {
                        match self.eval(a, env)? {
                            Some(v) => ins.push(v),
                            None => return Ok(false),
                        }
                    }
                }
                let Some(outs) = self.call(pred, ins, depth + 1)? else {
                    return Ok(false);
                };
                let out_vars = args.iter().zip(modes).filter(|(_, m)| **m == Mode::Out);
                for ((a, _), v) in out_vars.zip(outs) {
                    if let Term::Var(x) = a {
                        env.insert(x.clone(), v);
                    }
                }
                Ok(true)
            }
        }
    }

    fn call(
        &mut self,
        name: &str,
        ins: Vec<Value>,
        depth: usize,
    ) -> Result<Option<Vec<Value>>, ExecError> {
        let f: &ProcFunction = self
            .u
            .function(name)
            .ok_or_else(|| ExecError::UnknownProcedure(name.to_string()))?;
        let expected = f.modes().filter(|m| *m == Mode::In).count();
        if ins.len() != expected {
            return Err(ExecError::InputCount {
                name: name.to_string(),
                expected,
                got: ins.len(),
            });
        }
        if depth > self.cfg.max_depth {
            return Err(ExecError::ResourceLimit(self.cfg.max_depth));
        }
        self.max_depth = self.max_depth.max(depth);
        self.calls += 1;
        let mut env = Env::new();
        let in_params = f.params.iter().filter(|(_, m)| *m == Mode::In);
        for ((p, _), v) in in_params.zip(ins) {
            env.insert(p.clone(), v);
        }
        'branches: for b in &f.branches {
            for c in &b.guard {
                if !self.holds(c, &env)? {
                    continue 'branches;
                }
            }
            for st in &b.steps {
                if !self.step(st, &mut env, depth)? {
                    continue 'branches;
                }
            }
            let outs = f
                .params
                .iter()
                .filter(|(_, m)| *m == Mode::Out)
                .map(|(p, _)| {
                    env.get(p)
                        .cloned()
                        .ok_or_else(|| ExecError::UnboundRead(p.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Some(outs));
        }
        Ok(None)
    }
}

fn mentions(t: &Term, v: &str) -> bool {
    let mut found = false;
    t.for_each_var(&mut |x| found |= x == v);
    found
}

/// Runs `entry` on the values of its input parameters. Extern relations
/// used as tests are looked up in `data`.
pub fn execute_with_data(
    u: &ProcUnit,
    entry: &str,
    inputs: &[Value],
    s: &Structure,
    data: Option<&Interpretation>,
    cfg: ExecConfig,
) -> Result<Execution, ExecError> {
    let mut m = Machine {
        u,
        s,
        data,
        cfg,
        max_depth: 0,
        calls: 0,
    };
    let outcome = match m.call(entry, inputs.to_vec(), 1)? {
        Some(outs) => Outcome::Success(outs),
        None => Outcome::Failure,
    };
    Ok(Execution {
        outcome,
        max_depth: m.max_depth,
        calls: m.calls,
    })
}

pub fn execute(
    u: &ProcUnit,
    entry: &str,
    inputs: &[Value],
    s: &Structure,
    cfg: ExecConfig,
) -> Result<Execution, ExecError> {
    execute_with_data(u, entry, inputs, s, None, cfg)
}
