//! Meaning of terms and formulas under an interpretation and an assignment.
//!
//! Formulas are compiled to a slot-indexed form before evaluation: every
//! variable gets a slot in a flat environment, constants are resolved to
//! values, and each conjunct is scheduled at the first point of the
//! existential enumeration where all its variables are bound. Scheduling
//! only prunes the search; the result is the plain satisfaction relation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::interp::Interpretation;
use super::structure::{for_each_tuple, CmpOp, Structure};
use super::value::Value;
use crate::syntax::{Atom, Body, Disjunct, FreeVars, Term, EQUALS, FALSE, TRUE};

/// Values for a set of variables.
pub type Assignment = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound by the assignment")]
    UnboundVariable(String),
    #[error("an existential ranges over a domain that cannot be enumerated")]
    NonEnumerableDomain,
    #[error("constant `{0}` has no value in the structure")]
    UnknownConstant(String),
    #[error("function `{0}` has no meaning in the structure")]
    UnknownFunction(String),
}

#[derive(Debug, Clone)]
pub(crate) enum CTerm {
    Slot(usize),
    Val(Value),
    /// A ground term whose value is undefined.
    Undef,
    App(String, Vec<CTerm>),
}

impl CTerm {
    pub fn collect_slots(&self, out: &mut Vec<usize>) {
        match self {
            CTerm::Slot(i) => {
                if !out.contains(i) {
                    out.push(*i)
                }
            }
            CTerm::App(_, args) => args.iter().for_each(|a| a.collect_slots(out)),
            CTerm::Val(_) | CTerm::Undef => {}
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum CPred {
    Eq,
    True,
    False,
    Cmp(CmpOp),
    Rel(String),
}

#[derive(Debug, Clone)]
pub(crate) struct CAtom {
    pub pred: CPred,
    pub args: Vec<CTerm>,
    /// Distinct slots read by the atom.
    pub slots: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct CDisjunct {
    pub exists: Vec<usize>,
    pub atoms: Vec<CAtom>,
    /// `stages[i]` lists the atoms decidable once the free slots and the
    /// first `i` existentials are bound.
    pub stages: Vec<Vec<usize>>,
}

/// A disjunction compiled against a fixed list of free variables, which
/// occupy slots `0..free`.
#[derive(Debug, Clone)]
pub(crate) struct CBody {
    pub names: Vec<String>,
    pub free: usize,
    pub disjuncts: Vec<CDisjunct>,
}

impl CBody {
    pub fn env(&self) -> Vec<Option<Value>> {
        vec![None; self.names.len()]
    }
}

pub(crate) struct Compiler<'s> {
    s: &'s Structure,
    names: Vec<String>,
    slots: HashMap<String, usize>,
}

impl<'s> Compiler<'s> {
    pub fn new(s: &'s Structure) -> Self {
        Compiler {
            s,
            names: Vec::new(),
            slots: HashMap::new(),
        }
    }

    pub fn bind(&mut self, name: &str) -> usize {
        let i = self.names.len();
        self.names.push(name.to_string());
        self.slots.insert(name.to_string(), i);
        i
    }

    pub fn slot(&mut self, name: &str) -> usize {
        match self.slots.get(name) {
            Some(&i) => i,
            None => self.bind(name),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn term(&mut self, t: &Term) -> Result<CTerm, EvalError> {
        Ok(match t {
            Term::Var(v) => CTerm::Slot(self.slot(v)),
            Term::Const(c) => CTerm::Val(
                self.s
                    .functions
                    .constant(c)
                    .ok_or_else(|| EvalError::UnknownConstant(c.clone()))?,
            ),
            Term::App(f, args) => {
                if self.s.functions.builtin(f).is_none() {
                    return Err(EvalError::UnknownFunction(f.clone()));
                }
                let args = args
                    .iter()
                    .map(|a| self.term(a))
                    .collect::<Result<Vec<_>, _>>()?;
                if args.iter().any(|a| matches!(a, CTerm::Undef)) {
                    CTerm::Undef
                } else if args.iter().all(|a| matches!(a, CTerm::Val(_))) {
                    let vals: Vec<Value> = args
                        .into_iter()
                        .map(|a| match a {
                            CTerm::Val(v) => v,
                            _ => unreachable!(),
                        })
                        .collect();
                    match self.s.apply(f, &vals) {
                        Some(v) => CTerm::Val(v),
                        None => CTerm::Undef,
                    }
                } else {
                    CTerm::App(f.clone(), args)
                }
            }
        })
    }

    pub fn atom(&mut self, a: &Atom) -> Result<CAtom, EvalError> {
        let pred = match a.pred.as_str() {
            EQUALS if a.args.len() == 2 => CPred::Eq,
            TRUE if a.args.is_empty() => CPred::True,
            FALSE if a.args.is_empty() => CPred::False,
            q => match self.s.builtin_predicate(q) {
                Some(op) if a.args.len() == 2 => CPred::Cmp(op),
                _ => CPred::Rel(q.to_string()),
            },
        };
        let args = a
            .args
            .iter()
            .map(|t| self.term(t))
            .collect::<Result<Vec<_>, _>>()?;
        let mut slots = Vec::new();
        for t in &args {
            t.collect_slots(&mut slots);
        }
        Ok(CAtom { pred, args, slots })
    }

    /// Compiles a disjunction whose free variables are `free`, in order.
    pub fn body(mut self, free: &[String], ds: &[Disjunct]) -> Result<CBody, EvalError> {
        for v in free {
            self.bind(v);
        }
        let n_free = free.len();
        let mut disjuncts = Vec::with_capacity(ds.len());
        for d in ds {
            // existentials get fresh slots so that distinct disjuncts never share one
            let saved: Vec<(String, Option<usize>)> = d
                .exists
                .iter()
                .map(|e| (e.clone(), self.slots.get(e).copied()))
                .collect();
            let exists: Vec<usize> = d.exists.iter().map(|e| self.bind(e)).collect();
            let atoms = d
                .conjuncts
                .iter()
                .map(|a| self.atom(a))
                .collect::<Result<Vec<_>, _>>()?;
            for (name, old) in saved {
                match old {
                    Some(i) => self.slots.insert(name, i),
                    None => self.slots.remove(&name),
                };
            }
            let stages = schedule(n_free, &exists, &atoms);
            disjuncts.push(CDisjunct {
                exists,
                atoms,
                stages,
            });
        }
        Ok(CBody {
            names: self.names,
            free: n_free,
            disjuncts,
        })
    }
}

fn schedule(n_free: usize, exists: &[usize], atoms: &[CAtom]) -> Vec<Vec<usize>> {
    let mut bound: BTreeSet<usize> = (0..n_free).collect();
    let mut placed = vec![false; atoms.len()];
    let mut stages = Vec::with_capacity(exists.len() + 1);
    for level in 0..=exists.len() {
        if level > 0 {
            bound.insert(exists[level - 1]);
        }
        let mut stage = Vec::new();
        for (i, a) in atoms.iter().enumerate() {
            let last = level == exists.len();
            if !placed[i] && (last || a.slots.iter().all(|s| bound.contains(s))) {
                placed[i] = true;
                stage.push(i);
            }
        }
        stages.push(stage);
    }
    stages
}

pub(crate) fn eval_cterm(
    t: &CTerm,
    s: &Structure,
    env: &[Option<Value>],
) -> Result<Option<Value>, usize> {
    match t {
        CTerm::Slot(i) => env[*i].clone().map(Some).ok_or(*i),
        CTerm::Val(v) => Ok(Some(v.clone())),
        CTerm::Undef => Ok(None),
        CTerm::App(f, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                match eval_cterm(a, s, env)? {
                    Some(v) => vals.push(v),
                    None => return Ok(None),
                }
            }
            Ok(s.apply(f, &vals))
        }
    }
}

/// Truth of a compiled atom; `Err(slot)` names an unbound slot.
pub(crate) fn atom_holds(
    a: &CAtom,
    s: &Structure,
    i: &Interpretation,
    env: &[Option<Value>],
) -> Result<bool, usize> {
    let mut vals = Vec::with_capacity(a.args.len());
    let mut undefined = false;
    for t in &a.args {
        match eval_cterm(t, s, env)? {
            Some(v) => vals.push(v),
            None => undefined = true,
        }
    }
    if undefined {
        return Ok(false);
    }
    Ok(match &a.pred {
        CPred::True => true,
        CPred::False => false,
        CPred::Eq => vals[0] == vals[1],
        CPred::Cmp(op) => op.test(&vals[0], &vals[1]).unwrap_or(false),
        CPred::Rel(q) => i.contains(q, &vals),
    })
}

pub(crate) struct Evaluator<'a> {
    pub s: &'a Structure,
    pub i: &'a Interpretation,
    pub names: &'a [String],
}

impl Evaluator<'_> {
    fn unbound(&self, slot: usize) -> EvalError {
        EvalError::UnboundVariable(self.names[slot].clone())
    }

    pub fn body(&self, b: &CBody, env: &mut [Option<Value>]) -> Result<bool, EvalError> {
        for d in &b.disjuncts {
            if self.disjunct(d, env)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn disjunct(&self, d: &CDisjunct, env: &mut [Option<Value>]) -> Result<bool, EvalError> {
        let r = self.search(d, 0, env);
        for &e in &d.exists {
            env[e] = None;
        }
        r
    }

    fn search(
        &self,
        d: &CDisjunct,
        level: usize,
        env: &mut [Option<Value>],
    ) -> Result<bool, EvalError> {
        for &a in &d.stages[level] {
            if !atom_holds(&d.atoms[a], self.s, self.i, env).map_err(|slot| self.unbound(slot))? {
                return Ok(false);
            }
        }
        if level == d.exists.len() {
            return Ok(true);
        }
        let values = self
            .s
            .domain
            .values()
            .map_err(|_| EvalError::NonEnumerableDomain)?;
        let slot = d.exists[level];
        for v in values {
            env[slot] = Some(v.clone());
            if self.search(d, level + 1, env)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Formulas of the clause language: atoms, conjunctions, disjuncts and
/// bodies, all viewed as disjunctions of existential conjunctions.
pub trait Formula: FreeVars {
    fn as_disjuncts(&self) -> Vec<Disjunct>;
}

impl Formula for Atom {
    fn as_disjuncts(&self) -> Vec<Disjunct> {
        vec![Disjunct::new(vec![], vec![self.clone()])]
    }
}

impl Formula for Disjunct {
    fn as_disjuncts(&self) -> Vec<Disjunct> {
        vec![self.clone()]
    }
}

impl Formula for Body {
    fn as_disjuncts(&self) -> Vec<Disjunct> {
        self.0.clone()
    }
}

/// Value of `t` under `alpha`; `None` when some function application in it
/// is undefined. The interpretation plays no part.
pub fn eval_term(t: &Term, s: &Structure, alpha: &Assignment) -> Result<Option<Value>, EvalError> {
    let mut c = Compiler::new(s);
    let ct = c.term(t)?;
    let env: Vec<Option<Value>> = c.names().iter().map(|n| alpha.get(n).cloned()).collect();
    eval_cterm(&ct, s, &env).map_err(|slot| EvalError::UnboundVariable(c.names()[slot].clone()))
}

/// Whether `phi` holds in `i` with `alpha`, which must cover its free
/// variables.
pub fn satisfies<F: Formula + ?Sized>(
    phi: &F,
    i: &Interpretation,
    s: &Structure,
    alpha: &Assignment,
) -> Result<bool, EvalError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    if let Some(v) = free.iter().find(|v| !alpha.contains_key(*v)) {
        return Err(EvalError::UnboundVariable(v.clone()));
    }
    let body = Compiler::new(s).body(&free, &phi.as_disjuncts())?;
    let mut env = body.env();
    for (k, v) in free.iter().enumerate() {
        env[k] = alpha.get(v).cloned();
    }
    Evaluator {
        s,
        i,
        names: &body.names,
    }
    .body(&body, &mut env)
}

/// All assignments to the free variables of `phi` that satisfy it. A
/// closed formula yields either no assignment or the single empty one.
pub fn relation_of<F: Formula + ?Sized>(
    phi: &F,
    i: &Interpretation,
    s: &Structure,
) -> Result<BTreeSet<Assignment>, EvalError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    relation_over(phi, &free, i, s)
}

/// As [`relation_of`] with an explicit variable list, which must include
/// the free variables of `phi`.
pub fn relation_over<F: Formula + ?Sized>(
    phi: &F,
    vars: &[String],
    i: &Interpretation,
    s: &Structure,
) -> Result<BTreeSet<Assignment>, EvalError> {
    let body = Compiler::new(s).body(vars, &phi.as_disjuncts())?;
    let d = s
        .domain
        .values()
        .map_err(|_| EvalError::NonEnumerableDomain)?;
    let ev = Evaluator {
        s,
        i,
        names: &body.names,
    };
    let mut env = body.env();
    let mut out = BTreeSet::new();
    let mut err = None;
    for_each_tuple(d, vars.len(), &mut |t| {
        if err.is_some() {
            return;
        }
        for (k, v) in t.iter().enumerate() {
            env[k] = Some(v.clone());
        }
        match ev.body(&body, &mut env) {
            Ok(true) => {
                out.insert(vars.iter().cloned().zip(t.iter().cloned()).collect());
            }
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
