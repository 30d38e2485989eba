//! The procedural target: boolean functions made of guarded branches.

use crate::syntax::Term;

use super::modes::Mode;

/// A test over bound values: `=`, a comparison, `true`/`false`, or an
/// extern relation looked up in data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cond {
    pub pred: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    /// `var = expr`, binding `var`.
    Assign { var: String, expr: Term },
    /// A test evaluated after some bindings.
    Test(Cond),
    /// Decomposes the value of `value` along `pattern`, binding `binds`;
    /// other variables in the pattern are compared.
    Match {
        value: Term,
        pattern: Term,
        binds: Vec<String>,
    },
    /// A call; arguments at `Out` positions are unbound variables.
    Call {
        pred: String,
        args: Vec<Term>,
        modes: Vec<Mode>,
    },
}

impl Stmt {
    pub fn is_fallible(&self) -> bool {
        !matches!(self, Stmt::Assign { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    /// Index of the disjunct this branch comes from.
    pub disjunct: usize,
    /// Source text of that disjunct.
    pub origin: String,
    pub guard: Vec<Cond>,
    pub locals: Vec<String>,
    pub steps: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcFunction {
    pub name: String,
    pub params: Vec<(String, Mode)>,
    pub branches: Vec<Branch>,
}

impl ProcFunction {
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        self.params.iter().map(|(_, m)| *m)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProcUnit {
    pub functions: Vec<ProcFunction>,
}

impl ProcUnit {
    pub fn function(&self, name: &str) -> Option<&ProcFunction> {
        self.functions.iter().find(|f| f.name == name)
    }
}
