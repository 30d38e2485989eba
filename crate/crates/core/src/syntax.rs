//! Abstract syntax of relational programs.
//!
//! A program is one clause per predicate symbol,
//!
//! ```text
//! q(x0, ..., xk) <- D0 \/ D1 \/ ... \/ Dn
//! ```
//!
//! where every disjunct `Di` is an existentially quantified conjunction of
//! atoms and the head arguments are pairwise distinct variables. Several
//! clauses written for the same predicate are merged into one disjunctive
//! body by [`Program::add_clause`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::diagnostic::SourceSpan;

pub const EQUALS: &str = "=";
pub const TRUE: &str = "true";
pub const FALSE: &str = "false";

/// Returns true for the predicate symbols every signature carries.
pub fn is_reserved_predicate(name: &str) -> bool {
    matches!(name, EQUALS | TRUE | FALSE)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("`{0}` is reserved")]
    Reserved(String),
    #[error("`{name}` is already declared as a {existing}")]
    ClassConflict {
        name: String,
        existing: &'static str,
    },
    #[error("function `{0}` must have positive arity")]
    ZeroArityFunction(String),
    #[error("`{name}` already declared with arity {existing}, not {requested}")]
    ConflictingArity {
        name: String,
        existing: usize,
        requested: usize,
    },
}

/// Constant, function and predicate symbols of a program.
///
/// `=`/2, `true`/0 and `false`/0 are always present and cannot be declared
/// or redefined. Predicates marked extensional get their relation from data
/// or from the structure rather than from a clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    constants: BTreeSet<String>,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
    extensional: BTreeSet<String>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        let mut predicates = BTreeMap::new();
        predicates.insert(EQUALS.to_string(), 2);
        predicates.insert(TRUE.to_string(), 0);
        predicates.insert(FALSE.to_string(), 0);
        Signature {
            constants: BTreeSet::new(),
            functions: BTreeMap::new(),
            predicates,
            extensional: BTreeSet::new(),
        }
    }

    fn class_of(&self, name: &str) -> Option<&'static str> {
        if self.constants.contains(name) {
            Some("constant")
        } else if self.functions.contains_key(name) {
            Some("function")
        } else if self.predicates.contains_key(name) {
            Some("predicate")
        } else {
            None
        }
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        if is_reserved_predicate(name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        match self.class_of(name) {
            None | Some("constant") => {
                self.constants.insert(name.to_string());
                Ok(())
            }
            Some(existing) => Err(SignatureError::ClassConflict {
                name: name.to_string(),
                existing,
            }),
        }
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if is_reserved_predicate(name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        if arity == 0 {
            return Err(SignatureError::ZeroArityFunction(name.to_string()));
        }
        match self.class_of(name) {
            None => {
                self.functions.insert(name.to_string(), arity);
                Ok(())
            }
            Some("function") => self.check_arity(name, self.functions[name], arity),
            Some(existing) => Err(SignatureError::ClassConflict {
                name: name.to_string(),
                existing,
            }),
        }
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if is_reserved_predicate(name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        match self.class_of(name) {
            None => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
            Some("predicate") => self.check_arity(name, self.predicates[name], arity),
            Some(existing) => Err(SignatureError::ClassConflict {
                name: name.to_string(),
                existing,
            }),
        }
    }

    /// Declares a predicate whose relation is supplied externally.
    pub fn add_extensional(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.add_predicate(name, arity)?;
        self.extensional.insert(name.to_string());
        Ok(())
    }

    fn check_arity(
        &self,
        name: &str,
        existing: usize,
        requested: usize,
    ) -> Result<(), SignatureError> {
        if existing == requested {
            Ok(())
        } else {
            Err(SignatureError::ConflictingArity {
                name: name.to_string(),
                existing,
                requested,
            })
        }
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn is_extensional(&self, name: &str) -> bool {
        self.extensional.contains(name)
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(String::as_str)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, a)| (n.as_str(), *a))
    }

    /// All predicates, including the reserved ones.
    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(n, a)| (n.as_str(), *a))
    }

    /// Predicates other than `=`, `true` and `false`.
    pub fn user_predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates().filter(|(n, _)| !is_reserved_predicate(n))
    }

    pub fn extensional(&self) -> impl Iterator<Item = &str> {
        self.extensional.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(f.into(), args)
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Calls `f` on every variable occurrence, left to right.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Term::Var(v) => f(v),
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::Const(c) => Term::Const(c.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 1,
        }
    }
}

/// Predicate symbol applied to a tuple of terms indexed `0..k`.
#[derive(Debug, Clone)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
    pub span: Option<SourceSpan>,
}

// Spans are metadata; structural equality ignores them.
impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.pred == other.pred && self.args == other.args
    }
}
impl Eq for Atom {}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom {
            pred: pred.into(),
            args,
            span: None,
        }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Atom {
        Atom::new(EQUALS, vec![lhs, rhs])
    }

    pub fn is_equality(&self) -> bool {
        self.pred == EQUALS && self.args.len() == 2
    }

    /// Variables in order of first occurrence.
    pub fn vars_in_order(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for a in &self.args {
            a.for_each_var(&mut |v| {
                if seen.insert(v) {
                    out.push(v);
                }
            });
        }
        out
    }

    pub fn substitute(&self, map: &BTreeMap<String, String>) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.substitute(map)).collect(),
            span: self.span.clone(),
        }
    }
}

/// `exists v1..vk. A1 /\ ... /\ An`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disjunct {
    pub exists: Vec<String>,
    pub conjuncts: Vec<Atom>,
}

impl Disjunct {
    pub fn new(exists: Vec<String>, conjuncts: Vec<Atom>) -> Disjunct {
        Disjunct { exists, conjuncts }
    }

    /// Variables of the conjunction, quantified or not.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in &self.conjuncts {
            out.extend(a.free_vars());
        }
        out
    }
}

/// The alternatives of a clause body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Body(pub Vec<Disjunct>);

impl Body {
    pub fn disjuncts(&self) -> &[Disjunct] {
        &self.0
    }
}

#[derive(Debug, Clone)]
pub struct Clause {
    pub head: Atom,
    pub body: Body,
    pub span: Option<SourceSpan>,
}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.body == other.body
    }
}
impl Eq for Clause {}

impl Clause {
    pub fn new(head: Atom, body: Vec<Disjunct>) -> Clause {
        Clause {
            head,
            body: Body(body),
            span: None,
        }
    }

    pub fn pred(&self) -> &str {
        &self.head.pred
    }

    /// Head variables, or `None` when some head argument is not a variable.
    pub fn head_vars(&self) -> Option<Vec<&str>> {
        self.head.args.iter().map(Term::as_var).collect()
    }
}

/// A relational program: a signature plus at most one clause per predicate,
/// kept in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub signature: Signature,
    pub clauses: IndexMap<String, Clause>,
}

impl Program {
    pub fn new(signature: Signature) -> Program {
        Program {
            signature,
            clauses: IndexMap::new(),
        }
    }

    pub fn clause(&self, pred: &str) -> Option<&Clause> {
        self.clauses.get(pred)
    }

    /// Adds a clause. A second clause for an already defined predicate is
    /// merged into the existing one: its head variables are renamed to the
    /// existing head variables and its disjuncts are appended.
    ///
    /// Returns the clause back when its head or the existing head is not a
    /// list of distinct variables, since no renaming exists then.
    pub fn add_clause(&mut self, clause: Clause) -> Result<(), Clause> {
        let pred = clause.head.pred.clone();
        let Some(existing) = self.clauses.get_mut(&pred) else {
            self.clauses.insert(pred, clause);
            return Ok(());
        };
        let (Some(target), Some(source)) = (existing.head_vars(), clause.head_vars()) else {
            return Err(clause);
        };
        if target.len() != source.len() || !distinct(&target) || !distinct(&source) {
            return Err(clause);
        }
        let target: Vec<String> = target.into_iter().map(str::to_string).collect();
        let rename: BTreeMap<String, String> = source
            .iter()
            .zip(&target)
            .map(|(s, t)| (s.to_string(), t.clone()))
            .collect();
        for d in clause.body.0 {
            existing.body.0.push(rename_disjunct(&d, &rename, &target));
        }
        Ok(())
    }
}

fn distinct(names: &[&str]) -> bool {
    names.iter().collect::<BTreeSet<_>>().len() == names.len()
}

// Renames free variables per `rename`; existentials that would capture one of
// the `reserved` names are renamed apart first.
fn rename_disjunct(
    d: &Disjunct,
    rename: &BTreeMap<String, String>,
    reserved: &[String],
) -> Disjunct {
    let mut map = rename.clone();
    let mut used: BTreeSet<String> = d.all_vars();
    used.extend(reserved.iter().cloned());
    used.extend(rename.keys().cloned());
    let mut exists = Vec::with_capacity(d.exists.len());
    for e in &d.exists {
        map.remove(e);
        if reserved.contains(e) {
            let mut n = 1;
            let fresh = loop {
                let cand = format!("{e}_{n}");
                if !used.contains(&cand) {
                    break cand;
                }
                n += 1;
            };
            used.insert(fresh.clone());
            map.insert(e.clone(), fresh.clone());
            exists.push(fresh);
        } else {
            exists.push(e.clone());
        }
    }
    Disjunct {
        exists,
        conjuncts: d.conjuncts.iter().map(|a| a.substitute(&map)).collect(),
    }
}

/// Free-variable sets.
pub trait FreeVars {
    fn free_vars(&self) -> BTreeSet<String>;
}

impl FreeVars for Term {
    fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_var(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }
}

impl FreeVars for Atom {
    fn free_vars(&self) -> BTreeSet<String> {
        self.args.iter().flat_map(|a| a.free_vars()).collect()
    }
}

impl FreeVars for Disjunct {
    fn free_vars(&self) -> BTreeSet<String> {
        let mut vars = self.all_vars();
        for e in &self.exists {
            vars.remove(e);
        }
        vars
    }
}

impl FreeVars for Body {
    fn free_vars(&self) -> BTreeSet<String> {
        self.0.iter().flat_map(|d| d.free_vars()).collect()
    }
}

impl FreeVars for [Disjunct] {
    fn free_vars(&self) -> BTreeSet<String> {
        self.iter().flat_map(|d| d.free_vars()).collect()
    }
}

/// Variables of the clause matrix, i.e. before universal closure. For a
/// valid clause this equals the head variables.
impl FreeVars for Clause {
    fn free_vars(&self) -> BTreeSet<String> {
        let mut vars = self.head.free_vars();
        vars.extend(self.body.free_vars());
        vars
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReindexError {
    #[error("tuple has {tuple} components but {vars} variables were given")]
    LengthMismatch { tuple: usize, vars: usize },
    #[error("variable `{0}` occurs more than once")]
    RepeatedVariable(String),
}

/// Turns a positional tuple into an assignment keyed by `vars`, so that
/// `vars[i]` maps to `tuple[i]`.
pub fn reindex<V: Clone, S: AsRef<str>>(
    tuple: &[V],
    vars: &[S],
) -> Result<BTreeMap<String, V>, ReindexError> {
    if tuple.len() != vars.len() {
        return Err(ReindexError::LengthMismatch {
            tuple: tuple.len(),
            vars: vars.len(),
        });
    }
    let mut out = BTreeMap::new();
    for (v, x) in vars.iter().zip(tuple) {
        if out.insert(v.as_ref().to_string(), x.clone()).is_some() {
            return Err(ReindexError::RepeatedVariable(v.as_ref().to_string()));
        }
    }
    Ok(out)
}

/// Reads an assignment back through `vars`; `None` if some variable is
/// unassigned.
pub fn compose<V: Clone, S: AsRef<str>>(
    assignment: &BTreeMap<String, V>,
    vars: &[S],
) -> Option<Vec<V>> {
    vars.iter()
        .map(|v| assignment.get(v.as_ref()).cloned())
        .collect()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_term(self))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_atom(self))
    }
}

impl fmt::Display for Disjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_disjunct(self, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn free_vars_of_nested_term() {
        let t = Term::app("s", vec![Term::app("s", vec![v("x")])]);
        assert_eq!(t.free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn free_vars_drop_existentials() {
        let d = Disjunct::new(
            vec!["y".into()],
            vec![
                Atom::eq(v("x"), Term::app("s", vec![v("y")])),
                Atom::new("odd", vec![v("y")]),
            ],
        );
        assert_eq!(d.free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn free_vars_of_quotient_atom() {
        let a = Atom::new("q", vec![v("a"), v("b"), v("m"), v("u")]);
        let expect: BTreeSet<String> = ["a", "b", "m", "u"].iter().map(|s| s.to_string()).collect();
        assert_eq!(a.free_vars(), expect);
    }

    #[test]
    fn reindex_example_tuple() {
        let got = reindex(&["b", "c", "c"], &["x", "y", "z"]).unwrap();
        assert_eq!(got["x"], "b");
        assert_eq!(got["y"], "c");
        assert_eq!(got["z"], "c");
    }

    #[test]
    fn reindex_empty() {
        let got = reindex::<i32, &str>(&[], &[]).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn reindex_errors() {
        assert_eq!(
            reindex(&[1, 2], &["x"]),
            Err(ReindexError::LengthMismatch { tuple: 2, vars: 1 })
        );
        assert_eq!(
            reindex(&[1, 2], &["x", "x"]),
            Err(ReindexError::RepeatedVariable("x".into()))
        );
    }

    #[test]
    fn signature_reserved_and_conflicts() {
        let mut sig = Signature::new();
        assert_eq!(sig.predicate_arity("="), Some(2));
        assert_eq!(sig.predicate_arity("true"), Some(0));
        assert!(matches!(
            sig.add_predicate("=", 2),
            Err(SignatureError::Reserved(_))
        ));
        sig.add_constant("nil").unwrap();
        assert!(matches!(
            sig.add_function("nil", 2),
            Err(SignatureError::ClassConflict { .. })
        ));
        assert!(matches!(
            sig.add_function("f", 0),
            Err(SignatureError::ZeroArityFunction(_))
        ));
        sig.add_predicate("p", 1).unwrap();
        assert!(sig.add_predicate("p", 1).is_ok());
        assert!(matches!(
            sig.add_predicate("p", 2),
            Err(SignatureError::ConflictingArity { .. })
        ));
    }

    #[test]
    fn second_clause_is_merged_with_renaming() {
        let mut sig = Signature::new();
        sig.add_predicate("p", 1).unwrap();
        sig.add_predicate("r", 2).unwrap();
        let mut prog = Program::new(sig);
        prog.add_clause(Clause::new(
            Atom::new("p", vec![v("x")]),
            vec![Disjunct::new(vec![], vec![Atom::eq(v("x"), v("x"))])],
        ))
        .unwrap();
        // p(y) <- exists x. r(y, x)  -- the existential x must be renamed apart
        prog.add_clause(Clause::new(
            Atom::new("p", vec![v("y")]),
            vec![Disjunct::new(
                vec!["x".into()],
                vec![Atom::new("r", vec![v("y"), v("x")])],
            )],
        ))
        .unwrap();
        let c = prog.clause("p").unwrap();
        assert_eq!(c.body.0.len(), 2);
        let d = &c.body.0[1];
        assert_eq!(d.exists, vec!["x_1".to_string()]);
        assert_eq!(d.conjuncts[0].args, vec![v("x"), v("x_1")]);
    }
}
