//! Structural validation of relational programs.

use std::collections::BTreeSet;

use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};
use crate::syntax::{is_reserved_predicate, Atom, Clause, FreeVars, Program, Signature, Term};

/// Checks every clause and program invariant. An empty result means the
/// program is well formed. Diagnostics come out in clause order.
pub fn validate(program: &Program) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let sig = &program.signature;
    for (key, clause) in &program.clauses {
        let pred = clause.pred();
        let here = |code, msg: String| {
            Diagnostic::new(code, msg)
                .in_predicate(pred)
                .at(clause.head.span.clone())
        };
        if key != pred {
            out.push(here(
                DiagCode::ClauseKeyMismatch,
                format!("clause for `{pred}` is stored under `{key}`"),
            ));
        }
        if is_reserved_predicate(pred) {
            out.push(here(
                DiagCode::ClauseForReserved,
                format!("`{pred}` is built in and cannot be defined"),
            ));
        } else if sig.is_extensional(pred) {
            out.push(here(
                DiagCode::ClauseForExtensional,
                format!("`{pred}` is extensional and cannot have a clause"),
            ));
        }
        validate_clause(sig, clause, &mut out);
    }
    for (key, clause) in &program.clauses {
        for d in clause.body.disjuncts() {
            for atom in &d.conjuncts {
                let p = atom.pred.as_str();
                if sig.predicate_arity(p).is_none()
                    || is_reserved_predicate(p)
                    || sig.is_extensional(p)
                {
                    continue;
                }
                if !program.clauses.contains_key(p) {
                    out.push(
                        Diagnostic::new(
                            DiagCode::UndefinedPredicate,
                            format!("`{p}` has no clause and is not declared extern"),
                        )
                        .in_predicate(key.as_str())
                        .at(atom.span.clone()),
                    );
                }
            }
        }
    }
    out
}

/// Checks one clause against the signature, independently of the rest of
/// the program.
pub fn validate_clause(sig: &Signature, clause: &Clause, out: &mut Vec<Diagnostic>) {
    let pred = clause.pred();
    let span = clause.head.span.clone().or_else(|| clause.span.clone());
    let diag = |code, msg: String, span: Option<SourceSpan>| {
        Diagnostic::new(code, msg).in_predicate(pred).at(span)
    };

    check_atom(sig, &clause.head, pred, out);

    let mut head_vars = BTreeSet::new();
    for (i, arg) in clause.head.args.iter().enumerate() {
        match arg {
            Term::Var(v) => {
                if !head_vars.insert(v.clone()) {
                    out.push(diag(
                        DiagCode::RepeatedHeadVariable,
                        format!("head variable `{v}` is repeated"),
                        span.clone(),
                    ));
                }
            }
            other => out.push(diag(
                DiagCode::NonVariableHeadArgument,
                format!("head argument {i} is `{other}`, not a variable"),
                span.clone(),
            )),
        }
    }

    if clause.body.disjuncts().is_empty() {
        out.push(diag(
            DiagCode::EmptyBody,
            "clause body has no disjuncts".into(),
            span.clone(),
        ));
    }

    for (r, d) in clause.body.disjuncts().iter().enumerate() {
        let dspan = d
            .conjuncts
            .first()
            .and_then(|a| a.span.clone())
            .or_else(|| span.clone());
        if d.conjuncts.is_empty() {
            out.push(diag(
                DiagCode::EmptyDisjunct,
                format!("disjunct {r} has no conjuncts"),
                dspan.clone(),
            ));
        }
        for atom in &d.conjuncts {
            check_atom(sig, atom, pred, out);
        }
        let used = d.all_vars();
        let mut seen = BTreeSet::new();
        for e in &d.exists {
            if !seen.insert(e) {
                out.push(diag(
                    DiagCode::DuplicateExistential,
                    format!("`{e}` is quantified twice in disjunct {r}"),
                    dspan.clone(),
                ));
            }
            if head_vars.contains(e) {
                out.push(diag(
                    DiagCode::ExistentialShadowsHead,
                    format!("existential `{e}` shadows a head variable"),
                    dspan.clone(),
                ));
            } else if !used.contains(e) {
                out.push(diag(
                    DiagCode::UnusedExistential,
                    format!("existential `{e}` does not occur in disjunct {r}"),
                    dspan.clone(),
                ));
            }
        }
        for v in d.free_vars() {
            if !head_vars.contains(&v) {
                let at = d
                    .conjuncts
                    .iter()
                    .find(|a| a.free_vars().contains(&v))
                    .and_then(|a| a.span.clone())
                    .or_else(|| dspan.clone());
                out.push(diag(
                    DiagCode::UnquantifiedBodyVariable,
                    format!("`{v}` occurs in disjunct {r} but is neither a head variable nor quantified"),
                    at,
                ));
            }
        }
    }

    if !clause.body.disjuncts().is_empty() {
        let body_free = clause.body.free_vars();
        for v in &head_vars {
            if !body_free.contains(v) {
                out.push(diag(
                    DiagCode::HeadVariableNotInBody,
                    format!("head variable `{v}` does not occur free in the body"),
                    span.clone(),
                ));
            }
        }
    }
}

fn check_atom(sig: &Signature, atom: &Atom, pred: &str, out: &mut Vec<Diagnostic>) {
    let diag = |code, msg: String| {
        Diagnostic::new(code, msg)
            .in_predicate(pred)
            .at(atom.span.clone())
    };
    match sig.predicate_arity(&atom.pred) {
        None => out.push(diag(
            DiagCode::UndeclaredPredicate,
            format!("predicate `{}` is not declared", atom.pred),
        )),
        Some(k) if k != atom.args.len() => out.push(diag(
            DiagCode::ArityMismatch,
            format!(
                "`{}` has arity {k} but is applied to {} arguments",
                atom.pred,
                atom.args.len()
            ),
        )),
        Some(_) => {}
    }
    for t in &atom.args {
        check_term(sig, t, &mut |code, msg| out.push(diag(code, msg)));
    }
}

fn check_term(sig: &Signature, t: &Term, report: &mut impl FnMut(DiagCode, String)) {
    match t {
        Term::Var(_) => {}
        Term::Const(c) => {
            if !sig.is_constant(c) {
                report(
                    DiagCode::UndeclaredConstant,
                    format!("constant `{c}` is not declared"),
                );
            }
        }
        Term::App(f, args) => {
            match sig.function_arity(f) {
                None => report(
                    DiagCode::UndeclaredFunction,
                    format!("function `{f}` is not declared"),
                ),
                Some(k) if k != args.len() => report(
                    DiagCode::ArityMismatch,
                    format!(
                        "`{f}` has arity {k} but is applied to {} arguments",
                        args.len()
                    ),
                ),
                Some(_) => {}
            }
            for a in args {
                check_term(sig, a, report);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Disjunct;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn even_odd() -> Program {
        let mut sig = Signature::new();
        sig.add_constant("0").unwrap();
        sig.add_function("s", 1).unwrap();
        sig.add_predicate("even", 1).unwrap();
        sig.add_predicate("odd", 1).unwrap();
        let mut p = Program::new(sig);
        for (q, other) in [("even", "odd"), ("odd", "even")] {
            let mut body = Vec::new();
            if q == "even" {
                body.push(Disjunct::new(
                    vec![],
                    vec![Atom::eq(v("x"), Term::constant("0"))],
                ));
            }
            body.push(Disjunct::new(
                vec!["y".into()],
                vec![
                    Atom::eq(v("x"), Term::app("s", vec![v("y")])),
                    Atom::new(other, vec![v("y")]),
                ],
            ));
            p.add_clause(Clause::new(Atom::new(q, vec![v("x")]), body))
                .unwrap();
        }
        p
    }

    fn codes(p: &Program) -> Vec<DiagCode> {
        validate(p).into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn even_odd_is_valid() {
        assert!(validate(&even_odd()).is_empty());
    }

    #[test]
    fn repeated_head_variable() {
        let mut p = even_odd();
        p.signature.add_predicate("p", 2).unwrap();
        p.clauses.insert(
            "p".into(),
            Clause::new(
                Atom::new("p", vec![v("x"), v("x")]),
                vec![Disjunct::new(
                    vec![],
                    vec![Atom::eq(v("x"), Term::constant("0"))],
                )],
            ),
        );
        assert_eq!(codes(&p), vec![DiagCode::RepeatedHeadVariable]);
    }

    #[test]
    fn unquantified_body_variable() {
        let mut p = even_odd();
        p.signature.add_predicate("p", 1).unwrap();
        p.signature.add_extensional("r", 2).unwrap();
        p.clauses.insert(
            "p".into(),
            Clause::new(
                Atom::new("p", vec![v("x")]),
                vec![Disjunct::new(
                    vec![],
                    vec![Atom::new("r", vec![v("x"), v("y")])],
                )],
            ),
        );
        assert_eq!(codes(&p), vec![DiagCode::UnquantifiedBodyVariable]);
    }

    #[test]
    fn shape_errors() {
        let mut sig = Signature::new();
        sig.add_predicate("p", 1).unwrap();
        sig.add_constant("c").unwrap();
        let mut p = Program::new(sig);
        p.clauses.insert(
            "p".into(),
            Clause::new(
                Atom::new("p", vec![v("x")]),
                vec![
                    Disjunct::new(
                        vec!["z".into()],
                        vec![Atom::eq(v("x"), Term::constant("c"))],
                    ),
                    Disjunct::new(
                        vec!["x".into()],
                        vec![Atom::eq(v("x"), Term::constant("d"))],
                    ),
                    Disjunct::new(vec![], vec![Atom::new("q", vec![v("x")])]),
                ],
            ),
        );
        let got = codes(&p);
        for c in [
            DiagCode::UnusedExistential,
            DiagCode::ExistentialShadowsHead,
            DiagCode::UndeclaredConstant,
            DiagCode::UndeclaredPredicate,
        ] {
            assert!(got.contains(&c), "{c} missing from {got:?}");
        }
    }

    #[test]
    fn head_variable_must_occur_in_body() {
        let mut sig = Signature::new();
        sig.add_predicate("p", 2).unwrap();
        let mut p = Program::new(sig);
        p.clauses.insert(
            "p".into(),
            Clause::new(
                Atom::new("p", vec![v("x"), v("y")]),
                vec![Disjunct::new(vec![], vec![Atom::eq(v("x"), v("x"))])],
            ),
        );
        assert_eq!(codes(&p), vec![DiagCode::HeadVariableNotInBody]);
    }

    #[test]
    fn undefined_and_extensional_predicates() {
        let mut sig = Signature::new();
        sig.add_predicate("p", 1).unwrap();
        sig.add_predicate("q", 1).unwrap();
        sig.add_extensional("e", 1).unwrap();
        let mut p = Program::new(sig);
        p.clauses.insert(
            "p".into(),
            Clause::new(
                Atom::new("p", vec![v("x")]),
                vec![Disjunct::new(
                    vec![],
                    vec![Atom::new("q", vec![v("x")]), Atom::new("e", vec![v("x")])],
                )],
            ),
        );
        assert_eq!(codes(&p), vec![DiagCode::UndefinedPredicate]);
        p.clauses.insert(
            "e".into(),
            Clause::new(
                Atom::new("e", vec![v("x")]),
                vec![Disjunct::new(vec![], vec![Atom::new("p", vec![v("x")])])],
            ),
        );
        assert!(codes(&p).contains(&DiagCode::ClauseForExtensional));
    }

    #[test]
    fn empty_program_is_valid() {
        assert!(validate(&Program::new(Signature::new())).is_empty());
    }
}
