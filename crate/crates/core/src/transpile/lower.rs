//! Mode analysis and lowering. Both walk each disjunct with the same
//! dataflow: inputs start bound, and conjuncts are taken in source order
//! as soon as they can run.

use std::collections::BTreeSet;

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::parser::print_disjunct;
use crate::semantics::Structure;
use crate::syntax::{Atom, Clause, Disjunct, Program, Term, EQUALS, FALSE, TRUE};

use super::ir::{Branch, Cond, ProcFunction, ProcUnit, Stmt};
use super::modes::{Mode, ModeDecl};
use super::TranspileError;

struct Flow<'a> {
    p: &'a Program,
    modes: &'a ModeDecl,
    s: &'a Structure,
    pred: &'a str,
}

fn term_vars(t: &Term) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    t.for_each_var(&mut |v| {
        if !out.iter().any(|o| o == v) {
            out.push(v.to_string());
        }
    });
    out
}

fn bound_in(t: &Term, bound: &BTreeSet<String>) -> bool {
    term_vars(t).iter().all(|v| bound.contains(v))
}

impl Flow<'_> {
    fn is_pattern(&self, t: &Term, bound: &BTreeSet<String>) -> bool {
        match t {
            Term::Var(_) | Term::Const(_) => true,
            Term::App(f, args) => {
                bound_in(t, bound)
                    || (self.s.functions.is_invertible(f)
                        && args.iter().all(|a| self.is_pattern(a, bound)))
            }
        }
    }

    fn diag(&self, code: DiagCode, a: &Atom, msg: String) -> Diagnostic {
        Diagnostic::new(code, msg)
            .in_predicate(self.pred)
            .at(a.span.clone())
    }

    fn test(a: &Atom) -> Stmt {
        Stmt::Test(Cond {
            pred: a.pred.clone(),
            args: a.args.clone(),
        })
    }

    /// The statement for `a` if it can run now.
    fn classify(&self, a: &Atom, bound: &BTreeSet<String>) -> Option<Result<Stmt, Diagnostic>> {
        let all_bound = a.args.iter().all(|t| bound_in(t, bound));
        match a.pred.as_str() {
            EQUALS => {
                let (l, r) = (&a.args[0], &a.args[1]);
                if all_bound {
                    return Some(Ok(Self::test(a)));
                }
                for (target, source) in [(l, r), (r, l)] {
                    if !bound_in(source, bound) {
                        continue;
                    }
                    if let Term::Var(v) = target {
                        return Some(Ok(Stmt::Assign {
                            var: v.clone(),
                            expr: source.clone(),
                        }));
                    }
                    if self.is_pattern(target, bound) {
                        let binds = term_vars(target)
                            .into_iter()
                            .filter(|v| !bound.contains(v))
                            .collect();
                        return Some(Ok(Stmt::Match {
                            value: source.clone(),
                            pattern: target.clone(),
                            binds,
                        }));
                    }
                }
                None
            }
            TRUE | FALSE => Some(Ok(Self::test(a))),
            q if self.p.clause(q).is_none() => all_bound.then(|| Ok(Self::test(a))),
            q => {
                let Some(ms) = self.modes.get(q) else {
                    return Some(Err(self.diag(
                        DiagCode::MissingMode,
                        a,
                        format!("no mode declared for `{q}`"),
                    )));
                };
                if ms.len() != a.args.len() {
                    return Some(Err(self.diag(
                        DiagCode::ModeArityMismatch,
                        a,
                        format!(
                            "mode for `{q}` has {} positions, the call has {}",
                            ms.len(),
                            a.args.len()
                        ),
                    )));
                }
                let ins_bound = a
                    .args
                    .iter()
                    .zip(ms)
                    .all(|(t, m)| *m == Mode::Out || bound_in(t, bound));
                if !ins_bound {
                    return None;
                }
                let mut outs = BTreeSet::new();
                for (t, m) in a.args.iter().zip(ms) {
                    if *m == Mode::In {
                        continue;
                    }
                    match t {
                        Term::Var(v) if bound.contains(v) || !outs.insert(v.clone()) => {
                            return Some(Err(self.diag(
                                DiagCode::OutputArgumentBound,
                                a,
                                format!("`{v}` is already bound but sits at an output position of `{q}`"),
                            )))
                        }
                        Term::Var(_) => {}
                        _ => {
                            return Some(Err(self.diag(
                                DiagCode::OutputArgumentNotVariable,
                                a,
                                format!("output argument `{t}` of `{q}` is not a variable"),
                            )))
                        }
                    }
                }
                Some(Ok(Stmt::Call {
                    pred: q.to_string(),
                    args: a.args.clone(),
                    modes: ms.to_vec(),
                }))
            }
        }
    }

    fn branch(
        &self,
        c: &Clause,
        params: &[(String, Mode)],
        r: usize,
        d: &Disjunct,
    ) -> Result<Branch, Diagnostic> {
        let mut bound: BTreeSet<String> = params
            .iter()
            .filter(|(_, m)| *m == Mode::In)
            .map(|(v, _)| v.clone())
            .collect();
        let mut pending: Vec<&Atom> = d.conjuncts.iter().collect();
        let mut steps = Vec::new();
        while !pending.is_empty() {
            let next = pending
                .iter()
                .enumerate()
                .find_map(|(k, a)| self.classify(a, &bound).map(|st| (k, st)));
            let Some((k, st)) = next else {
                let a = pending[0];
                let var = a
                    .vars_in_order()
                    .into_iter()
                    .find(|v| !bound.contains(*v))
                    .unwrap_or_default()
                    .to_string();
                return Err(self.diag(
                    DiagCode::UnboundVariable,
                    a,
                    format!("`{var}` is never bound before `{a}` in disjunct {r}"),
                ));
            };
            let st = st?;
            match &st {
                Stmt::Assign { var, .. } => {
                    bound.insert(var.clone());
                }
                Stmt::Match { binds, .. } => bound.extend(binds.iter().cloned()),
                Stmt::Call { args, modes, .. } => {
                    for (t, m) in args.iter().zip(modes) {
                        if *m == Mode::Out {
                            bound.extend(term_vars(t));
                        }
                    }
                }
                Stmt::Test(_) => {}
            }
            steps.push(st);
            pending.remove(k);
        }
        if let Some((v, _)) = params
            .iter()
            .find(|(v, m)| *m == Mode::Out && !bound.contains(v))
        {
            return Err(Diagnostic::new(
                DiagCode::UnboundOutput,
                format!("output `{v}` is not bound by disjunct {r}"),
            )
            .in_predicate(self.pred)
            .at(c.head.span.clone()));
        }
        let lead = steps
            .iter()
            .take_while(|s| matches!(s, Stmt::Test(_)))
            .count();
        let guard = steps
            .drain(..lead)
            .map(|s| match s {
                Stmt::Test(c) => c,
                _ => unreachable!(),
            })
            .collect();
        Ok(Branch {
            disjunct: r,
            origin: print_disjunct(d, false),
            guard,
            locals: d.exists.clone(),
            steps,
        })
    }
}

fn lower_all(p: &Program, modes: &ModeDecl, s: &Structure) -> (ProcUnit, Vec<Diagnostic>) {
    let mut diags = modes.check_against(p);
    let mut unit = ProcUnit::default();
    for (q, c) in &p.clauses {
        let flow = Flow {
            p,
            modes,
            s,
            pred: q,
        };
        let Some(ms) = modes.get(q) else {
            diags.push(
                Diagnostic::new(DiagCode::MissingMode, format!("no mode declared for `{q}`"))
                    .in_predicate(q.as_str())
                    .at(c.head.span.clone()),
            );
            continue;
        };
        let vars = c.head_vars().expect("valid clauses have variable heads");
        if ms.len() != vars.len() {
            continue;
        }
        let params: Vec<(String, Mode)> = vars
            .iter()
            .map(|v| v.to_string())
            .zip(ms.iter().copied())
            .collect();
        let mut branches = Vec::new();
        for (r, d) in c.body.disjuncts().iter().enumerate() {
            match flow.branch(c, &params, r, d) {
                Ok(b) => branches.push(b),
                Err(e) => diags.push(e),
            }
        }
        unit.functions.push(ProcFunction {
            name: q.clone(),
            params,
            branches,
        });
    }
    (unit, diags)
}

/// Dataflow diagnostics for every clause of `p` under `modes`. Empty when
/// the program can be lowered.
pub fn mode_check(p: &Program, modes: &ModeDecl, s: &Structure) -> Vec<Diagnostic> {
    lower_all(p, modes, s).1
}

/// One function per clause, one branch per disjunct in source order.
pub fn lower(p: &Program, modes: &ModeDecl, s: &Structure) -> Result<ProcUnit, TranspileError> {
    let (unit, diags) = lower_all(p, modes, s);
    if diags.is_empty() {
        Ok(unit)
    } else {
        Err(TranspileError::Modes(diags))
    }
}
