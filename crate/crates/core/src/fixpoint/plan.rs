//! Binding analysis: orders each disjunct's conjuncts so that every
//! variable is bound by a solver, a generator or (on finite universes) an
//! enumeration before it is tested.

use std::collections::BTreeSet;
use std::fmt;

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::semantics::{CAtom, CBody, CPred, CTerm, Compiler, Structure};
use crate::syntax::{Disjunct, Program};

use super::naive::head_vars;
use super::FixpointError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlanOptions {
    /// Allow enumerating the universe for variables nothing else binds.
    /// Without it, such variables make the program not range-restricted.
    pub enumerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// `t1 = t2` with one side bound; the other side is matched against its
    /// value, binding its variables.
    Solver,
    /// A relation atom joined against the current relation.
    Generator,
    /// A fully bound atom, evaluated as a test.
    Filter,
    /// A variable ranging over the whole universe.
    Enumerate,
}

#[derive(Debug, Clone)]
pub(crate) enum Step {
    /// Match `atoms[atom].args[pattern]` against the value of the other side.
    Solve {
        atom: usize,
        pattern: usize,
    },
    Filter {
        atom: usize,
    },
    /// Join with a relation; `key` lists argument positions bound beforehand.
    Generate {
        atom: usize,
        key: Vec<usize>,
    },
    Enumerate {
        slot: usize,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct DisjunctPlan {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone)]
pub(crate) struct ClausePlan {
    pub pred: String,
    pub body: CBody,
    pub disjuncts: Vec<DisjunctPlan>,
}

/// Kind and target of each step of one disjunct.
pub type DisjunctSteps = Vec<(StepKind, String)>;

/// Evaluation order for every clause of a program.
#[derive(Debug, Clone)]
pub struct BindingPlan {
    pub(crate) clauses: Vec<ClausePlan>,
    pub(crate) views: Vec<(String, Vec<DisjunctSteps>)>,
}

impl BindingPlan {
    /// For predicate `q`, the steps of each disjunct: their kind and the
    /// atom or variable they act on.
    pub fn steps(&self, q: &str) -> Option<&[DisjunctSteps]> {
        self.views
            .iter()
            .find(|(p, _)| p == q)
            .map(|(_, v)| v.as_slice())
    }
}

impl fmt::Display for BindingPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, ds) in &self.views {
            for (r, steps) in ds.iter().enumerate() {
                write!(f, "{q}[{r}]:")?;
                for (k, what) in steps {
                    let tag = match k {
                        StepKind::Solver => "solve",
                        StepKind::Generator => "gen",
                        StepKind::Filter => "test",
                        StepKind::Enumerate => "enum",
                    };
                    write!(f, " {tag} {what};")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

fn fully_bound(t: &CTerm, bound: &BTreeSet<usize>) -> bool {
    match t {
        CTerm::Slot(i) => bound.contains(i),
        CTerm::Val(_) | CTerm::Undef => true,
        CTerm::App(_, args) => args.iter().all(|a| fully_bound(a, bound)),
    }
}

/// Whether matching a value against `t` determines all of its variables.
fn is_pattern(t: &CTerm, bound: &BTreeSet<usize>, s: &Structure) -> bool {
    match t {
        CTerm::Slot(_) | CTerm::Val(_) | CTerm::Undef => true,
        CTerm::App(f, args) => {
            fully_bound(t, bound)
                || (s.functions.is_invertible(f) && args.iter().all(|a| is_pattern(a, bound, s)))
        }
    }
}

fn bind_slots(t: &CTerm, bound: &mut BTreeSet<usize>) {
    let mut slots = Vec::new();
    t.collect_slots(&mut slots);
    bound.extend(slots);
}

fn plan_disjunct(
    atoms: &[CAtom],
    n_free: usize,
    exists: &[usize],
    s: &Structure,
    opts: PlanOptions,
) -> Result<Vec<Step>, usize> {
    let mut bound = BTreeSet::new();
    let mut done = vec![false; atoms.len()];
    let mut steps = Vec::new();
    let all_bound = |a: &CAtom, bound: &BTreeSet<usize>| a.slots.iter().all(|x| bound.contains(x));
    loop {
        let pending: Vec<usize> = (0..atoms.len()).filter(|&i| !done[i]).collect();
        if pending.is_empty() {
            break;
        }
        let solver = pending.iter().find_map(|&i| {
            let a = &atoms[i];
            if !matches!(a.pred, CPred::Eq) || all_bound(a, &bound) {
                return None;
            }
            (0..2).find_map(|side| {
                let other = &a.args[1 - side];
                (fully_bound(other, &bound) && is_pattern(&a.args[side], &bound, s))
                    .then_some((i, side))
            })
        });
        if let Some((i, side)) = solver {
            bind_slots(&atoms[i].args[side], &mut bound);
            steps.push(Step::Solve {
                atom: i,
                pattern: side,
            });
            done[i] = true;
            continue;
        }
        if let Some(&i) = pending.iter().find(|&&i| all_bound(&atoms[i], &bound)) {
            steps.push(Step::Filter { atom: i });
            done[i] = true;
            continue;
        }
        let generator = pending.iter().copied().find(|&i| {
            let a = &atoms[i];
            matches!(a.pred, CPred::Rel(_)) && a.args.iter().all(|t| is_pattern(t, &bound, s))
        });
        if let Some(i) = generator {
            let key = atoms[i]
                .args
                .iter()
                .enumerate()
                .filter(|(_, t)| fully_bound(t, &bound))
                .map(|(k, _)| k)
                .collect();
            for t in &atoms[i].args {
                bind_slots(t, &mut bound);
            }
            steps.push(Step::Generate { atom: i, key });
            done[i] = true;
            continue;
        }
        // nothing applies: enumerate a variable, preferring one that lets an
        // equation solve for its other side
        let enables_solver = pending.iter().find_map(|&i| {
            let a = &atoms[i];
            if !matches!(a.pred, CPred::Eq) {
                return None;
            }
            (0..2).find_map(|side| {
                if !is_pattern(&a.args[side], &bound, s) {
                    return None;
                }
                let mut src = Vec::new();
                a.args[1 - side].collect_slots(&mut src);
                src.into_iter().find(|x| !bound.contains(x))
            })
        });
        let slot = enables_solver
            .or_else(|| {
                pending
                    .iter()
                    .flat_map(|&i| atoms[i].slots.iter().copied())
                    .find(|x| !bound.contains(x))
            })
            .expect("some pending atom has an unbound variable");
        if !opts.enumerate {
            return Err(slot);
        }
        bound.insert(slot);
        steps.push(Step::Enumerate { slot });
    }
    // head variables this disjunct never mentions
    for slot in 0..n_free {
        if !bound.contains(&slot) {
            if !opts.enumerate {
                return Err(slot);
            }
            bound.insert(slot);
            steps.push(Step::Enumerate { slot });
        }
    }
    debug_assert!(exists.iter().all(|e| bound.contains(e)) || atoms.is_empty());
    Ok(steps)
}

/// Plans every clause of `p`. Fails with one `NotRangeRestricted`
/// diagnostic per disjunct that has a variable nothing can bind.
pub fn plan_bindings(
    p: &Program,
    s: &Structure,
    opts: PlanOptions,
) -> Result<BindingPlan, FixpointError> {
    let mut clauses = Vec::new();
    let mut views = Vec::new();
    let mut diags = Vec::new();
    for (q, c) in &p.clauses {
        let vars = head_vars(c);
        let body = Compiler::new(s).body(&vars, c.body.disjuncts())?;
        let mut disjuncts = Vec::new();
        let mut view = Vec::new();
        for (r, (cd, d)) in body.disjuncts.iter().zip(c.body.disjuncts()).enumerate() {
            match plan_disjunct(&cd.atoms, vars.len(), &cd.exists, s, opts) {
                Ok(steps) => {
                    view.push(describe(&steps, d, &body.names));
                    disjuncts.push(DisjunctPlan { steps });
                }
                Err(slot) => {
                    let var = &body.names[slot];
                    let span = d
                        .conjuncts
                        .iter()
                        .find(|a| a.vars_in_order().contains(&var.as_str()))
                        .and_then(|a| a.span.clone())
                        .or_else(|| c.head.span.clone());
                    diags.push(
                        Diagnostic::new(
                            DiagCode::NotRangeRestricted,
                            format!("variable `{var}` in disjunct {r} is never bound by a generator or an equation"),
                        )
                        .in_predicate(q.as_str())
                        .at(span),
                    );
                }
            }
        }
        views.push((q.clone(), view));
        clauses.push(ClausePlan {
            pred: q.clone(),
            body,
            disjuncts,
        });
    }
    if diags.is_empty() {
        Ok(BindingPlan { clauses, views })
    } else {
        Err(FixpointError::NotRangeRestricted(diags))
    }
}

fn describe(steps: &[Step], d: &Disjunct, names: &[String]) -> DisjunctSteps {
    steps
        .iter()
        .map(|st| match st {
            Step::Solve { atom, .. } => (StepKind::Solver, d.conjuncts[*atom].to_string()),
            Step::Filter { atom } => (StepKind::Filter, d.conjuncts[*atom].to_string()),
            Step::Generate { atom, .. } => (StepKind::Generator, d.conjuncts[*atom].to_string()),
            Step::Enumerate { slot } => (StepKind::Enumerate, names[*slot].clone()),
        })
        .collect()
}
