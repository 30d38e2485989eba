//! Immediate consequence, least-fixpoint iteration and model checking.

mod binding;
mod model;
mod naive;
mod plan;

use std::fmt;

use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::semantics::{EvalError, InterpError, Interpretation, Structure};
use crate::syntax::Program;

pub use binding::step_binding;
pub use model::{check_model_fixpoint_equivalence, is_model, ModelVerdict};
pub use naive::step_naive;
pub use plan::{plan_bindings, BindingPlan, DisjunctSteps, PlanOptions, StepKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixpointError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("program is not range-restricted: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    NotRangeRestricted(Vec<Diagnostic>),
    #[error("model check ({}) and step comparison ({step_below}) disagree", .model.holds)]
    TheoremViolation {
        model: ModelVerdict,
        step_below: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvaluatorKind {
    Naive,
    #[default]
    Binding,
}

impl EvaluatorKind {
    pub fn name(self) -> &'static str {
        match self {
            EvaluatorKind::Naive => "naive",
            EvaluatorKind::Binding => "binding",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointConfig {
    pub max_iterations: usize,
    /// Bound on the total number of tuples over all predicates.
    pub max_relation_size: usize,
    pub evaluator: EvaluatorKind,
    pub trace: bool,
}

impl Default for FixpointConfig {
    fn default() -> Self {
        FixpointConfig {
            max_iterations: 1000,
            max_relation_size: 1_000_000,
            evaluator: EvaluatorKind::Binding,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    ReachedFixpoint,
    IterationBudgetExhausted,
    SizeBudgetExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ReachedFixpoint => "reachedFixpoint",
            Status::IterationBudgetExhausted => "iterationBudgetExhausted",
            Status::SizeBudgetExhausted => "sizeBudgetExhausted",
        })
    }
}

#[derive(Debug, Clone)]
pub struct FixpointResult {
    pub interpretation: Interpretation,
    /// Rounds performed, including the final one that added nothing.
    pub iterations: usize,
    pub status: Status,
    /// For each round, the number of new tuples per clause-defined predicate.
    pub deltas: Vec<Vec<(String, usize)>>,
    /// `round=<n> pred=<q> new=<k> total=<m>` lines, when tracing.
    pub trace: Vec<String>,
}

impl FixpointResult {
    pub fn reached_fixpoint(&self) -> bool {
        self.status == Status::ReachedFixpoint
    }
}

/// A reusable step function for one program and structure.
pub struct Stepper<'a> {
    p: &'a Program,
    s: &'a Structure,
    plan: Option<BindingPlan>,
}

impl<'a> Stepper<'a> {
    /// Plans the program once when the binding evaluator is requested.
    /// Finite universes allow enumeration of otherwise unbound variables.
    pub fn new(
        p: &'a Program,
        s: &'a Structure,
        kind: EvaluatorKind,
    ) -> Result<Self, FixpointError> {
        let plan = match kind {
            EvaluatorKind::Naive => None,
            EvaluatorKind::Binding => Some(plan_bindings(
                p,
                s,
                PlanOptions {
                    enumerate: s.domain.is_enumerable(),
                },
            )?),
        };
        Ok(Stepper { p, s, plan })
    }

    pub fn step(&self, i: &Interpretation) -> Result<Interpretation, FixpointError> {
        match &self.plan {
            Some(plan) => step_binding(plan, i, self.s),
            None => step_naive(self.p, i, self.s),
        }
    }
}

/// Least fixpoint from the bottom interpretation, with clause-defined
/// predicates empty and extensional relations taken from `base`.
pub fn lfp_from(
    p: &Program,
    s: &Structure,
    base: &Interpretation,
    cfg: &FixpointConfig,
) -> Result<FixpointResult, FixpointError> {
    let stepper = Stepper::new(p, s, cfg.evaluator)?;
    let mut i = Interpretation::bottom(p, s);
    for (q, _) in base.predicates() {
        if i.has(q) && p.clause(q).is_none() {
            i.set_relation(q, base.relation(q).cloned().unwrap_or_default())?;
        }
    }
    let mut deltas = Vec::new();
    let mut trace = Vec::new();
    let mut status = Status::IterationBudgetExhausted;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        let next = stepper.step(&i)?;
        let mut round = Vec::new();
        let mut added = 0;
        for q in p.clauses.keys() {
            let new_rel = next
                .relation(q)
                .expect("step covers every defined predicate");
            let fresh = new_rel.iter().filter(|t| !i.contains(q, t)).count();
            added += fresh;
            if cfg.trace {
                trace.push(format!(
                    "round={iterations} pred={q} new={fresh} total={}",
                    new_rel.len()
                ));
            }
            round.push((q.clone(), fresh));
        }
        deltas.push(round);
        i = next;
        if added == 0 {
            status = Status::ReachedFixpoint;
            break;
        }
        if i.size() > cfg.max_relation_size {
            status = Status::SizeBudgetExhausted;
            break;
        }
    }
    Ok(FixpointResult {
        interpretation: i,
        iterations,
        status,
        deltas,
        trace,
    })
}

/// Least fixpoint from the bottom interpretation with no extensional data.
pub fn lfp(
    p: &Program,
    s: &Structure,
    cfg: &FixpointConfig,
) -> Result<FixpointResult, FixpointError> {
    lfp_from(p, s, &Interpretation::default(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;
    use crate::semantics::{Domain, LiteralMode, Value};

    const EVEN_ODD: &str = "func s/1; pred even/1, odd/1;
        even(x) <- x = 0 \\/ exists y. x = s(y) /\\ odd(y);
        odd(x) <- x = s(0) \\/ exists y. x = s(y) /\\ even(y);";

    fn nat(n: i64) -> Structure {
        let p = parse_program(EVEN_ODD).unwrap();
        Structure::for_signature(
            &p.signature,
            Domain::finite((0..=n).map(Value::from)),
            LiteralMode::Exact,
        )
        .unwrap()
    }

    fn ints(i: &Interpretation, q: &str) -> Vec<i64> {
        i.relation(q)
            .unwrap()
            .iter()
            .map(|t| i64::try_from(t[0].as_int().unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn single_steps() {
        let p = parse_program(EVEN_ODD).unwrap();
        let s = nat(5);
        let one = step_naive(&p, &Interpretation::bottom(&p, &s), &s).unwrap();
        assert_eq!(ints(&one, "even"), [0]);
        assert_eq!(ints(&one, "odd"), [1]);
        let two = step_naive(&p, &one, &s).unwrap();
        // both components read the previous round: odd still lacks 3
        assert_eq!(ints(&two, "even"), [0, 2]);
        assert_eq!(ints(&two, "odd"), [1]);
        let three = step_naive(&p, &two, &s).unwrap();
        assert_eq!(ints(&three, "odd"), [1, 3]);
    }

    #[test]
    fn nullary_and_empty_programs() {
        let p = parse_program("pred p/0; p <- true;").unwrap();
        let s = Structure::for_signature(
            &p.signature,
            Domain::finite([Value::int(0)]),
            LiteralMode::Exact,
        )
        .unwrap();
        let one = step_naive(&p, &Interpretation::bottom(&p, &s), &s).unwrap();
        assert_eq!(one.relation("p").unwrap().len(), 1);
        let e = parse_program("").unwrap();
        let i = Interpretation::default();
        let plan = plan_bindings(&e, &s, PlanOptions::default()).unwrap();
        assert_eq!(step_binding(&plan, &i, &s).unwrap(), i);
    }

    #[test]
    fn plans_put_generators_before_solvers() {
        let p = parse_program(EVEN_ODD).unwrap();
        let plan = plan_bindings(&p, &nat(5), PlanOptions::default()).unwrap();
        let even = plan.steps("even").unwrap();
        assert_eq!(even[0], vec![(StepKind::Solver, "x = 0".to_string())]);
        assert_eq!(
            even[1],
            vec![
                (StepKind::Generator, "odd(y)".to_string()),
                (StepKind::Solver, "x = s(y)".to_string())
            ]
        );
    }

    #[test]
    fn unbindable_variables_are_reported() {
        let p = parse_program("extern pred </2; pred p/1; p(x) <- exists y. x < y;").unwrap();
        let s = Structure::for_signature(
            &p.signature,
            Domain::finite((0..3).map(Value::from)),
            LiteralMode::Exact,
        )
        .unwrap();
        match plan_bindings(&p, &s, PlanOptions::default()) {
            Err(FixpointError::NotRangeRestricted(d)) => {
                assert_eq!(d.len(), 1);
                assert!(d[0].message.contains("`x`"), "{}", d[0]);
            }
            other => panic!("{other:?}"),
        }
        assert!(plan_bindings(&p, &s, PlanOptions { enumerate: true }).is_ok());
    }

    #[test]
    fn even_odd_fixpoint() {
        let p = parse_program(EVEN_ODD).unwrap();
        let s = nat(20);
        for evaluator in [EvaluatorKind::Naive, EvaluatorKind::Binding] {
            let cfg = FixpointConfig {
                evaluator,
                trace: true,
                ..FixpointConfig::default()
            };
            let r = lfp(&p, &s, &cfg).unwrap();
            assert!(r.reached_fixpoint());
            // E' = {0} u s(O), O' = {1} u s(E) from empty sets, cut at 20
            type Set = std::collections::BTreeSet<i64>;
            let (mut e, mut o, mut rounds) = (Set::new(), Set::new(), 0);
            loop {
                rounds += 1;
                let e2: Set = std::iter::once(0)
                    .chain(o.iter().map(|x| x + 1))
                    .filter(|x| *x <= 20)
                    .collect();
                let o2: Set = std::iter::once(1)
                    .chain(e.iter().map(|x| x + 1))
                    .filter(|x| *x <= 20)
                    .collect();
                if (&e2, &o2) == (&e, &o) {
                    break;
                }
                (e, o) = (e2, o2);
            }
            assert_eq!(r.iterations, rounds);
            assert_eq!(rounds, 21);
            assert_eq!(
                ints(&r.interpretation, "even"),
                (0..=20).step_by(2).collect::<Vec<_>>()
            );
            assert_eq!(
                ints(&r.interpretation, "odd"),
                (1..20).step_by(2).collect::<Vec<_>>()
            );
            assert_eq!(r.trace[0], "round=1 pred=even new=1 total=1");
            assert_eq!(r.trace.len(), 2 * r.iterations);
            assert!(is_model(&p, &r.interpretation, &s).unwrap().holds);
        }
    }

    #[test]
    fn self_loop_is_already_fixed() {
        let p = parse_program("pred p/1; p(x) <- p(x);").unwrap();
        let s = Structure::for_signature(
            &p.signature,
            Domain::finite([Value::int(0)]),
            LiteralMode::Exact,
        )
        .unwrap();
        let r = lfp(&p, &s, &FixpointConfig::default()).unwrap();
        assert!(r.reached_fixpoint());
        assert_eq!(r.iterations, 1);
        assert!(r.interpretation.relation("p").unwrap().is_empty());
    }

    #[test]
    fn witnesses() {
        let p = parse_program(EVEN_ODD).unwrap();
        let s = nat(5);
        let mut i = Interpretation::bottom(&p, &s);
        i.insert("even", vec![Value::int(0)]).unwrap();
        let v = is_model(&p, &i, &s).unwrap();
        assert!(!v.holds);
        let (q, alpha) = v.witness.unwrap();
        assert_eq!(q, "odd");
        assert_eq!(alpha["x"], Value::int(1));
        let full = Interpretation::full(&p, &s).unwrap();
        assert!(is_model(&p, &full, &s).unwrap().holds);
        assert!(
            !check_model_fixpoint_equivalence(&p, &Interpretation::bottom(&p, &s), &s).unwrap()
        );
    }
}
