//! Reference immediate-consequence step: enumerate every head tuple over
//! the universe and keep those whose body holds.

use crate::semantics::{for_each_tuple, Compiler, EvalError, Evaluator, Interpretation, Structure};
use crate::syntax::{reindex, Clause, Program};

use super::FixpointError;

/// Head variables of a valid clause.
pub(crate) fn head_vars(c: &Clause) -> Vec<String> {
    c.head_vars()
        .expect("valid clauses have variable heads")
        .into_iter()
        .map(str::to_string)
        .collect()
}

/// One application of the immediate-consequence operator by exhaustive
/// enumeration. Extensional relations pass through unchanged.
pub fn step_naive(
    p: &Program,
    i: &Interpretation,
    s: &Structure,
) -> Result<Interpretation, FixpointError> {
    let d = s
        .domain
        .values()
        .map_err(|_| EvalError::NonEnumerableDomain)?;
    let mut out = i.clone();
    for (q, c) in &p.clauses {
        let vars = head_vars(c);
        let body = Compiler::new(s).body(&vars, c.body.disjuncts())?;
        let ev = Evaluator {
            s,
            i,
            names: &body.names,
        };
        let mut rel = crate::semantics::Relation::new();
        let mut env = body.env();
        let mut err = None;
        for_each_tuple(d, vars.len(), &mut |t| {
            if err.is_some() {
                return;
            }
            // the body is read under the assignment t o vars^-1
            let alpha = reindex(t, &vars).expect("head variables are distinct");
            for (k, v) in vars.iter().enumerate() {
                env[k] = Some(alpha[v].clone());
            }
            match ev.body(&body, &mut env) {
                Ok(true) => {
                    rel.insert(t.to_vec());
                }
                Ok(false) => {}
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e.into());
        }
        out.set_relation(q, rel)?;
    }
    Ok(out)
}
