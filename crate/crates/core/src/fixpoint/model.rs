//! Model checking by comparing head and body relations clause by clause.

use crate::semantics::{relation_over, Assignment, Interpretation, Structure};
use crate::syntax::Program;

use super::naive::{head_vars, step_naive};
use super::FixpointError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelVerdict {
    pub holds: bool,
    /// On failure, a predicate and an assignment satisfying its body but
    /// not its head.
    pub witness: Option<(String, Assignment)>,
}

/// Whether `i` satisfies every clause of `p`: the body relation of each
/// clause must be contained in its head relation.
pub fn is_model(
    p: &Program,
    i: &Interpretation,
    s: &Structure,
) -> Result<ModelVerdict, FixpointError> {
    for (q, c) in &p.clauses {
        let vars = head_vars(c);
        let body = relation_over(&c.body, &vars, i, s)?;
        let head = relation_over(&c.head, &vars, i, s)?;
        if let Some(alpha) = body.difference(&head).next() {
            return Ok(ModelVerdict {
                holds: false,
                witness: Some((q.clone(), alpha.clone())),
            });
        }
    }
    Ok(ModelVerdict {
        holds: true,
        witness: None,
    })
}

/// Decides modelhood twice, by [`is_model`] and by `step(i) <= i`, and
/// fails with [`FixpointError::TheoremViolation`] if the answers differ.
pub fn check_model_fixpoint_equivalence(
    p: &Program,
    i: &Interpretation,
    s: &Structure,
) -> Result<bool, FixpointError> {
    let verdict = is_model(p, i, s)?;
    let stepped = step_naive(p, i, s)?;
    let below = stepped.leq(i)?;
    if verdict.holds != below {
        return Err(FixpointError::TheoremViolation {
            model: verdict,
            step_below: below,
        });
    }
    Ok(below)
}
