//! Cross-check of the procedural reading against the least fixpoint.

use std::fmt;

use crate::fixpoint::{lfp_from, FixpointConfig};
use crate::semantics::{Interpretation, Structure, Value};
use crate::syntax::Program;

use super::exec::{execute_with_data, ExecConfig, Outcome};
use super::ir::ProcUnit;
use super::lower::lower;
use super::modes::{Mode, ModeDecl};
use super::TranspileError;

/// A call with values for the input positions only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub pred: String,
    pub inputs: Vec<Value>,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.inputs.iter().map(Value::to_string).collect();
        write!(f, "{}({})", self.pred, args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub query: Query,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgreementReport {
    pub checked: usize,
    pub successes: usize,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs every query on `u` and compares with `model`: a success must be
/// a tuple of the model, and a failure means no tuple of the model has
/// these inputs.
pub fn check_agreement(
    u: &ProcUnit,
    s: &Structure,
    model: &Interpretation,
    queries: &[Query],
    cfg: ExecConfig,
) -> AgreementReport {
    let mut report = AgreementReport::default();
    for q in queries {
        report.checked += 1;
        let mut disagree = |detail: String| {
            report.disagreements.push(Disagreement {
                query: q.clone(),
                detail,
            })
        };
        let Some(f) = u.function(&q.pred) else {
            disagree("no procedure".into());
            continue;
        };
        let modes: Vec<Mode> = f.modes().collect();
        let rel = model.relation(&q.pred).cloned().unwrap_or_default();
        let fits_inputs = |t: &Vec<Value>| {
            let mut ins = q.inputs.iter();
            t.iter()
                .zip(&modes)
                .all(|(v, m)| *m == Mode::Out || ins.next() == Some(v))
        };
        match execute_with_data(u, &q.pred, &q.inputs, s, Some(model), cfg) {
            Ok(run) => match run.outcome {
                Outcome::Success(outs) => {
                    let (mut ins, mut outs_it) = (q.inputs.iter(), outs.iter());
                    let tuple: Vec<Value> = modes
                        .iter()
                        .map(|m| match m {
                            Mode::In => ins.next(),
                            Mode::Out => outs_it.next(),
                        })
                        .map(|v| v.cloned().expect("as many values as positions"))
                        .collect();
                    if rel.contains(&tuple) {
                        report.successes += 1;
                    } else {
                        let shown: Vec<String> = tuple.iter().map(Value::to_string).collect();
                        disagree(format!(
                            "IR answered ({}) which is not in the fixpoint",
                            shown.join(", ")
                        ));
                    }
                }
                Outcome::Failure => {
                    if let Some(t) = rel.iter().find(|t| fits_inputs(t)) {
                        let shown: Vec<String> = t.iter().map(Value::to_string).collect();
                        disagree(format!(
                            "IR failed but the fixpoint holds ({})",
                            shown.join(", ")
                        ));
                    }
                }
            },
            Err(e) => disagree(e.to_string()),
        }
    }
    report
}

/// Lowers `p`, computes its least fixpoint over `s` (extensional data from
/// `data`) and checks the queries against it.
pub fn agree_with_fixpoint(
    p: &Program,
    modes: &ModeDecl,
    s: &Structure,
    data: &Interpretation,
    queries: &[Query],
) -> Result<AgreementReport, TranspileError> {
    let u = lower(p, modes, s)?;
    let fix = lfp_from(p, s, data, &FixpointConfig::default())?;
    if !fix.reached_fixpoint() {
        return Err(TranspileError::NoFixpoint(fix.status));
    }
    Ok(check_agreement(
        &u,
        s,
        &fix.interpretation,
        queries,
        ExecConfig::default(),
    ))
}
