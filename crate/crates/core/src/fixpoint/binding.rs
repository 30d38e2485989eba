//! Immediate-consequence step driven by a binding plan: relations are
//! joined through hash indexes instead of enumerating the universe.

use std::collections::HashMap;

use crate::semantics::{
    atom_holds, eval_cterm, CAtom, CPred, CTerm, Interpretation, Relation, Structure, Tuple, Value,
};

use super::plan::{BindingPlan, ClausePlan, Step};
use super::FixpointError;

type Index<'a> = HashMap<Vec<Value>, Vec<&'a Tuple>>;

struct Indexes<'a> {
    by_key: HashMap<(String, Vec<usize>), Index<'a>>,
}

impl<'a> Indexes<'a> {
    fn build(plan: &BindingPlan, i: &'a Interpretation) -> Self {
        let mut by_key = HashMap::new();
        for c in &plan.clauses {
            let cd = &c.body.disjuncts;
            for (d, dp) in cd.iter().zip(&c.disjuncts) {
                for st in &dp.steps {
                    let Step::Generate { atom, key } = st else {
                        continue;
                    };
                    let CPred::Rel(q) = &d.atoms[*atom].pred else {
                        continue;
                    };
                    by_key.entry((q.clone(), key.clone())).or_insert_with(|| {
                        let mut idx: Index<'a> = HashMap::new();
                        if let Some(rel) = i.relation(q) {
                            for t in rel {
                                idx.entry(key.iter().map(|&k| t[k].clone()).collect())
                                    .or_default()
                                    .push(t);
                            }
                        }
                        idx
                    });
                }
            }
        }
        Indexes { by_key }
    }
}

struct Run<'a> {
    s: &'a Structure,
    i: &'a Interpretation,
    idx: &'a Indexes<'a>,
    atoms: &'a [CAtom],
    steps: &'a [Step],
    k: usize,
}

impl Run<'_> {
    fn bind(
        &self,
        slot: usize,
        v: Value,
        env: &mut [Option<Value>],
        trail: &mut Vec<usize>,
    ) -> bool {
        if !self.s.domain.contains(&v) {
            return false;
        }
        env[slot] = Some(v);
        trail.push(slot);
        true
    }

    /// Matches `v` against `t`, binding its unbound slots.
    fn matches(
        &self,
        t: &CTerm,
        v: &Value,
        env: &mut [Option<Value>],
        trail: &mut Vec<usize>,
    ) -> bool {
        match t {
            CTerm::Slot(x) => match &env[*x] {
                Some(w) => w == v,
                None => self.bind(*x, v.clone(), env, trail),
            },
            CTerm::Val(w) => w == v,
            CTerm::Undef => false,
            CTerm::App(f, args) => {
                if let Ok(w) = eval_cterm(t, self.s, env) {
                    return w.as_ref() == Some(v);
                }
                if self.s.domain.is_closed() && !self.s.domain.contains(v) {
                    return false;
                }
                match self.s.functions.invert(f, v) {
                    Some(parts) => args
                        .iter()
                        .zip(&parts)
                        .all(|(a, p)| self.matches(a, p, env, trail)),
                    None => false,
                }
            }
        }
    }

    fn undo(env: &mut [Option<Value>], trail: &mut Vec<usize>, mark: usize) {
        for slot in trail.drain(mark..) {
            env[slot] = None;
        }
    }

    fn go(&self, n: usize, env: &mut [Option<Value>], trail: &mut Vec<usize>, out: &mut Relation) {
        let Some(step) = self.steps.get(n) else {
            out.insert(
                env[..self.k]
                    .iter()
                    .map(|v| v.clone().expect("head slots bound"))
                    .collect(),
            );
            return;
        };
        let mark = trail.len();
        match step {
            Step::Solve { atom, pattern } => {
                let a = &self.atoms[*atom];
                let src =
                    eval_cterm(&a.args[1 - pattern], self.s, env).expect("planned source is bound");
                if let Some(v) = src {
                    if self.matches(&a.args[*pattern], &v, env, trail) {
                        self.go(n + 1, env, trail, out);
                    }
                }
                Self::undo(env, trail, mark);
            }
            Step::Filter { atom } => {
                if atom_holds(&self.atoms[*atom], self.s, self.i, env)
                    .expect("planned filter is bound")
                {
                    self.go(n + 1, env, trail, out);
                }
            }
            Step::Generate { atom, key } => {
                let a = &self.atoms[*atom];
                let CPred::Rel(q) = &a.pred else {
                    unreachable!()
                };
                let mut kv = Vec::with_capacity(key.len());
                for &p in key {
                    match eval_cterm(&a.args[p], self.s, env).expect("planned key is bound") {
                        Some(v) => kv.push(v),
                        None => return,
                    }
                }
                let Some(rows) = self
                    .idx
                    .by_key
                    .get(&(q.clone(), key.clone()))
                    .and_then(|ix| ix.get(&kv))
                else {
                    return;
                };
                for t in rows {
                    if a.args
                        .iter()
                        .zip(t.iter())
                        .all(|(arg, v)| self.matches(arg, v, env, trail))
                    {
                        self.go(n + 1, env, trail, out);
                    }
                    Self::undo(env, trail, mark);
                }
            }
            Step::Enumerate { slot } => {
                let values = self
                    .s
                    .domain
                    .values()
                    .expect("enumeration is planned only on finite universes");
                for v in values {
                    env[*slot] = Some(v.clone());
                    self.go(n + 1, env, trail, out);
                }
                env[*slot] = None;
            }
        }
    }
}

fn clause_relation(
    c: &ClausePlan,
    s: &Structure,
    i: &Interpretation,
    idx: &Indexes<'_>,
) -> Relation {
    let mut out = Relation::new();
    for (d, dp) in c.body.disjuncts.iter().zip(&c.disjuncts) {
        let run = Run {
            s,
            i,
            idx,
            atoms: &d.atoms,
            steps: &dp.steps,
            k: c.body.free,
        };
        let mut env = c.body.env();
        run.go(0, &mut env, &mut Vec::new(), &mut out);
    }
    out
}

/// One application of the immediate-consequence operator following `plan`.
/// Agrees with [`step_naive`](super::step_naive) on every interpretation.
pub fn step_binding(
    plan: &BindingPlan,
    i: &Interpretation,
    s: &Structure,
) -> Result<Interpretation, FixpointError> {
    let idx = Indexes::build(plan, i);
    let mut out = i.clone();
    for c in &plan.clauses {
        let rel = clause_relation(c, s, i, &idx);
        out.set_relation(&c.pred, rel)?;
    }
    Ok(out)
}
