//! The variable part of an (F,=)-interpretation: one relation per
//! predicate symbol.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::structure::{for_each_tuple, NonEnumerable, Structure};
use super::value::Value;
use crate::syntax::Program;

pub type Tuple = Vec<Value>;
pub type Relation = BTreeSet<Tuple>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("cannot intersect an empty family of interpretations")]
    EmptySet,
    #[error("interpretations are over different predicate sets")]
    SignatureMismatch,
    #[error("predicate `{0}` is not interpreted")]
    UnknownPredicate(String),
    #[error("`{pred}` has arity {expected}, tuple has {got} components")]
    ArityMismatch {
        pred: String,
        expected: usize,
        got: usize,
    },
}

/// A vector of relations indexed by predicate symbol. Relations are ordered
/// sets so that iteration, printing and hashing are deterministic.
///
/// `=`, `true`, `false` and structure-supplied comparisons are fixed and
/// never stored here.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Interpretation {
    relations: BTreeMap<String, (usize, Relation)>,
}

impl Interpretation {
    /// All listed predicates empty.
    pub fn empty<'a>(preds: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        Interpretation {
            relations: preds
                .into_iter()
                .map(|(q, k)| (q.to_string(), (k, Relation::new())))
                .collect(),
        }
    }

    /// Empty relations for every user predicate of `p` that the structure
    /// does not fix.
    pub fn bottom(p: &Program, s: &Structure) -> Self {
        Self::empty(
            p.signature
                .user_predicates()
                .filter(|(q, _)| s.builtin_predicate(q).is_none()),
        )
    }

    /// Every predicate holds of every tuple over the universe.
    pub fn full(p: &Program, s: &Structure) -> Result<Self, NonEnumerable> {
        let d = s.domain.values()?;
        let mut i = Self::bottom(p, s);
        for (k, rel) in i.relations.values_mut() {
            for_each_tuple(d, *k, &mut |t| {
                rel.insert(t.to_vec());
            });
        }
        Ok(i)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(q, (k, _))| (q.as_str(), *k))
    }

    pub fn has(&self, q: &str) -> bool {
        self.relations.contains_key(q)
    }

    pub fn arity(&self, q: &str) -> Option<usize> {
        self.relations.get(q).map(|(k, _)| *k)
    }

    pub fn relation(&self, q: &str) -> Option<&Relation> {
        self.relations.get(q).map(|(_, r)| r)
    }

    pub fn contains(&self, q: &str, t: &[Value]) -> bool {
        self.relations.get(q).is_some_and(|(_, r)| r.contains(t))
    }

    pub fn insert(&mut self, q: &str, t: Tuple) -> Result<bool, InterpError> {
        let (k, rel) = self
            .relations
            .get_mut(q)
            .ok_or_else(|| InterpError::UnknownPredicate(q.to_string()))?;
        if *k != t.len() {
            return Err(InterpError::ArityMismatch {
                pred: q.to_string(),
                expected: *k,
                got: t.len(),
            });
        }
        Ok(rel.insert(t))
    }

    pub fn set_relation(&mut self, q: &str, rel: Relation) -> Result<(), InterpError> {
        let (k, _) = self
            .relations
            .get(q)
            .ok_or_else(|| InterpError::UnknownPredicate(q.to_string()))?;
        if let Some(t) = rel.iter().find(|t| t.len() != *k) {
            return Err(InterpError::ArityMismatch {
                pred: q.to_string(),
                expected: *k,
                got: t.len(),
            });
        }
        self.relations.get_mut(q).unwrap().1 = rel;
        Ok(())
    }

    /// Total number of stored tuples.
    pub fn size(&self) -> usize {
        self.relations.values().map(|(_, r)| r.len()).sum()
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.relations.len() == other.relations.len()
            && self
                .relations
                .iter()
                .zip(&other.relations)
                .all(|((p, (k, _)), (q, (l, _)))| p == q && k == l)
    }

    /// Componentwise inclusion.
    pub fn leq(&self, other: &Self) -> Result<bool, InterpError> {
        if !self.same_shape(other) {
            return Err(InterpError::SignatureMismatch);
        }
        Ok(self
            .relations
            .values()
            .zip(other.relations.values())
            .all(|((_, a), (_, b))| a.is_subset(b)))
    }

    /// Componentwise intersection of a nonempty family.
    pub fn intersect<'a>(
        family: impl IntoIterator<Item = &'a Interpretation>,
    ) -> Result<Interpretation, InterpError> {
        let mut it = family.into_iter();
        let mut acc = it.next().ok_or(InterpError::EmptySet)?.clone();
        for i in it {
            if !acc.same_shape(i) {
                return Err(InterpError::SignatureMismatch);
            }
            for ((_, a), (_, b)) in acc.relations.values_mut().zip(i.relations.values()) {
                a.retain(|t| b.contains(t));
            }
        }
        Ok(acc)
    }

    /// Componentwise union with an interpretation of the same shape.
    pub fn union(&self, other: &Self) -> Result<Interpretation, InterpError> {
        if !self.same_shape(other) {
            return Err(InterpError::SignatureMismatch);
        }
        let mut out = self.clone();
        for ((_, a), (_, b)) in out.relations.values_mut().zip(other.relations.values()) {
            a.extend(b.iter().cloned());
        }
        Ok(out)
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (q, (_, r)) in &self.relations {
            m.entry(q, r);
        }
        m.finish()
    }
}
