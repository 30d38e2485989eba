//! Random programs and interpretations over small integer universes, and a
//! brute-force reference semantics to check the library against.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relkit::semantics::{Domain, Interpretation, LiteralMode, Relation, Structure, Value};
use relkit::{validate, Atom, Clause, Disjunct, Program, Signature, Term};

/// Defined predicates of generated programs, with arities.
pub const DEFINED: [(&str, usize); 3] = [("a", 1), ("b", 2), ("c", 1)];
/// Extensional predicate carrying data.
pub const DATA: (&str, usize) = ("e", 1);

pub type Db = BTreeMap<String, BTreeSet<Vec<i64>>>;

/// A random program, its universe `0..n` and a reference evaluator.
pub struct Case {
    pub program: Program,
    pub structure: Structure,
    pub universe: Vec<i64>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symbols a generator may use.
pub struct Vocab {
    pub constants: &'static [&'static str],
    pub functions: &'static [(&'static str, usize)],
    /// Predicates that get a clause.
    pub defined: &'static [(&'static str, usize)],
    /// Extern predicates usable in bodies; the comparisons among them are
    /// fixed by the structure.
    pub externs: &'static [(&'static str, usize)],
}

/// Small vocabulary for programs that are evaluated.
pub const EVAL: Vocab = Vocab {
    constants: &["0", "1"],
    functions: &[("s", 1)],
    defined: &DEFINED,
    externs: &[DATA, ("<", 2)],
};

/// Wide vocabulary exercising the whole concrete syntax.
pub const SYNTAX: Vocab = Vocab {
    constants: &["0", "1", "2.5", "nil", "k"],
    functions: &[
        ("s", 1),
        ("+", 2),
        ("-", 2),
        ("*", 2),
        ("/", 2),
        ("cons", 2),
        ("f", 3),
    ],
    defined: &[("p", 2), ("q", 1), ("r", 3), ("t", 0)],
    externs: &[("e", 2), ("<", 2), ("<=", 2), (">", 2), (">=", 2)],
};

impl Vocab {
    fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for c in self.constants {
            sig.add_constant(c).unwrap();
        }
        for (f, k) in self.functions {
            sig.add_function(f, *k).unwrap();
        }
        for (q, k) in self.defined {
            sig.add_predicate(q, *k).unwrap();
        }
        for (q, k) in self.externs {
            sig.add_extensional(q, *k).unwrap();
        }
        sig
    }

    fn term(&self, r: &mut ChaCha8Rng, scope: &[String], depth: usize) -> Term {
        let roll = r.gen_range(0..100);
        if roll < 65 && !scope.is_empty() {
            Term::var(scope.choose(r).unwrap().clone())
        } else if roll < 82 || depth == 0 {
            Term::constant(*self.constants.choose(r).unwrap())
        } else {
            let (f, k) = *self.functions.choose(r).unwrap();
            Term::app(f, (0..k).map(|_| self.term(r, scope, depth - 1)).collect())
        }
    }

    fn atom(&self, r: &mut ChaCha8Rng, scope: &[String]) -> Atom {
        match r.gen_range(0..100) {
            0..=44 => {
                let (q, k) = *self
                    .defined
                    .iter()
                    .chain(self.externs)
                    .collect::<Vec<_>>()
                    .choose(r)
                    .unwrap();
                Atom::new(*q, (0..*k).map(|_| self.term(r, scope, 2)).collect())
            }
            45..=74 => Atom::eq(self.term(r, scope, 2), self.term(r, scope, 2)),
            75..=94 => {
                let binary: Vec<&str> = self
                    .externs
                    .iter()
                    .filter(|(_, k)| *k == 2)
                    .map(|(q, _)| *q)
                    .collect();
                Atom::new(
                    *binary.choose(r).unwrap(),
                    vec![self.term(r, scope, 2), self.term(r, scope, 2)],
                )
            }
            95..=97 => Atom::new("true", vec![]),
            _ => Atom::new("false", vec![]),
        }
    }

    fn clause(&self, r: &mut ChaCha8Rng, q: &str, k: usize) -> Clause {
        let head: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        let mut disjuncts = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let exists: Vec<String> = (0..r.gen_range(0..=2)).map(|i| format!("y{i}")).collect();
            let scope: Vec<String> = head.iter().chain(&exists).cloned().collect();
            let mut atoms: Vec<Atom> = (0..r.gen_range(1..=3))
                .map(|_| self.atom(r, &scope))
                .collect();
            for y in &exists {
                if !atoms.iter().any(|a| mentions(a, y)) {
                    atoms.push(Atom::eq(Term::var(y.clone()), self.term(r, &head, 1)));
                }
            }
            disjuncts.push(Disjunct::new(exists, atoms));
        }
        for x in &head {
            if !disjuncts
                .iter()
                .any(|d| d.conjuncts.iter().any(|a| mentions(a, x)))
            {
                let d = r.gen_range(0..disjuncts.len());
                let other = self.term(r, &[], 1);
                disjuncts[d]
                    .conjuncts
                    .push(Atom::new("<", vec![Term::var(x.clone()), other]));
            }
        }
        Clause::new(
            Atom::new(q, head.into_iter().map(Term::var).collect()),
            disjuncts,
        )
    }

    /// A valid program with one clause per defined predicate.
    pub fn program(&self, r: &mut ChaCha8Rng) -> Program {
        let mut p = Program::new(self.signature());
        for (q, k) in self.defined {
            p.add_clause(self.clause(r, q, *k))
                .expect("fresh predicate");
        }
        let diags = validate(&p);
        assert!(
            diags.is_empty(),
            "generator produced an invalid program: {diags:?}"
        );
        p
    }
}

fn mentions(a: &Atom, v: &str) -> bool {
    a.vars_in_order().contains(&v)
}

/// A valid program defining `a/1`, `b/2` and `c/1` over `e/1` and `<`.
pub fn random_program(r: &mut ChaCha8Rng) -> Program {
    EVAL.program(r)
}

pub fn structure(p: &Program, n: usize) -> Structure {
    Structure::for_signature(
        &p.signature,
        Domain::finite((0..n as i64).map(Value::from)),
        LiteralMode::Exact,
    )
    .unwrap()
}

pub fn random_case(r: &mut ChaCha8Rng, max_universe: usize) -> Case {
    let program = random_program(r);
    let n = r.gen_range(1..=max_universe);
    Case {
        structure: structure(&program, n),
        program,
        universe: (0..n as i64).collect(),
    }
}

fn all_tuples(d: &[i64], k: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                d.iter().map(move |&v| {
                    let mut u = t.clone();
                    u.push(v);
                    u
                })
            })
            .collect();
    }
    out
}

impl Case {
    fn predicates(&self) -> Vec<(&'static str, usize)> {
        DEFINED.iter().copied().chain([DATA]).collect()
    }

    /// Each tuple of each predicate present with probability `density`.
    pub fn random_db(&self, r: &mut ChaCha8Rng, density: f64) -> Db {
        self.predicates()
            .into_iter()
            .map(|(q, k)| {
                let rel = all_tuples(&self.universe, k)
                    .into_iter()
                    .filter(|_| r.gen_bool(density))
                    .collect();
                (q.to_string(), rel)
            })
            .collect()
    }

    pub fn to_interp(&self, db: &Db) -> Interpretation {
        let mut i = Interpretation::bottom(&self.program, &self.structure);
        for (q, rel) in db {
            let rel: Relation = rel
                .iter()
                .map(|t| t.iter().map(|&v| Value::from(v)).collect())
                .collect();
            i.set_relation(q, rel).unwrap();
        }
        i
    }

    pub fn db_of(&self, i: &Interpretation) -> Db {
        i.predicates()
            .map(|(q, _)| {
                let rel = i
                    .relation(q)
                    .unwrap()
                    .iter()
                    .map(|t| {
                        t.iter()
                            .map(|v| i64::try_from(v.as_int().unwrap().clone()).unwrap())
                            .collect()
                    })
                    .collect();
                (q.to_string(), rel)
            })
            .collect()
    }

    fn value(&self, t: &Term, env: &BTreeMap<&str, i64>) -> i64 {
        match t {
            Term::Var(x) => env[x.as_str()],
            Term::Const(c) => c.parse().unwrap(),
            Term::App(f, args) => {
                assert_eq!(f, "s");
                self.value(&args[0], env) + 1
            }
        }
    }

    fn holds(&self, a: &Atom, env: &BTreeMap<&str, i64>, db: &Db) -> bool {
        let vals: Vec<i64> = a.args.iter().map(|t| self.value(t, env)).collect();
        match a.pred.as_str() {
            "=" => vals[0] == vals[1],
            "<" => vals[0] < vals[1],
            "true" => true,
            "false" => false,
            q => db[q].contains(&vals),
        }
    }

    fn disjunct_holds<'a>(
        &self,
        d: &'a Disjunct,
        env: &mut BTreeMap<&'a str, i64>,
        db: &Db,
        next: usize,
    ) -> bool {
        if next == d.exists.len() {
            return d.conjuncts.iter().all(|a| self.holds(a, env, db));
        }
        for &v in &self.universe {
            env.insert(&d.exists[next], v);
            if self.disjunct_holds(d, env, db, next + 1) {
                return true;
            }
        }
        false
    }

    /// Whether the body of `c` holds of head values `t`.
    pub fn body_holds(&self, c: &Clause, t: &[i64], db: &Db) -> bool {
        let head: Vec<&str> = c.head_vars().unwrap();
        c.body.disjuncts().iter().any(|d| {
            let mut env: BTreeMap<&str, i64> =
                head.iter().copied().zip(t.iter().copied()).collect();
            self.disjunct_holds(d, &mut env, db, 0)
        })
    }

    /// One simultaneous step: every clause evaluated against `db`.
    pub fn step(&self, db: &Db) -> Db {
        let mut out = db.clone();
        for (q, c) in &self.program.clauses {
            let k = c.head.args.len();
            let rel = all_tuples(&self.universe, k)
                .into_iter()
                .filter(|t| self.body_holds(c, t, db))
                .collect();
            out.insert(q.clone(), rel);
        }
        out
    }

    /// Every clause: body true implies head true, for all head values.
    pub fn is_model(&self, db: &Db) -> bool {
        self.program.clauses.iter().all(|(q, c)| {
            all_tuples(&self.universe, c.head.args.len())
                .into_iter()
                .all(|t| !self.body_holds(c, &t, db) || db[q].contains(&t))
        })
    }

    /// Least fixpoint with `e` taken from `data`.
    pub fn lfp(&self, data: &Db) -> Db {
        let mut db: Db = self
            .predicates()
            .into_iter()
            .map(|(q, _)| (q.to_string(), BTreeSet::new()))
            .collect();
        db.insert(DATA.0.to_string(), data[DATA.0].clone());
        loop {
            let next = self.step(&db);
            if next == db {
                return db;
            }
            db = next;
        }
    }

    /// Smallest model containing `db`: repeatedly adds the step's output.
    pub fn close(&self, db: &Db) -> Db {
        let mut cur = db.clone();
        loop {
            let next = union(&cur, &self.step(&cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

pub fn leq(a: &Db, b: &Db) -> bool {
    a.iter().all(|(q, r)| r.is_subset(&b[q]))
}

pub fn union(a: &Db, b: &Db) -> Db {
    a.iter()
        .map(|(q, r)| (q.clone(), r.union(&b[q]).cloned().collect()))
        .collect()
}

pub fn intersection(a: &Db, b: &Db) -> Db {
    a.iter()
        .map(|(q, r)| (q.clone(), r.intersection(&b[q]).cloned().collect()))
        .collect()
}
