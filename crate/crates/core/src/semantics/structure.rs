//! Universes, function tables and the fixed part of an (F,=)-interpretation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One};
use thiserror::Error;

use super::value::{self, Fault, Value};
use crate::syntax::{Signature, Term};

/// A function given directly as Rust code.
pub type CustomFn = Arc<dyn Fn(&[Value]) -> Result<Value, Fault> + Send + Sync>;

/// Function implementations available to domain files.
#[derive(Clone)]
pub enum Builtin {
    /// Successor on the naturals; invertible.
    Succ,
    Add,
    Sub,
    Mul,
    Div,
    /// Free constructor: `f(x, y)` denotes the symbolic value `f(x, y)`.
    Constructor,
    /// `cons` on list values.
    ListCons,
    Custom(CustomFn),
}

impl Builtin {
    pub fn from_catalog(name: &str) -> Option<Builtin> {
        Some(match name {
            "succ" => Builtin::Succ,
            "add" => Builtin::Add,
            "sub" => Builtin::Sub,
            "mul" => Builtin::Mul,
            "div" => Builtin::Div,
            "term" => Builtin::Constructor,
            "list_cons" => Builtin::ListCons,
            _ => return None,
        })
    }

    pub fn catalog_name(&self) -> &'static str {
        match self {
            Builtin::Succ => "succ",
            Builtin::Add => "add",
            Builtin::Sub => "sub",
            Builtin::Mul => "mul",
            Builtin::Div => "div",
            Builtin::Constructor => "term",
            Builtin::ListCons => "list_cons",
            Builtin::Custom(_) => "custom",
        }
    }

    /// Arity the builtin works at, if fixed.
    pub fn arity(&self) -> Option<usize> {
        match self {
            Builtin::Succ => Some(1),
            Builtin::Add | Builtin::Sub | Builtin::Mul | Builtin::Div | Builtin::ListCons => {
                Some(2)
            }
            Builtin::Constructor | Builtin::Custom(_) => None,
        }
    }

    pub fn is_invertible(&self) -> bool {
        matches!(
            self,
            Builtin::Succ | Builtin::Constructor | Builtin::ListCons
        )
    }
}

impl fmt::Debug for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.catalog_name())
    }
}

/// Default implementation for a function symbol of the given name.
pub fn default_builtin(name: &str, arity: usize) -> Builtin {
    match (name, arity) {
        ("+", 2) => Builtin::Add,
        ("-", 2) => Builtin::Sub,
        ("*", 2) => Builtin::Mul,
        ("/", 2) => Builtin::Div,
        ("s", 1) => Builtin::Succ,
        _ => Builtin::Constructor,
    }
}

/// Comparison predicates available to domain files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn from_catalog(name: &str) -> Option<CmpOp> {
        Some(match name {
            "lt" => CmpOp::Lt,
            "le" => CmpOp::Le,
            "gt" => CmpOp::Gt,
            "ge" => CmpOp::Ge,
            _ => return None,
        })
    }

    pub fn for_symbol(name: &str) -> Option<CmpOp> {
        Some(match name {
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            ">" => CmpOp::Gt,
            ">=" => CmpOp::Ge,
            _ => return None,
        })
    }

    pub fn holds(self, o: Ordering) -> bool {
        match self {
            CmpOp::Lt => o.is_lt(),
            CmpOp::Le => o.is_le(),
            CmpOp::Gt => o.is_gt(),
            CmpOp::Ge => o.is_ge(),
        }
    }

    pub fn test(self, a: &Value, b: &Value) -> Result<bool, Fault> {
        value::compare(a, b).map(|o| self.holds(o))
    }
}

/// How numeric literals in programs denote values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiteralMode {
    /// `0.5` is the exact rational 1/2.
    #[default]
    Exact,
    /// Literals with a fraction or exponent are binary64 floats.
    Float,
}

/// Reads a numeric literal (`17`, `-3`, `0.5`, `1e-3`, `0x1.8p1`, `0x1f`).
pub fn parse_numeral(text: &str, mode: LiteralMode) -> Option<Value> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (exact, is_integer) =
        if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
            let (mant, exp) = match hex.split_once(['p', 'P']) {
                Some((m, e)) => (m, Some(e.parse::<i32>().ok()?)),
                None => (hex, None),
            };
            let (whole, frac) = mant.split_once('.').unwrap_or((mant, ""));
            let digits = format!("{whole}{frac}");
            if digits.is_empty() {
                return None;
            }
            let n = BigInt::from_str_radix(&digits, 16).ok()?;
            let shift = exp.unwrap_or(0) - 4 * frac.len() as i32;
            let two = BigRational::from_integer(BigInt::from(2));
            let r = BigRational::from_integer(n) * pow(&two, shift);
            (r, frac.is_empty() && exp.is_none())
        } else {
            let (mant, exp) = match body.split_once(['e', 'E']) {
                Some((m, e)) => (m, Some(e.parse::<i32>().ok()?)),
                None => (body, None),
            };
            let (whole, frac) = mant.split_once('.').unwrap_or((mant, ""));
            let digits = format!("{whole}{frac}");
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let n: BigInt = digits.parse().ok()?;
            let shift = exp.unwrap_or(0) - frac.len() as i32;
            let ten = BigRational::from_integer(BigInt::from(10));
            let r = BigRational::from_integer(n) * pow(&ten, shift);
            (r, !mant.contains('.') && exp.is_none())
        };
    let exact = if neg { -exact } else { exact };
    if is_integer || mode == LiteralMode::Exact {
        return Some(Value::rational(exact));
    }
    let is_hex = body.starts_with("0x") || body.starts_with("0X");
    let x = if is_hex {
        num_traits::ToPrimitive::to_f64(&exact)?
    } else {
        text.parse::<f64>().ok()?
    };
    Some(Value::Float(x))
}

fn pow(base: &BigRational, e: i32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        r *= base;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("function `{0}` is not in the signature")]
    UnknownFunction(String),
    #[error("constant `{0}` is not in the signature")]
    UnknownConstant(String),
    #[error("predicate `{0}` is not an extern predicate of the signature")]
    UnknownPredicate(String),
    #[error("`{name}` has arity {arity} but `{builtin}` works at arity {expected}")]
    BuiltinArity {
        name: String,
        builtin: &'static str,
        arity: usize,
        expected: usize,
    },
    #[error("constant `{0}` has no value under the current literal mode")]
    BadNumeral(String),
}

/// Meanings of function and constant symbols.
#[derive(Clone, Debug, Default)]
pub struct FunctionTable {
    functions: BTreeMap<String, (usize, Builtin)>,
    constants: BTreeMap<String, Value>,
    literals: LiteralMode,
}

impl FunctionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Default meanings for every symbol of `sig`: numerals denote numbers,
    /// other constants denote themselves, and functions get their
    /// [`default_builtin`].
    pub fn for_signature(sig: &Signature, mode: LiteralMode) -> Result<Self, StructureError> {
        let mut t = FunctionTable::new();
        t.literals = mode;
        for c in sig.constants() {
            let v = if c.starts_with(|ch: char| ch.is_ascii_digit() || ch == '-') {
                parse_numeral(c, mode).ok_or_else(|| StructureError::BadNumeral(c.to_string()))?
            } else {
                Value::atom(c)
            };
            t.constants.insert(c.to_string(), v);
        }
        for (f, k) in sig.functions() {
            t.functions
                .insert(f.to_string(), (k, default_builtin(f, k)));
        }
        Ok(t)
    }

    pub fn set_function(
        &mut self,
        name: &str,
        arity: usize,
        b: Builtin,
    ) -> Result<(), StructureError> {
        if let Some(expected) = b.arity() {
            if expected != arity {
                return Err(StructureError::BuiltinArity {
                    name: name.to_string(),
                    builtin: b.catalog_name(),
                    arity,
                    expected,
                });
            }
        }
        self.functions.insert(name.to_string(), (arity, b));
        Ok(())
    }

    pub fn set_constant(&mut self, name: &str, v: Value) {
        self.constants.insert(name.to_string(), v);
    }

    /// Value of a constant. Numerals not bound explicitly denote their
    /// number under the table's literal mode.
    pub fn constant(&self, name: &str) -> Option<Value> {
        match self.constants.get(name) {
            Some(v) => Some(v.clone()),
            None if name.starts_with(|c: char| c.is_ascii_digit() || c == '-') => {
                parse_numeral(name, self.literals)
            }
            None => None,
        }
    }

    pub fn literals(&self) -> LiteralMode {
        self.literals
    }

    pub fn set_literals(&mut self, mode: LiteralMode) {
        self.literals = mode;
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.constants.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn builtin(&self, name: &str) -> Option<&Builtin> {
        self.functions.get(name).map(|(_, b)| b)
    }

    pub fn function_names(&self) -> impl Iterator<Item = &str> {
        self.functions.keys().map(String::as_str)
    }

    pub fn apply(&self, name: &str, args: &[Value]) -> Result<Value, Fault> {
        let Some((arity, b)) = self.functions.get(name) else {
            return Err(Fault::Undefined);
        };
        if args.len() != *arity {
            return Err(Fault::KindMismatch);
        }
        match b {
            Builtin::Succ => value::succ(&args[0]),
            Builtin::Add => value::add(&args[0], &args[1]),
            Builtin::Sub => value::sub(&args[0], &args[1]),
            Builtin::Mul => value::mul(&args[0], &args[1]),
            Builtin::Div => value::div(&args[0], &args[1]),
            Builtin::Constructor => Ok(Value::sym(name, args.to_vec())),
            Builtin::ListCons => match &args[1] {
                Value::List(t) => {
                    let mut items = Vec::with_capacity(t.len() + 1);
                    items.push(args[0].clone());
                    items.extend(t.iter().cloned());
                    Ok(Value::list(items))
                }
                _ => Err(Fault::KindMismatch),
            },
            Builtin::Custom(f) => f(args),
        }
    }

    pub fn is_invertible(&self, name: &str) -> bool {
        self.builtin(name).is_some_and(Builtin::is_invertible)
    }

    /// For an invertible function, the unique arguments mapping to `result`.
    pub fn invert(&self, name: &str, result: &Value) -> Option<Vec<Value>> {
        let (arity, b) = self.functions.get(name)?;
        match b {
            Builtin::Succ => value::pred(result).ok().map(|v| vec![v]),
            Builtin::Constructor => match result {
                Value::Sym(f, args) if &**f == name && args.len() == *arity => Some(args.to_vec()),
                _ => None,
            },
            Builtin::ListCons => match result {
                Value::List(items) if !items.is_empty() => {
                    Some(vec![items[0].clone(), Value::list(items[1..].to_vec())])
                }
                _ => None,
            },
            _ => None,
        }
    }
}

/// Value kinds admitted by a non-enumerable universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpenKind {
    Integer,
    Rational,
    Float,
    Terms,
    Any,
}

impl OpenKind {
    pub fn admits(self, v: &Value) -> bool {
        match self {
            OpenKind::Integer => matches!(v, Value::Int(_)),
            OpenKind::Rational => matches!(v, Value::Int(_) | Value::Rat(_)),
            OpenKind::Float => matches!(v, Value::Int(_) | Value::Float(_)),
            OpenKind::Terms => matches!(v, Value::Sym(..) | Value::List(_)),
            OpenKind::Any => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpenKind::Integer => "integer",
            OpenKind::Rational => "rational",
            OpenKind::Float => "float",
            OpenKind::Terms => "terms",
            OpenKind::Any => "any",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainKind {
    /// Exactly the listed values.
    Finite,
    /// Seed values closed under generator functions up to a depth.
    Generated {
        generators: Vec<String>,
        depth: usize,
    },
    /// All values of a kind; membership is decidable but there is no
    /// enumeration.
    Open(OpenKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("the domain cannot be enumerated")]
pub struct NonEnumerable;

/// The universe D.
#[derive(Debug, Clone)]
pub struct Domain {
    kind: DomainKind,
    values: Vec<Value>,
    closed: bool,
}

impl Domain {
    pub fn finite(values: impl IntoIterator<Item = Value>) -> Domain {
        let set: BTreeSet<Value> = values.into_iter().collect();
        Domain {
            kind: DomainKind::Finite,
            values: set.into_iter().collect(),
            closed: false,
        }
    }

    /// Closure of `seeds` under `generators`, `depth` rounds deep. Undefined
    /// applications contribute nothing.
    pub fn generated(
        seeds: impl IntoIterator<Item = Value>,
        generators: &[String],
        depth: usize,
        table: &FunctionTable,
    ) -> Result<Domain, StructureError> {
        let mut set: BTreeSet<Value> = seeds.into_iter().collect();
        for g in generators {
            if table.builtin(g).is_none() {
                return Err(StructureError::UnknownFunction(g.clone()));
            }
        }
        for _ in 0..depth {
            let current: Vec<Value> = set.iter().cloned().collect();
            let mut next = set.clone();
            for g in generators {
                let (arity, _) = table.functions[g.as_str()];
                for_each_tuple(&current, arity, &mut |args| {
                    if let Ok(v) = table.apply(g, args) {
                        next.insert(v);
                    }
                });
            }
            if next.len() == set.len() {
                break;
            }
            set = next;
        }
        Ok(Domain {
            kind: DomainKind::Generated {
                generators: generators.to_vec(),
                depth,
            },
            values: set.into_iter().collect(),
            closed: false,
        })
    }

    pub fn open(kind: OpenKind) -> Domain {
        Domain {
            kind: DomainKind::Open(kind),
            values: Vec::new(),
            closed: false,
        }
    }

    /// In a closed domain, function results outside the universe are
    /// undefined.
    pub fn closed(mut self, closed: bool) -> Domain {
        self.closed = closed;
        self
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn is_enumerable(&self) -> bool {
        !matches!(self.kind, DomainKind::Open(_))
    }

    pub fn contains(&self, v: &Value) -> bool {
        match self.kind {
            DomainKind::Open(k) => k.admits(v),
            _ => self.values.binary_search(v).is_ok(),
        }
    }

    /// The elements in increasing order.
    pub fn values(&self) -> Result<&[Value], NonEnumerable> {
        if self.is_enumerable() {
            Ok(&self.values)
        } else {
            Err(NonEnumerable)
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.is_enumerable().then_some(self.values.len())
    }

    pub fn is_empty(&self) -> bool {
        self.is_enumerable() && self.values.is_empty()
    }
}

/// Calls `f` on every tuple in `items^k`, in lexicographic order.
pub fn for_each_tuple(items: &[Value], k: usize, f: &mut impl FnMut(&[Value])) {
    if k == 0 {
        f(&[]);
        return;
    }
    if items.is_empty() {
        return;
    }
    let mut idx = vec![0usize; k];
    let mut tuple: Vec<Value> = vec![items[0].clone(); k];
    loop {
        f(&tuple);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < items.len() {
                tuple[i] = items[idx[i]].clone();
                break;
            }
            idx[i] = 0;
            tuple[i] = items[0].clone();
        }
    }
}

/// Everything an (F,=)-set fixes: the universe, the function table, and
/// the comparison predicates supplied by the structure rather than by an
/// interpretation.
#[derive(Debug, Clone)]
pub struct Structure {
    pub domain: Domain,
    pub functions: FunctionTable,
    predicates: BTreeMap<String, CmpOp>,
}

impl Structure {
    pub fn new(domain: Domain, functions: FunctionTable) -> Structure {
        Structure {
            domain,
            functions,
            predicates: BTreeMap::new(),
        }
    }

    /// Structure with default function meanings for `sig`; extern
    /// predicates named `<`, `<=`, `>`, `>=` become the comparisons.
    pub fn for_signature(
        sig: &Signature,
        domain: Domain,
        mode: LiteralMode,
    ) -> Result<Structure, StructureError> {
        let mut s = Structure::new(domain, FunctionTable::for_signature(sig, mode)?);
        for q in sig.extensional() {
            if let (Some(op), Some(2)) = (CmpOp::for_symbol(q), sig.predicate_arity(q)) {
                s.predicates.insert(q.to_string(), op);
            }
        }
        Ok(s)
    }

    pub fn set_predicate(&mut self, name: &str, op: CmpOp) {
        self.predicates.insert(name.to_string(), op);
    }

    pub fn builtin_predicate(&self, name: &str) -> Option<CmpOp> {
        self.predicates.get(name).copied()
    }

    pub fn builtin_predicates(&self) -> impl Iterator<Item = (&str, CmpOp)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Applies `f`, treating results outside a closed universe as undefined.
    pub fn apply(&self, f: &str, args: &[Value]) -> Option<Value> {
        let v = self.functions.apply(f, args).ok()?;
        if self.domain.is_closed() && !self.domain.contains(&v) {
            return None;
        }
        Some(v)
    }

    /// Meaning of a ground term; `None` when some application is undefined.
    pub fn eval_ground(&self, t: &Term) -> Result<Option<Value>, StructureError> {
        match t {
            Term::Var(v) => Err(StructureError::UnknownConstant(v.clone())),
            Term::Const(c) => self
                .functions
                .constant(c)
                .map(Some)
                .ok_or_else(|| StructureError::UnknownConstant(c.clone())),
            Term::App(f, args) => {
                if self.functions.builtin(f).is_none() {
                    return Err(StructureError::UnknownFunction(f.clone()));
                }
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval_ground(a)? {
                        Some(v) => vals.push(v),
                        None => return Ok(None),
                    }
                }
                Ok(self.apply(f, &vals))
            }
        }
    }
}
