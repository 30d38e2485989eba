//! Domain values and the numeric tower.
//!
//! Integers and rationals share one exact numeric kind: a rational whose
//! denominator is 1 is always stored as an integer, so `Int(2)` and `2/1`
//! cannot both exist. Binary64 floats are a separate kind compared by bit
//! pattern. Arithmetic mixing the exact kind with floats promotes to float.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Value {
    Int(BigInt),
    /// Exact rational, never with denominator 1.
    Rat(BigRational),
    Float(f64),
    /// Ground symbolic term, e.g. `nil` or `cons(a, nil)`.
    Sym(Arc<str>, Arc<[Value]>),
    List(Arc<[Value]>),
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Value {
        Value::Int(n.into())
    }

    /// Normalizing constructor for exact rationals.
    pub fn rational(r: BigRational) -> Value {
        if r.is_integer() {
            Value::Int(r.to_integer())
        } else {
            Value::Rat(r)
        }
    }

    pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Value {
        Value::rational(BigRational::new(n.into(), d.into()))
    }

    pub fn float(x: f64) -> Value {
        Value::Float(x)
    }

    pub fn atom(name: &str) -> Value {
        Value::Sym(Arc::from(name), Arc::from(Vec::new()))
    }

    pub fn sym(name: &str, args: Vec<Value>) -> Value {
        Value::Sym(Arc::from(name), Arc::from(args))
    }

    pub fn list(items: Vec<Value>) -> Value {
        Value::List(Arc::from(items))
    }

    /// `nil` / `cons(h, t)` encoding of a sequence.
    pub fn cons_list(items: &[Value]) -> Value {
        items.iter().rev().fold(Value::atom("nil"), |t, h| {
            Value::sym("cons", vec![h.clone(), t])
        })
    }

    /// Inverse of [`Value::cons_list`].
    pub fn as_cons_list(&self) -> Option<Vec<Value>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Value::Sym(n, args) if &**n == "nil" && args.is_empty() => return Some(out),
                Value::Sym(n, args) if &**n == "cons" && args.len() == 2 => {
                    out.push(args[0].clone());
                    cur = &args[1];
                }
                _ => return None,
            }
        }
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Rat(_) | Value::Float(_))
    }

    pub fn as_exact(&self) -> Option<BigRational> {
        match self {
            Value::Int(n) => Some(BigRational::from_integer(n.clone())),
            Value::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Value::Int(n) => n.to_f64(),
            Value::Rat(r) => r.to_f64(),
            Value::Float(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Int(_) | Value::Rat(_) => 0,
            Value::Float(_) => 1,
            Value::Sym(..) => 2,
            Value::List(_) => 3,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural total order: exact numbers by magnitude, then floats by
/// `total_cmp`, then symbolic terms, then lists.
impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Int(_) | Value::Rat(_), Value::Int(_) | Value::Rat(_)) => {
                self.as_exact().unwrap().cmp(&other.as_exact().unwrap())
            }
            (Value::Float(a), Value::Float(b)) => a.total_cmp(b),
            (Value::Sym(f, xs), Value::Sym(g, ys)) => (xs.len(), f, xs).cmp(&(ys.len(), g, ys)),
            (Value::List(xs), Value::List(ys)) => xs.cmp(ys),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Value::Int(n) => n.hash(state),
            Value::Rat(r) => r.hash(state),
            Value::Float(x) => x.to_bits().hash(state),
            Value::Sym(f, xs) => {
                f.hash(state);
                xs.hash(state);
            }
            Value::List(xs) => xs.hash(state),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Sym(name, args) => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Value::List(xs) => {
                f.write_str("[")?;
                for (i, a) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Value {
        Value::Int(BigInt::from(n))
    }
}

/// Why a builtin produced no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Outside the function's domain of definition, e.g. division by zero.
    Undefined,
    /// Operand of the wrong value kind, e.g. adding a symbol to a number.
    KindMismatch,
}

enum Pair {
    Exact(BigRational, BigRational),
    Float(f64, f64),
}

fn promote(a: &Value, b: &Value) -> Result<Pair, Fault> {
    match (a, b) {
        (Value::Float(_), _) | (_, Value::Float(_)) => match (a.to_f64(), b.to_f64()) {
            (Some(x), Some(y)) => Ok(Pair::Float(x, y)),
            _ => Err(Fault::KindMismatch),
        },
        _ => match (a.as_exact(), b.as_exact()) {
            (Some(x), Some(y)) => Ok(Pair::Exact(x, y)),
            _ => Err(Fault::KindMismatch),
        },
    }
}

fn float_result(x: f64) -> Result<Value, Fault> {
    if x.is_finite() {
        Ok(Value::Float(x))
    } else {
        Err(Fault::Undefined)
    }
}

pub fn add(a: &Value, b: &Value) -> Result<Value, Fault> {
    if let (Value::Int(x), Value::Int(y)) = (a, b) {
        return Ok(Value::Int(x + y));
    }
    match promote(a, b)? {
        Pair::Exact(x, y) => Ok(Value::rational(x + y)),
        Pair::Float(x, y) => float_result(x + y),
    }
}

pub fn sub(a: &Value, b: &Value) -> Result<Value, Fault> {
    if let (Value::Int(x), Value::Int(y)) = (a, b) {
        return Ok(Value::Int(x - y));
    }
    match promote(a, b)? {
        Pair::Exact(x, y) => Ok(Value::rational(x - y)),
        Pair::Float(x, y) => float_result(x - y),
    }
}

pub fn mul(a: &Value, b: &Value) -> Result<Value, Fault> {
    if let (Value::Int(x), Value::Int(y)) = (a, b) {
        return Ok(Value::Int(x * y));
    }
    match promote(a, b)? {
        Pair::Exact(x, y) => Ok(Value::rational(x * y)),
        Pair::Float(x, y) => float_result(x * y),
    }
}

/// Exact division on the exact kind (`7 / 2` is `7/2`), IEEE division on
/// floats. Division by zero is undefined.
pub fn div(a: &Value, b: &Value) -> Result<Value, Fault> {
    match promote(a, b)? {
        Pair::Exact(x, y) => {
            if y.is_zero() {
                Err(Fault::Undefined)
            } else {
                Ok(Value::rational(x / y))
            }
        }
        Pair::Float(x, y) => {
            if y == 0.0 {
                Err(Fault::Undefined)
            } else {
                float_result(x / y)
            }
        }
    }
}

/// Successor on the natural numbers.
pub fn succ(a: &Value) -> Result<Value, Fault> {
    match a {
        Value::Int(n) if !n.is_negative() => Ok(Value::Int(n + 1)),
        Value::Int(_) => Err(Fault::Undefined),
        _ => Err(Fault::KindMismatch),
    }
}

/// Predecessor, the inverse of [`succ`]; undefined on 0.
pub fn pred(a: &Value) -> Result<Value, Fault> {
    match a {
        Value::Int(n) if n.is_positive() => Ok(Value::Int(n - 1)),
        Value::Int(_) => Err(Fault::Undefined),
        _ => Err(Fault::KindMismatch),
    }
}

/// Numeric comparison with promotion; non-numbers compare structurally
/// within their own kind.
pub fn compare(a: &Value, b: &Value) -> Result<Ordering, Fault> {
    match (a, b) {
        (Value::Sym(..), Value::Sym(..)) | (Value::List(_), Value::List(_)) => Ok(a.cmp(b)),
        _ => match promote(a, b)? {
            Pair::Exact(x, y) => Ok(x.cmp(&y)),
            Pair::Float(x, y) => x.partial_cmp(&y).ok_or(Fault::Undefined),
        },
    }
}
