//! Relation data (`.rdata`), domain descriptions (`.dom`) and ground atoms
//! given on the command line.
//!
//! Relation data lists ground tuples per predicate:
//!
//! ```text
//! split: (nil, nil, nil),
//!        (cons(a, nil), cons(a, nil), nil).
//! even: .
//! ```
//!
//! Values are written as ground terms and evaluated in the structure, so
//! `577/408` is an exact rational and `cons(a, nil)` a list cell.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::parser::lexer::{tokenize, Tok};
use crate::parser::program::{Cursor, RawKind, RawTerm};
use crate::semantics::{
    parse_numeral, Builtin, CmpOp, Domain, FunctionTable, Interpretation, LiteralMode, OpenKind,
    Relation, Structure, Value,
};
use crate::syntax::{Atom, Program, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataErrorKind {
    Syntax,
    UnknownPredicate,
    ArityMismatch,
    UnknownConstant,
    UnknownFunction,
    UndefinedValue,
    InvalidDomain,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", span.as_ref().map(|s| format!("{s}: ")).unwrap_or_default())]
pub struct DataError {
    pub kind: DataErrorKind,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl DataError {
    fn new(kind: DataErrorKind, message: impl Into<String>, span: &SourceSpan) -> Self {
        DataError {
            kind,
            message: message.into(),
            span: Some(span.clone()),
        }
    }

    pub fn with_file(mut self, file: &str) -> Self {
        self.span = self.span.map(|s| s.with_file(file));
        self
    }
}

impl From<Diagnostic> for DataError {
    fn from(d: Diagnostic) -> Self {
        DataError {
            kind: DataErrorKind::Syntax,
            message: d.message,
            span: d.span,
        }
    }
}

type DResult<T> = Result<T, DataError>;

/// Evaluates a raw ground term in the structure.
fn value_of(raw: &RawTerm, table: &FunctionTable, s: Option<&Structure>) -> DResult<Value> {
    match &raw.kind {
        RawKind::Num(n) => parse_numeral(n, table.literals()).ok_or_else(|| {
            DataError::new(
                DataErrorKind::Syntax,
                format!("bad number `{n}`"),
                &raw.span,
            )
        }),
        RawKind::Name(c) => table.constant(c).ok_or_else(|| {
            DataError::new(
                DataErrorKind::UnknownConstant,
                format!("unknown constant `{c}`"),
                &raw.span,
            )
        }),
        RawKind::List(items) => Ok(Value::list(
            items
                .iter()
                .map(|t| value_of(t, table, s))
                .collect::<DResult<Vec<_>>>()?,
        )),
        RawKind::Apply { f, args, .. } => {
            // `p/q` with numeric literals is an exact rational regardless of
            // what `/` means in the program
            if let (
                "/",
                [RawTerm {
                    kind: RawKind::Num(_),
                    ..
                }, RawTerm {
                    kind: RawKind::Num(_),
                    ..
                }],
            ) = (f.as_str(), args.as_slice())
            {
                if table.builtin("/").is_none() {
                    let a = value_of(&args[0], table, s)?;
                    let b = value_of(&args[1], table, s)?;
                    return crate::semantics::value::div(&a, &b).map_err(|_| {
                        DataError::new(
                            DataErrorKind::UndefinedValue,
                            "division is undefined",
                            &raw.span,
                        )
                    });
                }
            }
            if table.builtin(f).is_none() {
                return Err(DataError::new(
                    DataErrorKind::UnknownFunction,
                    format!("unknown function `{f}`"),
                    &raw.span,
                ));
            }
            let vals = args
                .iter()
                .map(|t| value_of(t, table, s))
                .collect::<DResult<Vec<_>>>()?;
            let v = match s {
                Some(s) => s.apply(f, &vals),
                None => table.apply(f, &vals).ok(),
            };
            v.ok_or_else(|| {
                DataError::new(
                    DataErrorKind::UndefinedValue,
                    format!("`{f}` is undefined on these arguments"),
                    &raw.span,
                )
            })
        }
    }
}

/// Reads a single value literal such as `577/408` or `cons(a, nil)`.
pub fn parse_value(text: &str, s: &Structure) -> DResult<Value> {
    let mut cur = Cursor::new(tokenize(text)?);
    let t = cur.term()?;
    if !cur.at_eof() {
        return Err(cur.unexpected("end of input").into());
    }
    value_of(&t, &s.functions, Some(s))
}

/// Parses relation data against a signature; values are evaluated in `s`.
/// Duplicate tuples collapse.
pub fn parse_relation_data(
    text: &str,
    sig: &Signature,
    s: &Structure,
) -> DResult<BTreeMap<String, Relation>> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut out: BTreeMap<String, Relation> = BTreeMap::new();
    while !cur.at_eof() {
        let span = cur.span();
        let pred = match cur.peek().clone() {
            Tok::Ident(q) => {
                cur.bump();
                q
            }
            t => match t.relation_name() {
                Some(r) => {
                    cur.bump();
                    r.to_string()
                }
                None => return Err(cur.unexpected("a predicate name").into()),
            },
        };
        let arity = sig
            .user_predicates()
            .find(|(q, _)| *q == pred)
            .map(|(_, k)| k)
            .ok_or_else(|| {
                DataError::new(
                    DataErrorKind::UnknownPredicate,
                    format!("unknown predicate `{pred}`"),
                    &span,
                )
            })?;
        cur.expect(&Tok::Colon)?;
        let rel = out.entry(pred.clone()).or_default();
        if !cur.eat(&Tok::Dot) {
            loop {
                let tspan = cur.span();
                cur.expect(&Tok::LParen)?;
                let mut tuple = Vec::new();
                if cur.peek() != &Tok::RParen {
                    loop {
                        let t = cur.term()?;
                        tuple.push(value_of(&t, &s.functions, Some(s))?);
                        if !cur.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                let end = cur.expect(&Tok::RParen)?;
                if tuple.len() != arity {
                    return Err(DataError::new(
                        DataErrorKind::ArityMismatch,
                        format!(
                            "`{pred}` has arity {arity}, tuple has {} values",
                            tuple.len()
                        ),
                        &tspan.join(&end),
                    ));
                }
                rel.insert(tuple);
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            }
            cur.expect(&Tok::Dot)?;
        }
    }
    Ok(out)
}

/// Loads relation data into an interpretation over `p`'s predicates.
pub fn parse_interpretation(text: &str, p: &Program, s: &Structure) -> DResult<Interpretation> {
    let data = parse_relation_data(text, &p.signature, s)?;
    let mut i = Interpretation::bottom(p, s);
    for (q, rel) in data {
        if !i.has(&q) {
            return Err(DataError {
                kind: DataErrorKind::UnknownPredicate,
                message: format!("`{q}` is fixed by the structure and cannot be given as data"),
                span: None,
            });
        }
        i.set_relation(&q, rel).map_err(|e| DataError {
            kind: DataErrorKind::ArityMismatch,
            message: e.to_string(),
            span: None,
        })?;
    }
    Ok(i)
}

/// Renders relations in the `.rdata` format, one tuple per line, in
/// increasing tuple order.
pub fn print_relation_data(i: &Interpretation) -> String {
    let mut out = String::new();
    for (q, _) in i.predicates() {
        let rel = i.relation(q).expect("listed predicate");
        if rel.is_empty() {
            out.push_str(&format!("{q}: .\n"));
            continue;
        }
        out.push_str(&format!("{q}:\n"));
        let n = rel.len();
        for (k, t) in rel.iter().enumerate() {
            let vals: Vec<String> = t.iter().map(Value::to_string).collect();
            let end = if k + 1 == n { "." } else { "," };
            out.push_str(&format!("    ({}){end}\n", vals.join(", ")));
        }
    }
    out
}

/// Parses a ground call such as `q(1000000001.1, 17)` into the predicate
/// name and its argument values. The arity is not checked.
pub fn parse_call(text: &str, s: &Structure) -> DResult<(String, Vec<Value>)> {
    let mut cur = Cursor::new(tokenize(text)?);
    let raw = cur.atom()?;
    if !cur.at_eof() {
        return Err(cur.unexpected("end of input").into());
    }
    let args = raw
        .args
        .iter()
        .map(|t| value_of(t, &s.functions, Some(s)))
        .collect::<DResult<_>>()?;
    Ok((raw.pred.clone(), args))
}

/// Parses an atom such as `sort(cons(b, cons(a, nil)), W)`. Identifiers
/// that are not constants of `sig` are variables.
pub fn parse_atom(text: &str, sig: &Signature) -> DResult<Atom> {
    let mut cur = Cursor::new(tokenize(text)?);
    let raw = cur.atom()?;
    if !cur.at_eof() {
        return Err(cur.unexpected("end of input").into());
    }
    fn term(t: &RawTerm, sig: &Signature) -> DResult<Term> {
        Ok(match &t.kind {
            RawKind::Num(n) => Term::Const(n.clone()),
            RawKind::Name(n) if sig.is_constant(n) => Term::Const(n.clone()),
            RawKind::Name(n) => Term::Var(n.clone()),
            RawKind::Apply { f, args, .. } => Term::App(
                f.clone(),
                args.iter().map(|a| term(a, sig)).collect::<DResult<_>>()?,
            ),
            RawKind::List(_) => {
                return Err(DataError::new(
                    DataErrorKind::Syntax,
                    "list literals cannot appear in atoms",
                    &t.span,
                ))
            }
        })
    }
    let arity = sig.predicate_arity(&raw.pred).ok_or_else(|| {
        DataError::new(
            DataErrorKind::UnknownPredicate,
            format!("unknown predicate `{}`", raw.pred),
            &raw.span,
        )
    })?;
    if arity != raw.args.len() {
        return Err(DataError::new(
            DataErrorKind::ArityMismatch,
            format!("`{}` has arity {arity}, not {}", raw.pred, raw.args.len()),
            &raw.span,
        ));
    }
    Ok(Atom {
        pred: raw.pred.clone(),
        args: raw
            .args
            .iter()
            .map(|a| term(a, sig))
            .collect::<DResult<_>>()?,
        span: Some(raw.span.clone()),
    })
}

/// Parses a domain description for program `p` and builds its structure.
///
/// ```text
/// domain finite;            # or: domain generated 3;  domain open rational;
/// literals exact;           # or: literals float;
/// values 0..20, nil;
/// lists of a, b up to 4;    # nil/cons lists over a, b
/// generators s;             # for generated domains
/// closed;                   # results outside the domain are undefined
/// func + = add;             # catalog: succ add sub mul div term list_cons
/// pred < = lt;              # catalog: lt le gt ge
/// const zero = 0;
/// ```
pub fn parse_domain(text: &str, p: &Program) -> DResult<Structure> {
    let sig = &p.signature;
    let mut cur = Cursor::new(tokenize(text)?);
    let mut kind: Option<(String, Option<usize>, Option<OpenKind>, SourceSpan)> = None;
    let mut literals = LiteralMode::Exact;
    let mut closed = false;
    let mut generators: Vec<String> = Vec::new();
    let mut funcs: Vec<(String, String, SourceSpan)> = Vec::new();
    let mut preds: Vec<(String, String, SourceSpan)> = Vec::new();
    let mut consts: Vec<(String, RawTerm)> = Vec::new();
    let mut values: Vec<(RawTerm, Option<RawTerm>)> = Vec::new();
    let mut lists: Vec<(Vec<RawTerm>, usize)> = Vec::new();

    let symbol = |cur: &mut Cursor| -> DResult<String> {
        match cur.peek().clone() {
            Tok::Ident(s) | Tok::Number(s) => {
                cur.bump();
                Ok(s)
            }
            t if t.operator().is_some() || t.relation_name().is_some() => {
                cur.bump();
                Ok(t.symbol().to_string())
            }
            _ => Err(cur.unexpected("a symbol").into()),
        }
    };

    while !cur.at_eof() {
        let (kw, span) = cur.ident()?;
        match kw.as_str() {
            "domain" => {
                let (k, _) = cur.ident()?;
                let (depth, open) = match k.as_str() {
                    "finite" => (None, None),
                    "generated" => (Some(cur.natural()?), None),
                    "open" => {
                        let (o, ospan) = cur.ident()?;
                        let ok = match o.as_str() {
                            "integer" => OpenKind::Integer,
                            "rational" => OpenKind::Rational,
                            "float" => OpenKind::Float,
                            "terms" => OpenKind::Terms,
                            "any" => OpenKind::Any,
                            _ => {
                                return Err(DataError::new(
                                    DataErrorKind::InvalidDomain,
                                    format!("unknown value kind `{o}`"),
                                    &ospan,
                                ))
                            }
                        };
                        (None, Some(ok))
                    }
                    _ => {
                        return Err(DataError::new(
                            DataErrorKind::InvalidDomain,
                            format!("unknown domain kind `{k}`"),
                            &span,
                        ))
                    }
                };
                kind = Some((k, depth, open, span));
            }
            "literals" => {
                let (m, mspan) = cur.ident()?;
                literals = match m.as_str() {
                    "exact" => LiteralMode::Exact,
                    "float" => LiteralMode::Float,
                    _ => {
                        return Err(DataError::new(
                            DataErrorKind::InvalidDomain,
                            format!("unknown literal mode `{m}`"),
                            &mspan,
                        ))
                    }
                };
            }
            "closed" => closed = true,
            "values" => loop {
                let lo = cur.term()?;
                let hi = if cur.eat(&Tok::DotDot) {
                    Some(cur.term()?)
                } else {
                    None
                };
                values.push((lo, hi));
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            },
            "lists" => {
                if !cur.is_keyword("of") {
                    return Err(cur.unexpected("`of`").into());
                }
                cur.bump();
                let mut items = Vec::new();
                loop {
                    items.push(cur.term()?);
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
                for kw in ["up", "to"] {
                    if !cur.is_keyword(kw) {
                        return Err(cur.unexpected(&format!("`{kw}`")).into());
                    }
                    cur.bump();
                }
                lists.push((items, cur.natural()?));
            }
            "generators" => loop {
                generators.push(symbol(&mut cur)?);
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            },
            "func" | "pred" | "const" => {
                let sspan = cur.span();
                let name = symbol(&mut cur)?;
                cur.expect(&Tok::Eq)?;
                if kw == "const" {
                    consts.push((name, cur.term()?));
                } else {
                    let (b, _) = cur.ident()?;
                    if kw == "func" {
                        funcs.push((name, b, sspan));
                    } else {
                        preds.push((name, b, sspan));
                    }
                }
            }
            _ => {
                return Err(DataError::new(
                    DataErrorKind::InvalidDomain,
                    format!("unknown statement `{kw}`"),
                    &span,
                ))
            }
        }
        cur.expect(&Tok::Semi)?;
    }

    let mut table = FunctionTable::for_signature(sig, literals).map_err(|e| DataError {
        kind: DataErrorKind::InvalidDomain,
        message: e.to_string(),
        span: None,
    })?;
    for (f, b, span) in &funcs {
        let arity = sig.function_arity(f).ok_or_else(|| {
            DataError::new(
                DataErrorKind::UnknownFunction,
                format!("`{f}` is not a function of the program"),
                span,
            )
        })?;
        let builtin = Builtin::from_catalog(b).ok_or_else(|| {
            DataError::new(
                DataErrorKind::InvalidDomain,
                format!("`{b}` is not a catalog function"),
                span,
            )
        })?;
        table
            .set_function(f, arity, builtin)
            .map_err(|e| DataError::new(DataErrorKind::InvalidDomain, e.to_string(), span))?;
    }
    for (c, t) in &consts {
        if !sig.is_constant(c) {
            return Err(DataError::new(
                DataErrorKind::UnknownConstant,
                format!("`{c}` is not a constant of the program"),
                &t.span,
            ));
        }
        let v = value_of(t, &table, None)?;
        table.set_constant(c, v);
    }

    let mut seeds = Vec::new();
    for (lo, hi) in &values {
        let a = value_of(lo, &table, None)?;
        match hi {
            None => seeds.push(a),
            Some(hi) => {
                let b = value_of(hi, &table, None)?;
                let (Some(x), Some(y)) = (a.as_int().cloned(), b.as_int().cloned()) else {
                    return Err(DataError::new(
                        DataErrorKind::InvalidDomain,
                        "ranges need integer bounds",
                        &lo.span,
                    ));
                };
                let mut n = x;
                while n <= y {
                    seeds.push(Value::Int(n.clone()));
                    n += 1;
                }
            }
        }
    }
    for (items, max) in &lists {
        let alphabet = items
            .iter()
            .map(|t| value_of(t, &table, None))
            .collect::<DResult<Vec<_>>>()?;
        let mut layer = vec![Vec::<Value>::new()];
        for len in 0..=*max {
            for l in &layer {
                seeds.push(Value::cons_list(l));
            }
            if len == *max {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|l| {
                    alphabet.iter().map(move |a| {
                        let mut m = l.clone();
                        m.push(a.clone());
                        m
                    })
                })
                .collect();
        }
    }

    let domain = match kind {
        None => Domain::finite(seeds),
        Some((k, depth, open, span)) => match (k.as_str(), depth, open) {
            ("generated", Some(depth), _) => Domain::generated(seeds, &generators, depth, &table)
                .map_err(|e| {
                DataError::new(DataErrorKind::InvalidDomain, e.to_string(), &span)
            })?,
            (_, _, Some(o)) => Domain::open(o),
            _ => Domain::finite(seeds),
        },
    }
    .closed(closed);

    let mut s = Structure::for_signature(sig, domain, literals).map_err(|e| DataError {
        kind: DataErrorKind::InvalidDomain,
        message: e.to_string(),
        span: None,
    })?;
    s.functions = table;
    for (q, b, span) in &preds {
        if !sig.is_extensional(q) || sig.predicate_arity(q) != Some(2) {
            return Err(DataError::new(
                DataErrorKind::UnknownPredicate,
                format!("`{q}` is not a binary extern predicate of the program"),
                span,
            ));
        }
        let op = CmpOp::from_catalog(b).ok_or_else(|| {
            DataError::new(
                DataErrorKind::InvalidDomain,
                format!("`{b}` is not a catalog predicate"),
                span,
            )
        })?;
        s.set_predicate(q, op);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn list_program() -> Program {
        parse_program(
            "const nil, a, b; func cons/2; extern pred split/3; pred p/1; p(x) <- split(x, x, x);",
        )
        .unwrap()
    }

    #[test]
    fn relation_data() {
        let p = list_program();
        let s = parse_domain("values nil;", &p).unwrap();
        let nil = Value::atom("nil");
        let data = parse_relation_data("split: (nil, nil, nil).", &p.signature, &s).unwrap();
        assert_eq!(
            data["split"],
            Relation::from([vec![nil.clone(), nil.clone(), nil.clone()]])
        );
        let data = parse_relation_data(
            "split: (nil, nil, nil),\n (nil, nil, nil).\nsplit: (cons(a, nil), cons(a, nil), nil).",
            &p.signature,
            &s,
        )
        .unwrap();
        assert_eq!(data["split"].len(), 2);
    }

    #[test]
    fn relation_data_errors() {
        let p = list_program();
        let s = parse_domain("values nil;", &p).unwrap();
        let kind = |t: &str| parse_relation_data(t, &p.signature, &s).unwrap_err().kind;
        assert_eq!(kind("split: (nil, nil)."), DataErrorKind::ArityMismatch);
        assert_eq!(kind("merge: (nil)."), DataErrorKind::UnknownPredicate);
        assert_eq!(
            kind("split: (nil, nil, c)."),
            DataErrorKind::UnknownConstant
        );
        assert_eq!(kind("split: (nil, nil, nil)"), DataErrorKind::Syntax);
    }

    #[test]
    fn domain_files() {
        let p =
            parse_program("const 0, 0.5; func s/1, +/2; extern pred </2; pred p/1; p(x) <- x = 0;")
                .unwrap();
        let s = parse_domain("domain finite; values 0..3, 10; closed;", &p).unwrap();
        assert_eq!(s.domain.len(), Some(5));
        assert!(s.domain.is_closed());
        assert_eq!(s.functions.constant("0.5"), Some(Value::ratio(1, 2)));
        assert_eq!(s.builtin_predicate("<"), Some(CmpOp::Lt));

        let s = parse_domain("domain open rational;", &p).unwrap();
        assert!(!s.domain.is_enumerable());
        assert!(s.domain.contains(&Value::ratio(577, 408)));

        let s = parse_domain("literals float; domain open float; const 0.5 = 1/2;", &p).unwrap();
        assert_eq!(s.functions.constant("0.5"), Some(Value::ratio(1, 2)));
        assert_eq!(parse_value("0.25", &s).unwrap(), Value::float(0.25));

        let s = parse_domain("domain generated 2; values 0; generators s;", &p).unwrap();
        assert_eq!(s.domain.len(), Some(3));

        let e = parse_domain("domain weird;", &p).unwrap_err();
        assert_eq!(e.kind, DataErrorKind::InvalidDomain);
        let e = parse_domain("func + = frobnicate;", &p).unwrap_err();
        assert_eq!(e.kind, DataErrorKind::InvalidDomain);
    }

    #[test]
    fn list_domains() {
        let p = list_program();
        let s = parse_domain("values a, b; lists of a, b up to 4;", &p).unwrap();
        // 2 letters plus 1 + 2 + 4 + 8 + 16 lists
        assert_eq!(s.domain.len(), Some(33));
    }

    #[test]
    fn values_and_atoms() {
        let p = list_program();
        let s = parse_domain("values nil;", &p).unwrap();
        assert_eq!(parse_value("577/408", &s).unwrap(), Value::ratio(577, 408));
        assert_eq!(parse_value("-3", &s).unwrap(), Value::int(-3));
        assert_eq!(
            parse_value("cons(b, cons(a, nil))", &s).unwrap(),
            Value::cons_list(&[Value::atom("b"), Value::atom("a")])
        );
        let a = parse_atom("p(cons(a, W))", &p.signature).unwrap();
        assert_eq!(
            a.args[0],
            Term::app("cons", vec![Term::constant("a"), Term::var("W")])
        );
        assert_eq!(
            parse_atom("p(", &p.signature).unwrap_err().kind,
            DataErrorKind::Syntax
        );
        assert_eq!(
            parse_atom("q(a)", &p.signature).unwrap_err().kind,
            DataErrorKind::UnknownPredicate
        );
    }

    #[test]
    fn printed_data_reparses() {
        let p = list_program();
        let s = parse_domain("values nil;", &p).unwrap();
        let mut i = Interpretation::bottom(&p, &s);
        let l = Value::cons_list(&[Value::atom("a")]);
        i.insert("split", vec![l.clone(), l, Value::atom("nil")])
            .unwrap();
        let text = print_relation_data(&i);
        assert_eq!(
            text,
            "p: .\nsplit:\n    (cons(a, nil), cons(a, nil), nil).\n"
        );
        assert_eq!(parse_interpretation(&text, &p, &s).unwrap(), i);
    }
}
