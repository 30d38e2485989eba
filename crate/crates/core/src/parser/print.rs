//! Canonical pretty-printer; its output parses back to the same program.

use std::fmt::Write as _;

use crate::syntax::{Atom, Clause, Disjunct, Program, Term};

fn operator_prec(f: &str) -> Option<u8> {
    match f {
        "+" | "-" => Some(1),
        "*" | "/" => Some(2),
        _ => None,
    }
}

fn is_relation(p: &str) -> bool {
    matches!(p, "=" | "<" | "<=" | ">" | ">=")
}

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::App(f, args) if args.len() == 2 => operator_prec(f).unwrap_or(u8::MAX),
        _ => u8::MAX,
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) | Term::Const(v) => out.push_str(v),
        Term::App(f, args) => match (operator_prec(f), args.as_slice()) {
            (Some(p), [l, r]) => {
                write_operand(out, l, term_prec(l) < p);
                let _ = write!(out, " {f} ");
                write_operand(out, r, term_prec(r) <= p);
            }
            _ => {
                out.push_str(f);
                out.push('(');
                write_args(out, args);
                out.push(')');
            }
        },
    }
}

fn write_operand(out: &mut String, t: &Term, paren: bool) {
    if paren {
        out.push('(');
        write_term(out, t);
        out.push(')');
    } else {
        write_term(out, t);
    }
}

fn write_args(out: &mut String, args: &[Term]) {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(out, a);
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

pub fn print_atom(a: &Atom) -> String {
    let mut s = String::new();
    match a.args.as_slice() {
        [l, r] if is_relation(&a.pred) => {
            write_term(&mut s, l);
            let _ = write!(s, " {} ", a.pred);
            write_term(&mut s, r);
        }
        [] => s.push_str(&a.pred),
        args => {
            s.push_str(&a.pred);
            s.push('(');
            write_args(&mut s, args);
            s.push(')');
        }
    }
    s
}

/// Prints one disjunct. With `group`, a quantifier-free conjunction of more
/// than one atom is parenthesized.
pub fn print_disjunct(d: &Disjunct, group: bool) -> String {
    let conj = d
        .conjuncts
        .iter()
        .map(print_atom)
        .collect::<Vec<_>>()
        .join(" /\\ ");
    if !d.exists.is_empty() {
        format!("exists {}. {conj}", d.exists.join(", "))
    } else if group && d.conjuncts.len() > 1 {
        format!("({conj})")
    } else {
        conj
    }
}

pub fn print_clause(c: &Clause) -> String {
    let head = print_atom(&c.head);
    let ds = c.body.disjuncts();
    if ds.len() == 1 {
        return format!("{head} <- {};", print_disjunct(&ds[0], false));
    }
    let mut s = format!("{head} <-");
    for (i, d) in ds.iter().enumerate() {
        let sep = if i + 1 == ds.len() { ";" } else { " \\/" };
        let _ = write!(s, "\n    {}{sep}", print_disjunct(d, true));
    }
    s
}

/// Signature header followed by one clause per predicate.
pub fn pretty_print(p: &Program) -> String {
    let sig = &p.signature;
    let mut lines = Vec::new();
    let consts: Vec<&str> = sig.constants().collect();
    if !consts.is_empty() {
        lines.push(format!("const {};", consts.join(", ")));
    }
    let funcs: Vec<String> = sig.functions().map(|(f, k)| format!("{f}/{k}")).collect();
    if !funcs.is_empty() {
        lines.push(format!("func {};", funcs.join(", ")));
    }
    let preds: Vec<String> = sig
        .user_predicates()
        .filter(|(q, _)| !sig.is_extensional(q))
        .map(|(q, k)| format!("{q}/{k}"))
        .collect();
    if !preds.is_empty() {
        lines.push(format!("pred {};", preds.join(", ")));
    }
    let ext: Vec<String> = sig
        .user_predicates()
        .filter(|(q, _)| sig.is_extensional(q))
        .map(|(q, k)| format!("{q}/{k}"))
        .collect();
    if !ext.is_empty() {
        lines.push(format!("extern pred {};", ext.join(", ")));
    }
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    for c in p.clauses.values() {
        out.push('\n');
        out.push_str(&print_clause(c));
        out.push('\n');
    }
    out
}
