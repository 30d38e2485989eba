//! C-style pseudocode for a [`ProcUnit`].
//!
//! ```text
//! bool q(a, b, m, u){
//!   if (a < b) { m = 0; u = a; return true; }
//!   if (b+b <= a) { loc n; loc v; // local variables
//!     return q(a, b+b, n, v) && aux(b, m, u, n, v);
//!   }
//!   return false;
//! }
//! ```

use std::fmt::Write;

use crate::syntax::Term;

use super::ir::{Branch, Cond, ProcFunction, ProcUnit, Stmt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Precede each branch with a comment quoting its disjunct.
    pub provenance: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { provenance: true }
    }
}

fn precedence(f: &str) -> Option<u8> {
    match f {
        "+" | "-" => Some(1),
        "*" | "/" => Some(2),
        _ => None,
    }
}

fn expr(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) | Term::Const(v) => out.push_str(v),
        Term::App(f, args) => match (precedence(f), args.as_slice()) {
            (Some(p), [l, r]) => {
                operand(out, l, p, false);
                out.push_str(f);
                operand(out, r, p, true);
            }
            _ => {
                out.push_str(f);
                out.push('(');
                list(out, args);
                out.push(')');
            }
        },
    }
}

fn operand(out: &mut String, t: &Term, parent: u8, right: bool) {
    let wrap = match t {
        Term::App(f, args) if args.len() == 2 => {
            precedence(f).is_some_and(|p| p < parent || (right && p == parent))
        }
        _ => false,
    };
    if wrap {
        out.push('(');
    }
    expr(out, t);
    if wrap {
        out.push(')');
    }
}

fn list(out: &mut String, ts: &[Term]) {
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        expr(out, t);
    }
}

fn cond(out: &mut String, c: &Cond) {
    match (c.pred.as_str(), c.args.as_slice()) {
        ("=", [l, r]) => {
            expr(out, l);
            out.push_str(" == ");
            expr(out, r);
        }
        ("<" | "<=" | ">" | ">=", [l, r]) => {
            expr(out, l);
            let _ = write!(out, " {} ", c.pred);
            expr(out, r);
        }
        (p, []) => out.push_str(p),
        (p, args) => {
            out.push_str(p);
            out.push('(');
            list(out, args);
            out.push(')');
        }
    }
}

fn fallible(out: &mut String, s: &Stmt) {
    match s {
        Stmt::Test(c) => cond(out, c),
        Stmt::Match { value, pattern, .. } => {
            out.push_str("match(");
            expr(out, value);
            out.push_str(", ");
            expr(out, pattern);
            out.push(')');
        }
        Stmt::Call { pred, args, .. } => {
            out.push_str(pred);
            out.push('(');
            list(out, args);
            out.push(')');
        }
        Stmt::Assign { .. } => unreachable!(),
    }
}

/// Assignments run in sequence; a run of fallible steps at the end becomes
/// the returned conjunction, elsewhere it guards the remainder.
fn sequence(out: &mut String, steps: &[Stmt]) {
    let mut i = 0;
    while let Some(Stmt::Assign { var, expr: e }) = steps.get(i) {
        let _ = write!(out, "{var} = ");
        expr(out, e);
        out.push_str("; ");
        i += 1;
    }
    let run = steps[i..].iter().take_while(|s| s.is_fallible()).count();
    if run == 0 {
        out.push_str("return true;");
        return;
    }
    let mut conj = String::new();
    for (k, s) in steps[i..i + run].iter().enumerate() {
        if k > 0 {
            conj.push_str(" && ");
        }
        fallible(&mut conj, s);
    }
    let rest = &steps[i + run..];
    if rest.is_empty() {
        let _ = write!(out, "return {conj};");
    } else {
        let _ = write!(out, "if ({conj}) {{ ");
        sequence(out, rest);
        out.push_str(" }");
    }
}

fn branch(out: &mut String, b: &Branch, opts: RenderOptions) {
    if opts.provenance {
        let _ = writeln!(out, "  // disjunct {}: {}", b.disjunct, b.origin);
    }
    let mut header = String::new();
    if b.guard.is_empty() {
        header.push('{');
    } else {
        header.push_str("if (");
        for (k, c) in b.guard.iter().enumerate() {
            if k > 0 {
                header.push_str(" && ");
            }
            cond(&mut header, c);
        }
        header.push_str(") {");
    }
    let mut body = String::new();
    sequence(&mut body, &b.steps);
    if !b.locals.is_empty() {
        let locals: Vec<String> = b.locals.iter().map(|l| format!("loc {l};")).collect();
        let _ = writeln!(out, "  {header} {} // local variables", locals.join(" "));
        let _ = writeln!(out, "    {body}");
        out.push_str("  }\n");
    } else if b.guard.len() <= 1 {
        let _ = writeln!(out, "  {header} {body} }}");
    } else {
        let _ = writeln!(out, "  {header}");
        let _ = writeln!(out, "    {body}");
        out.push_str("  }\n");
    }
}

fn function(out: &mut String, f: &ProcFunction, opts: RenderOptions) {
    let params: Vec<&str> = f.params.iter().map(|(v, _)| v.as_str()).collect();
    let _ = writeln!(out, "bool {}({}){{", f.name, params.join(", "));
    for b in &f.branches {
        branch(out, b, opts);
    }
    out.push_str("  return false;\n}\n");
}

pub fn render_with(u: &ProcUnit, opts: RenderOptions) -> String {
    let mut out = String::new();
    for f in &u.functions {
        function(&mut out, f, opts);
    }
    out
}

/// Rendering with provenance comments.
pub fn render(u: &ProcUnit) -> String {
    render_with(u, RenderOptions::default())
}
