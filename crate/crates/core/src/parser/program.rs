//! Recursive-descent parser for `.rel` program files.
//!
//! ```text
//! const 0, nil;
//! func s/1, +/2;
//! pred even/1, odd/1;
//! extern pred </2;
//!
//! even(x) <- x = 0 \/ exists y. x = s(y) /\ odd(y);
//! ```
//!
//! Bare identifiers in clause bodies are variables unless declared as
//! constants; numeric literals are constants and are declared implicitly.

use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};
use crate::parser::lexer::{tokenize, Tok, Token};
use crate::syntax::{Atom, Clause, Disjunct, Program, Signature, SignatureError, Term};
use crate::validate::{validate, validate_clause};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum RawKind {
    Name(String),
    Num(String),
    Apply {
        f: String,
        args: Vec<RawTerm>,
        infix: bool,
    },
    List(Vec<RawTerm>),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RawTerm {
    pub kind: RawKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone)]
pub(crate) struct RawAtom {
    pub pred: String,
    pub args: Vec<RawTerm>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone)]
struct RawDisjunct {
    exists: Vec<(String, SourceSpan)>,
    conjuncts: Vec<RawAtom>,
}

enum Item {
    Atom(RawAtom),
    Group(Vec<RawDisjunct>, SourceSpan),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DeclKind {
    Const,
    Func,
    Pred,
    Extern,
}

struct Decl {
    kind: DeclKind,
    name: String,
    arity: usize,
    span: SourceSpan,
}

struct RawClause {
    head: RawAtom,
    body: Vec<RawDisjunct>,
    span: SourceSpan,
}

pub(crate) type PResult<T> = Result<T, Diagnostic>;

/// Token cursor with the term and atom grammar shared by every file kind.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

const MAX_NESTING: usize = 200;

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor {
            toks,
            pos: 0,
            depth: 0,
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            self.depth -= 1;
            return Err(
                Diagnostic::new(DiagCode::UnexpectedToken, "nesting is too deep")
                    .at(Some(self.span())),
            );
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    pub fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn unexpected(&self, wanted: &str) -> Diagnostic {
        let code = if self.at_eof() {
            DiagCode::UnexpectedEof
        } else {
            DiagCode::UnexpectedToken
        };
        Diagnostic::new(
            code,
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
        .at(Some(self.span()))
    }

    pub fn expect(&mut self, tok: &Tok) -> PResult<SourceSpan> {
        if self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{}`", tok.symbol())))
        }
    }

    pub fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn natural(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Number(n) => {
                let v = n.parse::<usize>().map_err(|_| {
                    Diagnostic::new(
                        DiagCode::InvalidNumber,
                        format!("`{n}` is not a small natural number"),
                    )
                    .at(Some(self.span()))
                })?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected("a natural number")),
        }
    }

    /// Skips past the next `;` (or to end of input) after an error.
    pub fn recover(&mut self) {
        while !self.at_eof() {
            if self.bump().tok == Tok::Semi {
                return;
            }
        }
    }

    pub fn term(&mut self) -> PResult<RawTerm> {
        self.expr(1)
    }

    fn expr(&mut self, min_prec: u8) -> PResult<RawTerm> {
        let mut lhs = self.primary()?;
        while let Some((op, prec)) = self.peek().operator() {
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.expr(prec + 1)?;
            let span = lhs.span.join(&rhs.span);
            lhs = RawTerm {
                kind: RawKind::Apply {
                    f: op.to_string(),
                    args: vec![lhs, rhs],
                    infix: true,
                },
                span,
            };
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> PResult<RawTerm> {
        self.enter()?;
        let r = self.primary_inner();
        self.leave();
        r
    }

    fn primary_inner(&mut self) -> PResult<RawTerm> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                if self.peek() == &Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    if self.peek() != &Tok::RParen {
                        loop {
                            args.push(self.term()?);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                    }
                    let end = self.expect(&Tok::RParen)?;
                    Ok(RawTerm {
                        kind: RawKind::Apply {
                            f: name,
                            args,
                            infix: false,
                        },
                        span: start.join(&end),
                    })
                } else {
                    Ok(RawTerm {
                        kind: RawKind::Name(name),
                        span: start,
                    })
                }
            }
            Tok::Number(n) => {
                self.bump();
                Ok(RawTerm {
                    kind: RawKind::Num(n),
                    span: start,
                })
            }
            Tok::Minus if matches!(self.peek_at(1), Tok::Number(_)) => {
                self.bump();
                let Tok::Number(n) = self.bump().tok else {
                    unreachable!()
                };
                Ok(RawTerm {
                    kind: RawKind::Num(format!("-{n}")),
                    span: start.join(&self.prev_span()),
                })
            }
            Tok::LBracket => {
                self.bump();
                let mut items = Vec::new();
                if self.peek() != &Tok::RBracket {
                    loop {
                        items.push(self.term()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                let end = self.expect(&Tok::RBracket)?;
                Ok(RawTerm {
                    kind: RawKind::List(items),
                    span: start.join(&end),
                })
            }
            Tok::LParen => {
                self.bump();
                let mut t = self.term()?;
                let end = self.expect(&Tok::RParen)?;
                t.span = start.join(&end);
                // a parenthesized operator application is no longer a bare call
                if let RawKind::Apply { infix, .. } = &mut t.kind {
                    *infix = true;
                }
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    /// `t1 op t2` for a relation symbol `op`, or `p(t, ...)`, or a bare `p`.
    pub fn atom(&mut self) -> PResult<RawAtom> {
        let lhs = self.term()?;
        if let Some(rel) = self.peek().relation_name() {
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.join(&rhs.span);
            return Ok(RawAtom {
                pred: rel.to_string(),
                args: vec![lhs, rhs],
                span,
            });
        }
        match lhs.kind {
            RawKind::Name(p) => Ok(RawAtom {
                pred: p,
                args: vec![],
                span: lhs.span,
            }),
            RawKind::Apply {
                f,
                args,
                infix: false,
            } => Ok(RawAtom {
                pred: f,
                args,
                span: lhs.span,
            }),
            _ => Err(self.unexpected("a relation symbol")),
        }
    }
}

struct ProgramParser {
    cur: Cursor,
    failed_groups: std::collections::HashSet<usize>,
    diags: Vec<Diagnostic>,
    decls: Vec<Decl>,
    clauses: Vec<RawClause>,
}

impl ProgramParser {
    fn run(mut self) -> (Vec<Decl>, Vec<RawClause>, Vec<Diagnostic>) {
        while !self.cur.at_eof() {
            let r = if self.declaration_ahead() {
                self.declaration()
            } else {
                self.clause()
            };
            if let Err(d) = r {
                self.diags.push(d);
                self.cur.recover();
            }
        }
        (self.decls, self.clauses, self.diags)
    }

    fn declaration_ahead(&self) -> bool {
        let kw = ["const", "func", "pred", "extern"]
            .iter()
            .any(|k| self.cur.is_keyword(k));
        kw && !matches!(self.cur.peek_at(1), Tok::LParen | Tok::Arrow)
    }

    fn declaration(&mut self) -> PResult<()> {
        let (kw, _) = self.cur.ident()?;
        let kind = match kw.as_str() {
            "const" => DeclKind::Const,
            "func" => DeclKind::Func,
            "pred" => DeclKind::Pred,
            _ => {
                if !self.cur.is_keyword("pred") {
                    return Err(self.cur.unexpected("`pred` after `extern`"));
                }
                self.cur.bump();
                DeclKind::Extern
            }
        };
        loop {
            let span = self.cur.span();
            let name = match (kind, self.cur.peek().clone()) {
                (_, Tok::Ident(s)) => s,
                (DeclKind::Const, Tok::Number(n)) => n,
                (DeclKind::Const, Tok::Minus) if matches!(self.cur.peek_at(1), Tok::Number(_)) => {
                    self.cur.bump();
                    match self.cur.peek().clone() {
                        Tok::Number(n) => format!("-{n}"),
                        _ => unreachable!(),
                    }
                }
                (DeclKind::Func, t) if t.operator().is_some() => t.symbol().to_string(),
                (DeclKind::Pred | DeclKind::Extern, t) if t.relation_name().is_some() => {
                    t.symbol().to_string()
                }
                _ => return Err(self.cur.unexpected("a symbol name")),
            };
            self.cur.bump();
            let arity = if kind == DeclKind::Const {
                0
            } else {
                self.cur.expect(&Tok::Slash)?;
                self.cur.natural()?
            };
            self.decls.push(Decl {
                kind,
                name,
                arity,
                span: span.join(&self.cur.prev_span()),
            });
            if !self.cur.eat(&Tok::Comma) {
                break;
            }
        }
        self.cur.expect(&Tok::Semi)?;
        Ok(())
    }

    fn clause(&mut self) -> PResult<()> {
        let head = self.cur.atom()?;
        self.cur.expect(&Tok::Arrow)?;
        let body = self.body()?;
        let end = self.cur.expect(&Tok::Semi)?;
        let span = head.span.join(&end);
        self.clauses.push(RawClause { head, body, span });
        Ok(())
    }

    fn body(&mut self) -> PResult<Vec<RawDisjunct>> {
        let mut out = self.disjunct()?;
        while self.cur.eat(&Tok::Or) {
            out.extend(self.disjunct()?);
        }
        Ok(out)
    }

    /// One surface disjunct. A parenthesized body standing alone may
    /// contribute several disjuncts.
    fn disjunct(&mut self) -> PResult<Vec<RawDisjunct>> {
        if self.cur.is_keyword("exists") && matches!(self.cur.peek_at(1), Tok::Ident(_)) {
            self.cur.bump();
            let mut exists = Vec::new();
            loop {
                exists.push(self.cur.ident()?);
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
            }
            self.cur.expect(&Tok::Dot)?;
            let items = self.conjunction()?;
            let conjuncts = flatten(items)?;
            return Ok(vec![RawDisjunct { exists, conjuncts }]);
        }
        let mut items = self.conjunction()?;
        if items.len() == 1 {
            if let Item::Group(..) = items[0] {
                let Some(Item::Group(ds, _)) = items.pop() else {
                    unreachable!()
                };
                return Ok(ds);
            }
        }
        Ok(vec![RawDisjunct {
            exists: vec![],
            conjuncts: flatten(items)?,
        }])
    }

    fn conjunction(&mut self) -> PResult<Vec<Item>> {
        let mut items = vec![self.conjunct()?];
        while self.cur.eat(&Tok::And) {
            if self.cur.is_keyword("exists") && matches!(self.cur.peek_at(1), Tok::Ident(_)) {
                return Err(Diagnostic::new(
                    DiagCode::NestedQuantifier,
                    "`exists` may only prefix a whole disjunct",
                )
                .at(Some(self.cur.span())));
            }
            items.push(self.conjunct()?);
        }
        Ok(items)
    }

    fn conjunct(&mut self) -> PResult<Item> {
        if self.cur.peek() != &Tok::LParen {
            return self.cur.atom().map(Item::Atom);
        }
        let save = self.cur.pos;
        if self.failed_groups.contains(&save) {
            return self.cur.atom().map(Item::Atom);
        }
        let start = self.cur.span();
        self.cur.enter()?;
        self.cur.bump();
        let group = self.body().and_then(|ds| {
            let end = self.cur.expect(&Tok::RParen)?;
            match self.cur.peek() {
                Tok::And | Tok::Or | Tok::Semi | Tok::RParen | Tok::Eof => {
                    Ok(Item::Group(ds, start.join(&end)))
                }
                _ => Err(self.cur.unexpected("`/\\`, `\\/`, `)` or `;`")),
            }
        });
        self.cur.leave();
        match group {
            Ok(item) => Ok(item),
            Err(group_err) => {
                self.failed_groups.insert(save);
                let group_pos = self.cur.pos;
                self.cur.pos = save;
                match self.cur.atom() {
                    Ok(a) => Ok(Item::Atom(a)),
                    Err(atom_err) => {
                        // report whichever reading got further
                        if group_pos > self.cur.pos {
                            Err(group_err)
                        } else {
                            Err(atom_err)
                        }
                    }
                }
            }
        }
    }
}

fn flatten(items: Vec<Item>) -> PResult<Vec<RawAtom>> {
    let mut out = Vec::new();
    for item in items {
        match item {
            Item::Atom(a) => out.push(a),
            Item::Group(mut ds, span) => {
                if ds.len() != 1 {
                    return Err(Diagnostic::new(
                        DiagCode::NestedDisjunction,
                        "a disjunction cannot appear inside a conjunction",
                    )
                    .at(Some(span)));
                }
                let d = ds.pop().unwrap();
                if !d.exists.is_empty() {
                    return Err(Diagnostic::new(
                        DiagCode::NestedQuantifier,
                        "`exists` may only prefix a whole disjunct",
                    )
                    .at(Some(span)));
                }
                out.extend(d.conjuncts);
            }
        }
    }
    Ok(out)
}

fn signature_diag(e: SignatureError, span: &SourceSpan) -> Diagnostic {
    let code = match e {
        SignatureError::Reserved(_) => DiagCode::ReservedSymbol,
        SignatureError::ClassConflict { .. } => DiagCode::SymbolClassConflict,
        SignatureError::ZeroArityFunction(_) => DiagCode::ZeroArityFunction,
        SignatureError::ConflictingArity { .. } => DiagCode::ConflictingArity,
    };
    Diagnostic::new(code, e.to_string()).at(Some(span.clone()))
}

struct Resolver<'a> {
    sig: &'a mut Signature,
    diags: &'a mut Vec<Diagnostic>,
    pred: String,
}

impl Resolver<'_> {
    fn term(&mut self, t: &RawTerm) -> Term {
        match &t.kind {
            RawKind::Num(n) => {
                if let Err(e) = self.sig.add_constant(n) {
                    self.diags
                        .push(signature_diag(e, &t.span).in_predicate(&self.pred));
                }
                Term::Const(n.clone())
            }
            RawKind::Name(n) => {
                if self.sig.is_constant(n) {
                    Term::Const(n.clone())
                } else {
                    if self.sig.function_arity(n).is_some() || self.sig.predicate_arity(n).is_some()
                    {
                        self.diags.push(
                            Diagnostic::new(
                                DiagCode::SymbolClassConflict,
                                format!(
                                    "`{n}` is a declared symbol and cannot be used as a variable"
                                ),
                            )
                            .in_predicate(&self.pred)
                            .at(Some(t.span.clone())),
                        );
                    }
                    Term::Var(n.clone())
                }
            }
            RawKind::Apply { f, args, .. } => {
                Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect())
            }
            RawKind::List(_) => {
                self.diags.push(
                    Diagnostic::new(
                        DiagCode::UnexpectedToken,
                        "list literals are only allowed in data files",
                    )
                    .in_predicate(&self.pred)
                    .at(Some(t.span.clone())),
                );
                Term::Var("_".to_string())
            }
        }
    }

    fn atom(&mut self, a: &RawAtom) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| self.term(t)).collect(),
            span: Some(a.span.clone()),
        }
    }

    fn binder(&mut self, name: &str, span: &SourceSpan) {
        if self.sig.is_constant(name)
            || self.sig.function_arity(name).is_some()
            || self.sig.predicate_arity(name).is_some()
        {
            self.diags.push(
                Diagnostic::new(
                    DiagCode::SymbolClassConflict,
                    format!("`{name}` is a declared symbol and cannot be used as a variable"),
                )
                .in_predicate(&self.pred)
                .at(Some(span.clone())),
            );
        }
    }
}

/// Builds a signature from header declarations, reporting conflicts.
fn build_signature(decls: &[Decl], diags: &mut Vec<Diagnostic>) -> Signature {
    let mut sig = Signature::new();
    for d in decls {
        let r = match d.kind {
            DeclKind::Const => sig.add_constant(&d.name),
            DeclKind::Func => sig.add_function(&d.name, d.arity),
            DeclKind::Pred => sig.add_predicate(&d.name, d.arity),
            DeclKind::Extern => sig.add_extensional(&d.name, d.arity),
        };
        if let Err(e) = r {
            diags.push(signature_diag(e, &d.span));
        }
    }
    sig
}

/// Parses and validates a program. Parsing is total: malformed input of any
/// kind comes back as diagnostics.
pub fn parse_program(text: &str) -> Result<Program, Vec<Diagnostic>> {
    parse_program_named(text, None)
}

/// As [`parse_program`], attaching `file` to every span.
pub fn parse_program_named(text: &str, file: Option<&str>) -> Result<Program, Vec<Diagnostic>> {
    let tag = |mut ds: Vec<Diagnostic>| {
        if let Some(f) = file {
            for d in &mut ds {
                d.span = d.span.take().map(|s| s.with_file(f));
            }
        }
        ds
    };
    let toks = tokenize(text).map_err(|d| tag(vec![d]))?;
    let parser = ProgramParser {
        cur: Cursor::new(toks),
        failed_groups: Default::default(),
        diags: Vec::new(),
        decls: Vec::new(),
        clauses: Vec::new(),
    };
    let (decls, raw_clauses, mut diags) = parser.run();
    let mut sig = build_signature(&decls, &mut diags);

    let mut clauses = Vec::new();
    for rc in &raw_clauses {
        let mut r = Resolver {
            sig: &mut sig,
            diags: &mut diags,
            pred: rc.head.pred.clone(),
        };
        let head = r.atom(&rc.head);
        let mut body = Vec::new();
        for d in &rc.body {
            for (name, span) in &d.exists {
                r.binder(name, span);
            }
            body.push(Disjunct::new(
                d.exists.iter().map(|(n, _)| n.clone()).collect(),
                d.conjuncts.iter().map(|a| r.atom(a)).collect(),
            ));
        }
        clauses.push(Clause {
            head,
            body: crate::syntax::Body(body),
            span: Some(rc.span.clone()),
        });
    }

    let mut program = Program::new(sig);
    for c in clauses {
        if let Err(rejected) = program.add_clause(c) {
            let before = diags.len();
            validate_clause(&program.signature, &rejected, &mut diags);
            if diags.len() == before {
                let existing = program
                    .clause(rejected.pred())
                    .expect("merge target exists");
                validate_clause(&program.signature, existing, &mut diags);
            }
            if diags.len() == before {
                diags.push(
                    Diagnostic::new(
                        DiagCode::ArityMismatch,
                        "clause heads for this predicate differ in arity",
                    )
                    .in_predicate(rejected.pred())
                    .at(rejected.span.clone()),
                );
            }
        }
    }
    if diags.is_empty() {
        diags.extend(validate(&program));
    }
    if diags.is_empty() {
        Ok(program)
    } else {
        Err(tag(diags))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::FreeVars;

    const EVEN_ODD: &str = "
        const 0;
        func s/1;
        pred even/1, odd/1;
        even(x) <- x = 0 \\/ exists y. x = s(y) /\\ odd(y);
        odd(x) <- exists y. x = s(y) /\\ even(y);
    ";

    fn codes(src: &str) -> Vec<DiagCode> {
        parse_program(src)
            .unwrap_err()
            .into_iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn even_odd_program() {
        let p = parse_program(EVEN_ODD).unwrap();
        let even = p.clause("even").unwrap();
        assert_eq!(even.body.0.len(), 2);
        assert_eq!(
            even.body.0[0].conjuncts[0],
            Atom::eq(Term::var("x"), Term::constant("0"))
        );
        let d = &even.body.0[1];
        assert_eq!(d.exists, vec!["y".to_string()]);
        assert_eq!(
            d.conjuncts,
            vec![
                Atom::eq(Term::var("x"), Term::app("s", vec![Term::var("y")])),
                Atom::new("odd", vec![Term::var("y")]),
            ]
        );
        assert_eq!(
            d.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["x".to_string()]
        );
    }

    #[test]
    fn empty_input() {
        let p = parse_program("").unwrap();
        assert!(p.clauses.is_empty());
        let p = parse_program("  # only a comment\r\n").unwrap();
        assert!(p.clauses.is_empty());
    }

    #[test]
    fn sort_clause_with_extensional_helpers() {
        let src = "
            const nil;
            pred sort/2;
            extern pred split/3, merge/3;
            sort(v,w) <- (v = nil /\\ w = nil) \\/ exists v0,v1,w0,w1. split(v,v0,v1) /\\ sort(v0,w0) /\\ sort(v1,w1) /\\ merge(w0,w1,w);
        ";
        let p = parse_program(src).unwrap();
        let c = p.clause("sort").unwrap();
        assert_eq!(c.body.0.len(), 2);
        assert_eq!(c.body.0[0].conjuncts.len(), 2);
        assert_eq!(c.body.0[1].exists, vec!["v0", "v1", "w0", "w1"]);
        assert_eq!(c.body.0[1].conjuncts[3].pred, "merge");
    }

    #[test]
    fn parenthesized_terms_and_groups() {
        let src = "
            func +/2, */2;
            extern pred <=/2;
            pred p/2;
            p(a, b) <- (b + b) <= a \\/ ((a <= b) /\\ a = 2 * (b + 1));
        ";
        let p = parse_program(src).unwrap();
        let c = p.clause("p").unwrap();
        assert_eq!(c.body.0.len(), 2);
        let plus = |l, r| Term::app("+", vec![l, r]);
        assert_eq!(
            c.body.0[0].conjuncts[0].args[0],
            plus(Term::var("b"), Term::var("b"))
        );
        assert_eq!(
            c.body.0[1].conjuncts[1].args[1],
            Term::app(
                "*",
                vec![
                    Term::constant("2"),
                    plus(Term::var("b"), Term::constant("1"))
                ]
            )
        );
    }

    #[test]
    fn operator_precedence() {
        let src = "func +/2, -/2, */2; pred p/1; p(x) <- x = 1 - 2 - 3 * 4;";
        let p = parse_program(src).unwrap();
        let rhs = &p.clause("p").unwrap().body.0[0].conjuncts[0].args[1];
        let c = |n: &str| Term::constant(n);
        assert_eq!(
            *rhs,
            Term::app(
                "-",
                vec![
                    Term::app("-", vec![c("1"), c("2")]),
                    Term::app("*", vec![c("3"), c("4")])
                ]
            )
        );
    }

    #[test]
    fn multiple_clauses_are_merged() {
        let src = "
            const 0; func s/1; pred nat/1;
            nat(x) <- x = 0;
            nat(z) <- exists y. z = s(y) /\\ nat(y);
        ";
        let p = parse_program(src).unwrap();
        let c = p.clause("nat").unwrap();
        assert_eq!(c.body.0.len(), 2);
        assert_eq!(c.body.0[1].conjuncts[0].args[0], Term::var("x"));
    }

    #[test]
    fn diagnostics() {
        assert_eq!(
            codes("pred p/2; const 0; p(x,x) <- x = 0;"),
            vec![DiagCode::RepeatedHeadVariable]
        );
        assert_eq!(
            codes("pred p/1; extern pred q/2; p(x) <- q(x,y);"),
            vec![DiagCode::UnquantifiedBodyVariable]
        );
        assert_eq!(
            codes("pred p/1; p(x) <- x = "),
            vec![DiagCode::UnexpectedEof]
        );
        assert_eq!(codes("pred =/2;"), vec![DiagCode::ReservedSymbol]);
        assert_eq!(
            codes("const a; pred a/1;"),
            vec![DiagCode::SymbolClassConflict]
        );
        assert_eq!(
            codes("extern pred q/1, r/1; pred p/1; p(x) <- q(x) /\\ (r(x) \\/ q(x));"),
            vec![DiagCode::NestedDisjunction]
        );
        assert_eq!(
            codes("extern pred q/2; pred p/1; p(x) <- q(x, x) /\\ exists y. q(x, y);"),
            vec![DiagCode::NestedQuantifier]
        );
        assert_eq!(codes("p(x) <- x = x;"), vec![DiagCode::UndeclaredPredicate]);
    }

    #[test]
    fn errors_recover_at_semicolon() {
        let errs = parse_program("pred p/1; p(x) <- x = ; p(x) <- ) ;").unwrap_err();
        assert_eq!(errs.len(), 2);
        assert!(errs.iter().all(|d| d.span.is_some()));
    }

    #[test]
    fn file_name_in_spans() {
        let errs = parse_program_named("pred p/1;\np(x) <- x ? 1;", Some("bad.rel")).unwrap_err();
        assert_eq!(errs[0].span.as_ref().unwrap().to_string(), "bad.rel:2:11");
    }
}
