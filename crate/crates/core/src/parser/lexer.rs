//! Tokenizer shared by program, data, domain and mode files.

use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Numeric literal, kept verbatim: `17`, `0.5`, `1e-3`, `0x1.8p1`.
    Number(String),
    Arrow,
    Or,
    And,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    DotDot,
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Arrow => "<-",
            Tok::Or => "\\/",
            Tok::And => "/\\",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::DotDot => "..",
            Tok::Eq => "=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Ident(_) | Tok::Number(_) | Tok::Eof => "",
        }
    }

    /// Symbols usable as infix predicate names.
    pub fn relation_name(&self) -> Option<&'static str> {
        match self {
            Tok::Eq => Some("="),
            Tok::Lt => Some("<"),
            Tok::Le => Some("<="),
            Tok::Gt => Some(">"),
            Tok::Ge => Some(">="),
            _ => None,
        }
    }

    /// Symbols usable as infix function names, with binding strength.
    pub fn operator(&self) -> Option<(&'static str, u8)> {
        match self {
            Tok::Plus => Some(("+", 1)),
            Tok::Minus => Some(("-", 1)),
            Tok::Star => Some(("*", 2)),
            Tok::Slash => Some(("/", 2)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// True if `s` lexes as a single identifier token.
pub fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_continue)
}

/// True if `s` lexes as a single numeric literal.
pub fn is_number(s: &str) -> bool {
    matches!(tokenize(s).as_deref(), Ok([Token { tok: Tok::Number(n), .. }, _]) if n == s)
}

/// Splits `src` into tokens, ending with [`Tok::Eof`].
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    Lexer::new(src).run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn run(mut self) -> Result<Vec<Token>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let start = (self.line, self.col);
            let Some(c) = self.peek(0) else {
                out.push(Token {
                    tok: Tok::Eof,
                    span: SourceSpan::new(start, start),
                });
                return Ok(out);
            };
            let tok = if is_ident_start(c) {
                let mut s = String::new();
                while let Some(c) = self.peek(0).filter(|&c| is_ident_continue(c)) {
                    s.push(c);
                    self.bump();
                }
                Tok::Ident(s)
            } else if c.is_ascii_digit() {
                Tok::Number(self.number(start)?)
            } else {
                self.symbol(c, start)?
            };
            out.push(Token {
                tok,
                span: SourceSpan::new(start, (self.line, self.col)),
            });
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek(0) {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek(0) {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn digits(&mut self, s: &mut String, hex: bool) -> usize {
        let mut n = 0;
        while let Some(c) = self.peek(0).filter(|c| {
            if hex {
                c.is_ascii_hexdigit()
            } else {
                c.is_ascii_digit()
            }
        }) {
            s.push(c);
            self.bump();
            n += 1;
        }
        n
    }

    fn number(&mut self, start: (usize, usize)) -> Result<String, Diagnostic> {
        let mut s = String::new();
        let bad = |s: &str, line, col| {
            Diagnostic::new(DiagCode::InvalidNumber, format!("malformed number `{s}`"))
                .at(Some(SourceSpan::new(start, (line, col))))
        };
        if self.peek(0) == Some('0') && matches!(self.peek(1), Some('x' | 'X')) {
            s.push('0');
            self.bump();
            s.push(self.bump().unwrap_or('x'));
            let whole = self.digits(&mut s, true);
            let mut frac = 0;
            if self.peek(0) == Some('.') && self.peek(1).is_some_and(|c| c.is_ascii_hexdigit()) {
                s.push('.');
                self.bump();
                frac = self.digits(&mut s, true);
            }
            if whole + frac == 0 {
                return Err(bad(&s, self.line, self.col));
            }
            if matches!(self.peek(0), Some('p' | 'P')) {
                s.push('p');
                self.bump();
                if let Some(sign @ ('+' | '-')) = self.peek(0) {
                    s.push(sign);
                    self.bump();
                }
                if self.digits(&mut s, false) == 0 {
                    return Err(bad(&s, self.line, self.col));
                }
            }
            return Ok(s);
        }
        self.digits(&mut s, false);
        if self.peek(0) == Some('.') && self.peek(1).is_some_and(|c| c.is_ascii_digit()) {
            s.push('.');
            self.bump();
            self.digits(&mut s, false);
        }
        if matches!(self.peek(0), Some('e' | 'E')) {
            let signed = matches!(self.peek(1), Some('+' | '-'));
            let digit_at = if signed { 2 } else { 1 };
            if self.peek(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                s.push('e');
                self.bump();
                if signed {
                    s.push(self.bump().unwrap_or('+'));
                }
                self.digits(&mut s, false);
            }
        }
        if self.peek(0).is_some_and(is_ident_start) {
            while let Some(c) = self.peek(0).filter(|&c| is_ident_continue(c)) {
                s.push(c);
                self.bump();
            }
            return Err(bad(&s, self.line, self.col));
        }
        Ok(s)
    }

    fn symbol(&mut self, c: char, start: (usize, usize)) -> Result<Tok, Diagnostic> {
        let next = self.peek(1);
        let (tok, len) = match (c, next) {
            ('<', Some('-')) => (Tok::Arrow, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('>', Some('=')) => (Tok::Ge, 2),
            ('\\', Some('/')) => (Tok::Or, 2),
            ('/', Some('\\')) => (Tok::And, 2),
            ('.', Some('.')) => (Tok::DotDot, 2),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            ('.', _) => (Tok::Dot, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            _ => {
                self.bump();
                return Err(Diagnostic::new(
                    DiagCode::UnexpectedCharacter,
                    format!("unexpected character {c:?}"),
                )
                .at(Some(SourceSpan::new(start, (self.line, self.col)))));
            }
        };
        for _ in 0..len {
            self.bump();
        }
        Ok(tok)
    }
}
