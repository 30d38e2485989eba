//! Mode declarations: which arguments of a predicate are inputs.
//!
//! ```text
//! # one line per predicate
//! q: in,in,out,out
//! aux: in,out,out,in,in
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};
use crate::syntax::{is_reserved_predicate, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    In,
    Out,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::In => "in",
            Mode::Out => "out",
        })
    }
}

/// One mode per predicate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeDecl {
    modes: BTreeMap<String, Vec<Mode>>,
    spans: BTreeMap<String, SourceSpan>,
}

impl ModeDecl {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, pred: &str, modes: Vec<Mode>) {
        self.modes.insert(pred.to_string(), modes);
    }

    pub fn get(&self, pred: &str) -> Option<&[Mode]> {
        self.modes.get(pred).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Mode])> {
        self.modes.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Declarations that do not fit the program's signature.
    pub fn check_against(&self, p: &Program) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (q, ms) in &self.modes {
            let span = self.spans.get(q).cloned();
            match p.signature.predicate_arity(q) {
                None if !is_reserved_predicate(q) => out.push(
                    Diagnostic::new(
                        DiagCode::UnknownModePredicate,
                        format!("mode given for unknown predicate `{q}`"),
                    )
                    .at(span),
                ),
                None => out.push(
                    Diagnostic::new(
                        DiagCode::UnknownModePredicate,
                        format!("`{q}` is built in and takes no mode"),
                    )
                    .at(span),
                ),
                Some(k) if k != ms.len() => out.push(
                    Diagnostic::new(
                        DiagCode::ModeArityMismatch,
                        format!(
                            "mode for `{q}` has {} positions, the predicate has {k}",
                            ms.len()
                        ),
                    )
                    .in_predicate(q.as_str())
                    .at(span),
                ),
                Some(_) if p.signature.is_extensional(q) && ms.contains(&Mode::Out) => out.push(
                    Diagnostic::new(
                        DiagCode::ExtensionalOutputMode,
                        format!("extern predicate `{q}` can only be used with all-input modes"),
                    )
                    .in_predicate(q.as_str())
                    .at(span),
                ),
                Some(_) => {}
            }
        }
        out
    }
}

impl fmt::Display for ModeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, ms) in &self.modes {
            let ms: Vec<String> = ms.iter().map(Mode::to_string).collect();
            if ms.is_empty() {
                writeln!(f, "{q}:")?;
            } else {
                writeln!(f, "{q}: {}", ms.join(","))?;
            }
        }
        Ok(())
    }
}

/// Parses a `.modes` file.
pub fn parse_modes(text: &str) -> Result<ModeDecl, Vec<Diagnostic>> {
    let mut decl = ModeDecl::new();
    let mut errors = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let col = raw.find(line).unwrap_or(0) + 1;
        let span = SourceSpan::new((n + 1, col), (n + 1, col + line.len()));
        let err =
            |msg: String| Diagnostic::new(DiagCode::UnexpectedToken, msg).at(Some(span.clone()));
        let Some((name, rest)) = line.split_once(':') else {
            errors.push(err(format!(
                "expected `predicate: in,out,...`, found `{line}`"
            )));
            continue;
        };
        let name = name.trim();
        if name.is_empty() {
            errors.push(err("missing predicate name".into()));
            continue;
        }
        let rest = rest.trim();
        let mut modes = Vec::new();
        let mut ok = true;
        if !rest.is_empty() {
            for m in rest.split(',') {
                match m.trim() {
                    "in" => modes.push(Mode::In),
                    "out" => modes.push(Mode::Out),
                    other => {
                        errors.push(err(format!("expected `in` or `out`, found `{other}`")));
                        ok = false;
                        break;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        if decl.modes.contains_key(name) {
            errors.push(err(format!(
                "second mode for `{name}`; only one mode per predicate is supported"
            )));
            continue;
        }
        decl.spans.insert(name.to_string(), span);
        decl.set(name, modes);
    }
    if errors.is_empty() {
        Ok(decl)
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let d =
            parse_modes("# quotient\nq: in,in,out,out\n\naux: in, out, out, in, in\np:\n").unwrap();
        assert_eq!(
            d.get("q"),
            Some(&[Mode::In, Mode::In, Mode::Out, Mode::Out][..])
        );
        assert_eq!(d.get("p"), Some(&[][..]));
        assert_eq!(
            d.to_string(),
            "aux: in,out,out,in,in\np:\nq: in,in,out,out\n"
        );
        let e = parse_modes("q in\nr: in,maybe\n").unwrap_err();
        assert_eq!(e.len(), 2);
        assert_eq!(e[1].span.as_ref().unwrap().start_line, 2);
    }
}
