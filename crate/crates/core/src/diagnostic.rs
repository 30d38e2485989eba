//! Diagnostics shared by the parser, the validator, the binding planner and
//! the mode checker.

use std::fmt;

/// Position range in a source text. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn new(start: (usize, usize), end: (usize, usize)) -> Self {
        debug_assert!(start <= end);
        SourceSpan {
            file: None,
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    pub fn with_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }

    /// Smallest span covering both `self` and `other`.
    pub fn join(&self, other: &SourceSpan) -> SourceSpan {
        let start = (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let end = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        SourceSpan {
            file: self.file.clone(),
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

/// Machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagCode {
    // lexical / syntactic
    UnexpectedCharacter,
    UnexpectedToken,
    UnexpectedEof,
    InvalidNumber,
    NestedDisjunction,
    NestedQuantifier,
    // signature
    SymbolClassConflict,
    ReservedSymbol,
    ZeroArityFunction,
    ConflictingArity,
    // clause / program shape
    NonVariableHeadArgument,
    RepeatedHeadVariable,
    UnquantifiedBodyVariable,
    HeadVariableNotInBody,
    DuplicateExistential,
    UnusedExistential,
    ExistentialShadowsHead,
    EmptyBody,
    EmptyDisjunct,
    UndeclaredPredicate,
    UndeclaredFunction,
    UndeclaredConstant,
    ArityMismatch,
    UndefinedPredicate,
    ClauseForExtensional,
    ClauseForReserved,
    ClauseKeyMismatch,
    // evaluation planning
    NotRangeRestricted,
    // mode analysis
    MissingMode,
    ModeArityMismatch,
    UnknownModePredicate,
    ExtensionalOutputMode,
    UnboundVariable,
    OutputArgumentBound,
    OutputArgumentNotVariable,
    UnboundOutput,
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A single finding. `predicate` names the clause the finding belongs to,
/// when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub message: String,
    pub predicate: Option<String>,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            message: message.into(),
            predicate: None,
            span: None,
        }
    }

    pub fn in_predicate(mut self, pred: impl Into<String>) -> Self {
        self.predicate = Some(pred.into());
        self
    }

    pub fn at(mut self, span: Option<SourceSpan>) -> Self {
        self.span = span;
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        write!(f, "error[{}]", self.code)?;
        if let Some(p) = &self.predicate {
            write!(f, " in {p}")?;
        }
        write!(f, ": {}", self.message)
    }
}
