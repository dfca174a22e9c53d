use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::Name;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("cannot match expected type `{expected}` with `{found}`")]
    Mismatch { expected: String, found: String },
    #[error("cannot construct the infinite type `{var} ~ {ty}`")]
    Occurs { var: String, ty: String },
    #[error("variable not in scope: {0}")]
    Unbound(String),
    #[error("unknown type constructor `{0}`")]
    UnknownType(String),
    #[error("constructor `{name}` expects {expected} arguments but was given {found}")]
    ConstructorArity { name: String, expected: usize, found: usize },
    #[error("the signature `{declared}` of `{name}` is more general than its inferred type `{inferred}`")]
    SignatureTooGeneral { name: String, declared: String, inferred: String },
    #[error("equations for `{0}` have different numbers of arguments")]
    ClauseArity(String),
}

impl TypeErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            TypeErrorKind::Mismatch { .. } => "UnificationFailure",
            TypeErrorKind::Occurs { .. } => "OccursCheck",
            TypeErrorKind::Unbound(_) => "UnboundVariable",
            TypeErrorKind::UnknownType(_) => "UnknownType",
            TypeErrorKind::ConstructorArity { .. } => "ConstructorArity",
            TypeErrorKind::SignatureTooGeneral { .. } => "SignatureTooGeneral",
            TypeErrorKind::ClauseArity(_) => "ClauseArity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    /// Binding in which the error was detected.
    pub binding: Option<String>,
    pub pos: Option<Pos>,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.pos {
            write!(f, "{p}: ")?;
        }
        write!(f, "{}", self.kind)?;
        if let Some(b) = &self.binding {
            write!(f, " (in the definition of `{b}`)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("<<loop>>: `{0}` depends on its own value")]
    BlackHole(Name),
    #[error("unbound variable `{0:?}`")]
    Unbound(Name),
    #[error("{op}: unexpected operand {operand}")]
    PrimitiveType { op: &'static str, operand: String },
    #[error("{0}")]
    Arithmetic(String),
    #[error("cannot compare functions for equality")]
    FunctionEquality,
    #[error("pattern match failure in {0}")]
    MatchFailure(String),
    #[error("no rule applies: {0}")]
    Stuck(String),
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(u64),
    #[error("evaluation nested too deeply")]
    TooDeep,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("runtime error: {0}")]
    Runtime(#[from] RuntimeError),
}

/// Machine-readable error report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: &'static str,
    /// Finer classification, e.g. `UnificationFailure`.
    pub code: &'static str,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl Error {
    pub fn diagnostic(&self) -> Diagnostic {
        let (kind, code, pos, message) = match self {
            Error::Syntax(e) => ("syntax", "SyntaxError", Some(e.pos), e.message.clone()),
            Error::Type(e) => {
                let mut msg = e.kind.to_string();
                if let Some(b) = &e.binding {
                    msg.push_str(&format!(" (in the definition of `{b}`)"));
                }
                ("type", e.kind.code(), e.pos, msg)
            }
            Error::Runtime(e) => ("runtime", "RuntimeError", None, e.to_string()),
        };
        Diagnostic { kind, code, line: pos.map(|p| p.line), column: pos.map(|p| p.column), message }
    }
}
