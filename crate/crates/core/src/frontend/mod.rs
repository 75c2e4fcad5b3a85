//! Surface language: `.rbm` files of `def name : TYPE := TERM` declarations.

pub mod ast;
pub mod elab;
mod lexer;
pub mod parser;
pub mod pretty;
pub mod span;

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::cost::CostModel;

pub use elab::{elaborate, elaborate_expr, Decl, Program};
pub use parser::{parse_bound, parse_expr, parse_file};
pub use span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// What would have been accepted at the error position.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: syntax error: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElabError {
    pub span: SourceSpan,
    pub message: String,
}

impl fmt::Display for ElabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ElabError {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Elab(#[from] ElabError),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

impl FrontendError {
    pub fn span(&self) -> Option<&SourceSpan> {
        match self {
            FrontendError::Parse(e) => Some(&e.span),
            FrontendError::Elab(e) => Some(&e.span),
            FrontendError::Io { .. } => None,
        }
    }
}

/// Parse and elaborate source text.
pub fn load_str(file: &str, src: &str, base: &CostModel) -> Result<Program, FrontendError> {
    let surface = parse_file(file, src)?;
    Ok(elaborate(&surface, base)?)
}

pub fn load_file(path: &Path, base: &CostModel) -> Result<Program, FrontendError> {
    let src = std::fs::read_to_string(path).map_err(|e| FrontendError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    load_str(&path.display().to_string(), &src, base)
}
