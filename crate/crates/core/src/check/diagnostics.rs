use std::fmt;

use serde::Serialize;

use crate::frontend::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Severity {
    #[serde(rename = "error")]
    Error,
    #[serde(rename = "warning")]
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    TypeMismatch,
    BoxBudget,
    BoundExceeded,
    BoundDependency,
    UnboundVar,
    NotAType,
    CannotInfer,
    SizeVar,
    Normalization,
    AmbientBudget,
    EmpiricalDominance,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::TypeMismatch => "E-TYPE-MISMATCH",
            Code::BoxBudget => "E-BOX-BUDGET",
            Code::BoundExceeded => "E-BOUND-EXCEEDED",
            Code::BoundDependency => "E-BOUND-DEPENDENCY",
            Code::UnboundVar => "E-UNBOUND-VAR",
            Code::NotAType => "E-NOT-A-TYPE",
            Code::CannotInfer => "E-CANNOT-INFER",
            Code::SizeVar => "E-SIZE-VAR",
            Code::Normalization => "E-NORMALIZATION",
            Code::AmbientBudget => "W-AMBIENT-BUDGET",
            Code::EmpiricalDominance => "W-EMPIRICAL-DOMINANCE",
        }
    }

    pub fn severity(self) -> Severity {
        if self.as_str().starts_with('W') {
            Severity::Warning
        } else {
            Severity::Error
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub message: String,
    pub span: Option<SourceSpan>,
    /// Declaration being checked, when known.
    pub decl: Option<String>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: code.severity(),
            message: message.into(),
            span: None,
            decl: None,
        }
    }

    pub fn with_span(mut self, span: SourceSpan) -> Self {
        self.span.get_or_insert(span);
        self
    }

    pub fn in_decl(mut self, name: &str) -> Self {
        self.decl.get_or_insert_with(|| name.to_string());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        write!(f, "{kind}[{}]", self.code)?;
        if let Some(d) = &self.decl {
            write!(f, " in `{d}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for Diagnostic {}
