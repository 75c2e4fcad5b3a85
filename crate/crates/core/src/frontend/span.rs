use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// A region of a source file; lines and columns are 1-based, `end` is
/// exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start: Pos,
    pub end: Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
    /// Byte offset into the source text.
    pub offset: usize,
}

impl Pos {
    pub const START: Pos = Pos {
        line: 1,
        col: 1,
        offset: 0,
    };
}

impl SourceSpan {
    pub fn new(file: Arc<str>, start: Pos, end: Pos) -> Self {
        debug_assert!(start <= end);
        SourceSpan { file, start, end }
    }

    pub fn point(file: Arc<str>, at: Pos) -> Self {
        SourceSpan {
            file,
            start: at,
            end: at,
        }
    }

    /// Smallest span covering both.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start.line, self.start.col)
    }
}
