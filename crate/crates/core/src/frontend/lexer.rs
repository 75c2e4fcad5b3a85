use std::sync::Arc;

use super::span::{Pos, SourceSpan};
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semi,
    Dot,
    Star,
    Plus,
    Less,
    Eq,
    At,
    Arrow,
    FatArrow,
    Define,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Less => "<",
            Tok::Eq => "=",
            Tok::At => "@",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::Define => ":=",
            Tok::Ident(_) => "identifier",
            Tok::Num(_) => "number",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
    /// No whitespace between this token and the previous one.
    pub glued: bool,
}

pub fn lex(file: &Arc<str>, src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut pos = Pos::START;
    let mut chars = src.char_indices().peekable();
    let mut glued = false;

    let advance = |pos: &mut Pos, c: char| {
        pos.offset += c.len_utf8();
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    };

    while let Some(&(_, c)) = chars.peek() {
        if c.is_whitespace() {
            advance(&mut pos, c);
            chars.next();
            glued = false;
            continue;
        }
        if src[pos.offset..].starts_with("--") {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                advance(&mut pos, c);
                chars.next();
            }
            glued = false;
            continue;
        }
        let start = pos;
        let tok = if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while let Some(&(_, d)) = chars.peek() {
                let Some(v) = d.to_digit(10) else { break };
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(v as u64))
                    .ok_or_else(|| {
                        ParseError::new(
                            SourceSpan::new(file.clone(), start, pos),
                            "numeral is too large",
                        )
                    })?;
                advance(&mut pos, d);
                chars.next();
            }
            Tok::Num(n)
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                s.push(d);
                advance(&mut pos, d);
                chars.next();
            }
            Tok::Ident(s)
        } else {
            let rest = &src[pos.offset..];
            let (tok, len) = if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else if rest.starts_with("=>") {
                (Tok::FatArrow, 2)
            } else if rest.starts_with(":=") {
                (Tok::Define, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    '.' => Tok::Dot,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '<' => Tok::Less,
                    '=' => Tok::Eq,
                    '@' => Tok::At,
                    _ => {
                        let mut end = pos;
                        advance(&mut end, c);
                        return Err(ParseError::new(
                            SourceSpan::new(file.clone(), start, end),
                            format!("unexpected character `{c}`"),
                        ));
                    }
                };
                (t, 1)
            };
            for _ in 0..len {
                let (_, d) = chars.next().expect("lookahead matched");
                advance(&mut pos, d);
            }
            tok
        };
        out.push(Token {
            tok,
            span: SourceSpan::new(file.clone(), start, pos),
            glued,
        });
        glued = true;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::point(file.clone(), pos),
        glued: false,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(&Arc::from("t"), s)
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect()
    }

    #[test]
    fn symbols_and_comments() {
        assert_eq!(
            toks("def x : Nat := 3 -- trailing\n->[n]"),
            vec![
                Tok::Ident("def".into()),
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::Ident("Nat".into()),
                Tok::Define,
                Tok::Num(3),
                Tok::Arrow,
                Tok::LBracket,
                Tok::Ident("n".into()),
                Tok::RBracket,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn spans_track_lines() {
        let ts = lex(&Arc::from("f"), "a\n  bc").unwrap();
        assert_eq!((ts[1].span.start.line, ts[1].span.start.col), (2, 3));
        assert_eq!(ts[1].span.end.offset, 6);
        assert!(!ts[1].glued);
    }

    #[test]
    fn bad_character() {
        let e = lex(&Arc::from("f"), "x $").unwrap_err();
        assert_eq!(e.span.start.col, 3);
    }
}
