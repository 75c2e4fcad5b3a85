use std::sync::Arc;

use crate::lattice::ExtNat;

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::span::SourceSpan;
use super::ParseError;

pub fn parse_file(file: &str, src: &str) -> Result<SurfaceFile, ParseError> {
    let name: Arc<str> = Arc::from(file);
    let mut p = Parser::new(lex(&name, src)?);
    p.file()
}

/// Parse a single expression (used by the CLI for arguments).
pub fn parse_expr(file: &str, src: &str) -> Result<Expr, ParseError> {
    let name: Arc<str> = Arc::from(file);
    let mut p = Parser::new(lex(&name, src)?);
    let e = p.expr()?;
    p.expect(Tok::Eof)?;
    Ok(e)
}

pub fn parse_bound(file: &str, src: &str) -> Result<Bound, ParseError> {
    let name: Arc<str> = Arc::from(file);
    let mut p = Parser::new(lex(&name, src)?);
    let b = p.bound()?;
    p.expect(Tok::Eof)?;
    Ok(b)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            span: here.span.clone(),
            message: format!("unexpected {}", here.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<SourceSpan> {
        if *self.peek() == t {
            Ok(self.bump().span)
        } else {
            let sym = match &t {
                Tok::Eof => "end of input".to_string(),
                other => format!("`{}`", other.symbol()),
            };
            Err(self.unexpected(&[&sym]))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<SourceSpan> {
        if self.is_kw(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["a name"])),
        }
    }

    fn file(&mut self) -> PResult<SurfaceFile> {
        let mut out = SurfaceFile::default();
        let mut pending: Option<Bound> = None;
        loop {
            match self.peek() {
                Tok::Eof => {
                    if pending.is_some() {
                        return Err(self.unexpected(&["`def`"]));
                    }
                    return Ok(out);
                }
                Tok::At => {
                    let at = self.bump().span;
                    let Tok::Ident(which) = self.peek().clone() else {
                        return Err(self.unexpected(&["`expect_bound`", "`cost`"]));
                    };
                    match which.as_str() {
                        "expect_bound" => {
                            self.bump();
                            if pending.is_some() {
                                return Err(ParseError::new(at, "duplicate `@expect_bound`"));
                            }
                            self.expect(Tok::LParen)?;
                            pending = Some(self.bound()?);
                            self.expect(Tok::RParen)?;
                        }
                        "cost" => {
                            self.bump();
                            if !out.decls.is_empty() || pending.is_some() {
                                return Err(ParseError::new(
                                    at,
                                    "`@cost` must come before every declaration",
                                ));
                            }
                            self.cost_directive(&mut out.cost)?;
                        }
                        _ => return Err(self.unexpected(&["`expect_bound`", "`cost`"])),
                    }
                }
                _ => {
                    let d = self.decl(pending.take())?;
                    out.decls.push(d);
                }
            }
        }
    }

    fn cost_directive(&mut self, into: &mut Vec<CostOverride>) -> PResult<()> {
        self.expect(Tok::LParen)?;
        loop {
            let start = self.span();
            let key = match self.peek().clone() {
                Tok::Ident(s) => {
                    self.bump();
                    s
                }
                _ => return Err(self.unexpected(&["a cost key"])),
            };
            self.expect(Tok::Eq)?;
            let value = self.grade()?;
            into.push(CostOverride {
                key,
                value,
                span: start.to(&self.prev_span()),
            });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(())
    }

    fn decl(&mut self, expect_bound: Option<Bound>) -> PResult<SurfaceDecl> {
        let start = self.expect_kw("def")?;
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let ty = self.expr()?;
        self.expect(Tok::Define)?;
        let body = self.expr()?;
        Ok(SurfaceDecl {
            name,
            ty,
            body,
            expect_bound,
            span: start.to(&self.prev_span()),
        })
    }

    fn grade(&mut self) -> PResult<ExtNat> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(ExtNat::Fin(n))
            }
            Tok::Ident(s) if s == "inf" => {
                self.bump();
                Ok(ExtNat::Inf)
            }
            _ => Err(self.unexpected(&["a number", "`inf`"])),
        }
    }

    fn bracket_grade(&mut self) -> PResult<ExtNat> {
        self.expect(Tok::LBracket)?;
        let g = self.grade()?;
        self.expect(Tok::RBracket)?;
        Ok(g)
    }

    fn mk(&self, kind: ExprKind, start: &SourceSpan) -> Expr {
        Expr {
            kind,
            span: start.to(&self.prev_span()),
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let start = self.span();
        if self.is_kw("fun") {
            self.bump();
            let mut names = vec![self.name()?];
            while let Tok::Ident(s) = self.peek() {
                if is_keyword(s) {
                    break;
                }
                names.push(self.name()?);
            }
            self.expect(Tok::FatArrow)?;
            let body = self.expr()?;
            return Ok(self.mk(ExprKind::Lam(names, Box::new(body)), &start));
        }
        // `(x : A)` opens a dependent binder
        if *self.peek() == Tok::LParen && *self.peek_at(2) == Tok::Colon {
            if let Tok::Ident(s) = self.peek_at(1) {
                if !is_keyword(s) {
                    self.bump();
                    let x = self.name()?;
                    self.expect(Tok::Colon)?;
                    let dom = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return self.binder_tail(Some(x), dom, start);
                }
            }
        }
        let lhs = self.app()?;
        match self.peek() {
            Tok::Arrow | Tok::Star => self.binder_tail(None, lhs, start),
            _ => Ok(lhs),
        }
    }

    fn binder_tail(&mut self, name: Option<String>, dom: Expr, start: SourceSpan) -> PResult<Expr> {
        match self.peek() {
            Tok::Arrow => {
                let arrow = self.bump().span;
                let bound = if *self.peek() == Tok::LBracket && self.toks[self.pos].glued {
                    self.bump();
                    let b = self.bound()?;
                    self.expect(Tok::RBracket)?;
                    b
                } else {
                    Bound {
                        kind: BoundKind::Const(ExtNat::ZERO),
                        span: arrow,
                    }
                };
                let cod = self.expr()?;
                Ok(self.mk(
                    ExprKind::Pi(name, Box::new(dom), bound, Box::new(cod)),
                    &start,
                ))
            }
            Tok::Star => {
                self.bump();
                let second = self.expr()?;
                Ok(self.mk(
                    ExprKind::Sigma(name, Box::new(dom), Box::new(second)),
                    &start,
                ))
            }
            _ => Err(self.unexpected(&["`->`", "`*`"])),
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Num(_) | Tok::LParen | Tok::LBracket => true,
            Tok::Ident(s) => {
                !is_keyword(s) || matches!(s.as_str(), "zero" | "nil" | "fzero" | "Nat" | "U")
            }
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut head = self.head()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            head = self.mk(ExprKind::App(Box::new(head), Box::new(arg)), &start);
        }
        Ok(head)
    }

    fn head(&mut self) -> PResult<Expr> {
        let start = self.span();
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.atom();
        };
        if let Some(prim) = Prim::from_keyword(&kw) {
            self.bump();
            let mut args = Vec::with_capacity(prim.arity());
            for _ in 0..prim.arity() {
                if !self.starts_atom() {
                    return Err(self.unexpected(&["an argument"]));
                }
                args.push(self.atom()?);
            }
            return Ok(self.mk(ExprKind::Prim(prim, args), &start));
        }
        match kw.as_str() {
            "Box" | "box" => {
                self.bump();
                let g = self.bracket_grade()?;
                let inner = self.atom()?;
                let kind = if kw == "Box" {
                    ExprKind::BoxType(g, Box::new(inner))
                } else {
                    ExprKind::BoxIntro(g, Box::new(inner))
                };
                Ok(self.mk(kind, &start))
            }
            "natrec" => {
                self.bump();
                let motive = self.atom()?;
                let scrutinee = self.atom()?;
                self.expect(Tok::LBrace)?;
                self.expect_kw("zero")?;
                self.expect(Tok::FatArrow)?;
                let zero = self.expr()?;
                self.expect(Tok::Semi)?;
                self.expect_kw("succ")?;
                let names = [self.name()?, self.name()?];
                self.expect(Tok::FatArrow)?;
                let succ = self.expr()?;
                self.eat(&Tok::Semi);
                self.expect(Tok::RBrace)?;
                Ok(self.mk(
                    ExprKind::NatRec {
                        motive: Box::new(motive),
                        scrutinee: Box::new(scrutinee),
                        zero: Box::new(zero),
                        succ: (names, Box::new(succ)),
                    },
                    &start,
                ))
            }
            "vecrec" => {
                self.bump();
                let motive = self.atom()?;
                let scrutinee = self.atom()?;
                self.expect(Tok::LBrace)?;
                self.expect_kw("nil")?;
                self.expect(Tok::FatArrow)?;
                let nil = self.expr()?;
                self.expect(Tok::Semi)?;
                self.expect_kw("cons")?;
                let names = [self.name()?, self.name()?, self.name()?, self.name()?];
                self.expect(Tok::FatArrow)?;
                let cons = self.expr()?;
                self.eat(&Tok::Semi);
                self.expect(Tok::RBrace)?;
                Ok(self.mk(
                    ExprKind::VecRec {
                        motive: Box::new(motive),
                        scrutinee: Box::new(scrutinee),
                        nil: Box::new(nil),
                        cons: (names, Box::new(cons)),
                    },
                    &start,
                ))
            }
            "jelim" => {
                self.bump();
                let motive = self.atom()?;
                let proof = self.atom()?;
                self.expect(Tok::LBrace)?;
                self.expect_kw("refl")?;
                self.expect(Tok::FatArrow)?;
                let refl = self.expr()?;
                self.eat(&Tok::Semi);
                self.expect(Tok::RBrace)?;
                Ok(self.mk(
                    ExprKind::J {
                        motive: Box::new(motive),
                        proof: Box::new(proof),
                        refl: Box::new(refl),
                    },
                    &start,
                ))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(self.mk(ExprKind::Num(n), &start))
            }
            Tok::LParen => {
                self.bump();
                let first = self.expr()?;
                if self.eat(&Tok::Comma) {
                    let mut items = vec![first];
                    loop {
                        items.push(self.expr()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                    let end = self.prev_span();
                    let mut acc = items.pop().expect("two or more items");
                    while let Some(a) = items.pop() {
                        let span = a.span.to(&end);
                        acc = Expr {
                            kind: ExprKind::Pair(Box::new(a), Box::new(acc)),
                            span,
                        };
                    }
                    acc.span = start.to(&end);
                    return Ok(acc);
                }
                self.expect(Tok::RParen)?;
                Ok(Expr {
                    kind: first.kind,
                    span: start.to(&self.prev_span()),
                })
            }
            Tok::LBracket => {
                self.bump();
                let mut items = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        items.push(self.expr()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBracket)?;
                Ok(self.mk(ExprKind::VecLit(items), &start))
            }
            Tok::Ident(s) => {
                let kind = match s.as_str() {
                    "zero" => ExprKind::Zero,
                    "nil" => ExprKind::Nil,
                    "fzero" => ExprKind::FZero,
                    "Nat" => ExprKind::Nat,
                    "U" => {
                        self.bump();
                        let g = if *self.peek() == Tok::LBracket && self.toks[self.pos].glued {
                            self.bracket_grade()?
                        } else {
                            ExtNat::ZERO
                        };
                        return Ok(self.mk(ExprKind::Universe(g), &start));
                    }
                    kw if is_keyword(kw) => {
                        return Err(self.unexpected(&["an expression"]));
                    }
                    _ => ExprKind::Ident(s.clone()),
                };
                self.bump();
                Ok(self.mk(kind, &start))
            }
            _ => Err(self.unexpected(&["an expression"])),
        }
    }

    fn bound(&mut self) -> PResult<Bound> {
        let start = self.span();
        let mut acc = self.bound_term()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.bound_term()?;
            acc = Bound {
                kind: BoundKind::Plus(Box::new(acc), Box::new(rhs)),
                span: start.to(&self.prev_span()),
            };
        }
        Ok(acc)
    }

    fn bmk(&self, kind: BoundKind, start: &SourceSpan) -> Bound {
        Bound {
            kind,
            span: start.to(&self.prev_span()),
        }
    }

    fn bound_term(&mut self) -> PResult<Bound> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                if self.eat(&Tok::Star) {
                    let x = self.name()?;
                    return Ok(self.bmk(BoundKind::Scaled(n, x), &start));
                }
                Ok(self.bmk(BoundKind::Const(ExtNat::Fin(n)), &start))
            }
            Tok::LParen => {
                self.bump();
                let b = self.bound()?;
                self.expect(Tok::RParen)?;
                Ok(Bound {
                    kind: b.kind,
                    span: start.to(&self.prev_span()),
                })
            }
            Tok::Ident(s) => {
                let call = *self.peek_at(1) == Tok::LParen;
                match s.as_str() {
                    "inf" => {
                        self.bump();
                        Ok(self.bmk(BoundKind::Const(ExtNat::Inf), &start))
                    }
                    "max" | "fold" if call => {
                        self.bump();
                        self.bump();
                        let a = self.bound()?;
                        self.expect(Tok::Comma)?;
                        let b = self.bound()?;
                        self.expect(Tok::RParen)?;
                        let kind = if s == "max" {
                            BoundKind::Max(Box::new(a), Box::new(b))
                        } else {
                            BoundKind::Fold(Box::new(a), Box::new(b))
                        };
                        Ok(self.bmk(kind, &start))
                    }
                    "log2" if call => {
                        self.bump();
                        self.bump();
                        let a = self.bound()?;
                        self.expect(Tok::RParen)?;
                        Ok(self.bmk(BoundKind::Log2(Box::new(a)), &start))
                    }
                    "sum" if call => {
                        self.bump();
                        self.bump();
                        let i = self.name()?;
                        self.expect(Tok::Less)?;
                        let limit = self.bound()?;
                        self.expect(Tok::Comma)?;
                        let body = self.bound()?;
                        self.expect(Tok::RParen)?;
                        Ok(self.bmk(BoundKind::Sum(i, Box::new(limit), Box::new(body)), &start))
                    }
                    "at" if call => {
                        self.bump();
                        self.bump();
                        let x = self.name()?;
                        self.expect(Tok::Dot)?;
                        let body = self.bound()?;
                        self.expect(Tok::Comma)?;
                        let t = self.expr()?;
                        self.expect(Tok::RParen)?;
                        Ok(self.bmk(BoundKind::At(x, Box::new(body), Box::new(t)), &start))
                    }
                    _ => {
                        let x = self.name()?;
                        Ok(self.bmk(BoundKind::Scaled(1, x), &start))
                    }
                }
            }
            _ => Err(self.unexpected(&["a bound"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUM: &str = "def sum : (n : Nat) ->[0] (v : Vec Nat n) ->[3*n + 2] Nat := \
        fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }";

    #[test]
    fn trivial_decl() {
        let f = parse_file("t", "def z : Nat := zero").unwrap();
        assert_eq!(f.decls.len(), 1);
        assert_eq!(f.decls[0].body.kind, ExprKind::Zero);
    }

    #[test]
    fn sum_program() {
        let f = parse_file("t", SUM).unwrap();
        let d = &f.decls[0];
        assert_eq!(d.name, "sum");
        let ExprKind::Pi(Some(n), _, b0, cod) = &d.ty.kind else {
            panic!("{:?}", d.ty.kind)
        };
        assert_eq!(n, "n");
        assert_eq!(b0.kind, BoundKind::Const(ExtNat::ZERO));
        let ExprKind::Pi(Some(_), _, b, _) = &cod.kind else {
            panic!()
        };
        assert!(matches!(b.kind, BoundKind::Plus(..)));
        assert!(matches!(d.body.kind, ExprKind::Lam(ref xs, _) if xs.len() == 2));
    }

    #[test]
    fn unbalanced_bracket_has_span() {
        let src = "def z : Nat := (succ zero";
        let e = parse_file("t", src).unwrap_err();
        assert!(e.span.start.offset <= src.len());
        assert!(e.expected.iter().any(|x| x.contains(')')));
    }

    #[test]
    fn directives() {
        let f = parse_file(
            "t",
            "@cost(delta_zero = 0, delta_nil = inf)\n@expect_bound(2*n + 1)\ndef f : (n : Nat) ->[2*n + 1] Nat := fun n => n",
        )
        .unwrap();
        assert_eq!(f.cost.len(), 2);
        assert_eq!(f.cost[1].value, ExtNat::Inf);
        assert!(f.decls[0].expect_bound.is_some());
        assert!(parse_file("t", "def z : Nat := zero @cost(delta_zero = 0)").is_err());
    }

    #[test]
    fn sugar_and_bounds() {
        let e = parse_expr("t", "(1, 2, [zero, 3]) ").unwrap();
        assert!(matches!(e.kind, ExprKind::Pair(..)));
        let b = parse_bound(
            "t",
            "max(sum(i < n, i + 1), fold(2, log2(n))) + at(x. x, succ n)",
        )
        .unwrap();
        assert!(matches!(b.kind, BoundKind::Plus(..)));
        let e = parse_expr("t", "Box[inf] Nat -> U[3] * Nat").unwrap();
        assert!(matches!(e.kind, ExprKind::Pi(None, ..)));
    }
}
