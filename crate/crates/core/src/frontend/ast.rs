//! Surface syntax with named binders.

use crate::lattice::ExtNat;

use super::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

/// Built-in forms written as a keyword applied to a fixed number of
/// arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prim {
    Succ,
    Add,
    El,
    Fst,
    Snd,
    Id,
    Refl,
    Vec,
    Cons,
    Fin,
    FSucc,
    Unbox,
    The,
}

impl Prim {
    pub fn from_keyword(s: &str) -> Option<Prim> {
        Some(match s {
            "succ" => Prim::Succ,
            "add" => Prim::Add,
            "El" => Prim::El,
            "fst" => Prim::Fst,
            "snd" => Prim::Snd,
            "Id" => Prim::Id,
            "refl" => Prim::Refl,
            "Vec" => Prim::Vec,
            "cons" => Prim::Cons,
            "Fin" => Prim::Fin,
            "fsucc" => Prim::FSucc,
            "unbox" => Prim::Unbox,
            "the" => Prim::The,
            _ => return None,
        })
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Prim::Succ => "succ",
            Prim::Add => "add",
            Prim::El => "El",
            Prim::Fst => "fst",
            Prim::Snd => "snd",
            Prim::Id => "Id",
            Prim::Refl => "refl",
            Prim::Vec => "Vec",
            Prim::Cons => "cons",
            Prim::Fin => "Fin",
            Prim::FSucc => "fsucc",
            Prim::Unbox => "unbox",
            Prim::The => "the",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Prim::Id => 3,
            Prim::Add | Prim::Vec | Prim::Cons | Prim::The => 2,
            _ => 1,
        }
    }
}

/// Words that cannot be used as variable names.
pub const KEYWORDS: &[&str] = &[
    "def", "fun", "natrec", "vecrec", "jelim", "zero", "nil", "fzero", "Nat", "U", "Box", "box",
    "succ", "add", "El", "fst", "snd", "Id", "refl", "Vec", "cons", "Fin", "fsucc", "unbox", "the",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Ident(String),
    Num(u64),
    VecLit(Vec<Expr>),
    Nat,
    Zero,
    Nil,
    FZero,
    Universe(ExtNat),
    /// `(x : A) ->[b] B`, or `A ->[b] B` without a name.
    Pi(Option<String>, Box<Expr>, Bound, Box<Expr>),
    /// `(x : A) * B`, or `A * B`.
    Sigma(Option<String>, Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Lam(Vec<String>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Prim(Prim, Vec<Expr>),
    BoxType(ExtNat, Box<Expr>),
    BoxIntro(ExtNat, Box<Expr>),
    NatRec {
        motive: Box<Expr>,
        scrutinee: Box<Expr>,
        zero: Box<Expr>,
        /// predecessor, recursive result
        succ: ([String; 2], Box<Expr>),
    },
    VecRec {
        motive: Box<Expr>,
        scrutinee: Box<Expr>,
        nil: Box<Expr>,
        /// length, head, tail, recursive result
        cons: ([String; 4], Box<Expr>),
    },
    J {
        motive: Box<Expr>,
        proof: Box<Expr>,
        refl: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub kind: BoundKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundKind {
    Const(ExtNat),
    /// `c*x`; a bare `x` has `c = 1`.
    Scaled(u64, String),
    Plus(Box<Bound>, Box<Bound>),
    Max(Box<Bound>, Box<Bound>),
    Log2(Box<Bound>),
    /// `sum(i < limit, body)`
    Sum(String, Box<Bound>, Box<Bound>),
    /// `fold(count, body)`
    Fold(Box<Bound>, Box<Bound>),
    /// `at(x. body, term)`: the body with `x` standing for the size of the
    /// term.
    At(String, Box<Bound>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDecl {
    pub name: String,
    pub ty: Expr,
    pub body: Expr,
    /// From a preceding `@expect_bound(...)`.
    pub expect_bound: Option<Bound>,
    pub span: SourceSpan,
}

/// A `key = value` entry from a `@cost(...)` directive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostOverride {
    pub key: String,
    pub value: ExtNat,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurfaceFile {
    pub cost: Vec<CostOverride>,
    pub decls: Vec<SurfaceDecl>,
}
