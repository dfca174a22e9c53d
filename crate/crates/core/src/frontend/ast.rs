//! Surface syntax produced by the parser.

use num_bigint::BigInt;

use crate::error::Pos;

#[derive(Clone, Debug, PartialEq)]
pub enum SExpr {
    Var(String),
    Con(String),
    Int(BigInt),
    Char(char),
    Str(String),
    App(Box<SExpr>, Box<SExpr>),
    Lambda(Vec<SPat>, Box<SExpr>),
    Let(Vec<Decl>, Box<SExpr>),
    If(Box<SExpr>, Box<SExpr>, Box<SExpr>),
    Case(Box<SExpr>, Vec<CaseAlt>),
    List(Vec<SExpr>),
    Tuple(Vec<SExpr>),
    Neg(Box<SExpr>),
    /// `(e op)`
    LeftSection(Box<SExpr>, Box<SExpr>),
    /// `(op e)`
    RightSection(Box<SExpr>, Box<SExpr>),
    EnumFrom(Box<SExpr>, Option<Box<SExpr>>),
    Typed(Box<SExpr>, SType),
}

impl SExpr {
    pub fn app(f: SExpr, x: SExpr) -> SExpr {
        SExpr::App(Box::new(f), Box::new(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SPat {
    Var(String),
    Wild,
    Con(String, Vec<SPat>),
    Int(BigInt),
    Char(char),
    Str(String),
    Bang(String),
    As(String, Box<SPat>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SType {
    Var(String),
    Con(String, Vec<SType>),
    Fun(Box<SType>, Box<SType>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Guarded {
    pub guard: SExpr,
    pub guard_text: String,
    pub body: SExpr,
    pub body_text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rhs {
    Plain(SExpr, String),
    Guarded(Vec<Guarded>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub name: String,
    pub pats: Vec<SPat>,
    pub rhs: Rhs,
    pub wheres: Vec<Decl>,
    /// Source text of the left-hand side.
    pub head_text: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseAlt {
    pub pat: SPat,
    pub rhs: Rhs,
    pub wheres: Vec<Decl>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DataDecl {
    pub name: String,
    pub params: Vec<String>,
    pub constructors: Vec<(String, Vec<SType>)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Clause(Clause),
    Signature(Vec<String>, SType, Pos),
    Data(DataDecl),
    TypeSynonym(String, Vec<String>, SType, Pos),
}
