//! Core calculus: expressions, matchings and patterns.
//!
//! Matchings are the bodies of pattern-matching abstractions. A matching
//! either returns an expression, fails, consumes an argument with a pattern,
//! supplies an argument, chooses between two alternatives, or introduces
//! local bindings.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::prim::PrimOp;

/// Identifier for variables, heap locations and constructors.
///
/// Generated names carry a suffix starting with `#` (translation time) or
/// `$` (allocation at run time); the suffix is hidden when displayed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The user-facing part of the name.
    pub fn base(&self) -> &str {
        match self.0.find(['#', '$']) {
            Some(i) => &self.0[..i],
            None => &self.0,
        }
    }

    pub fn is_generated(&self) -> bool {
        self.0.contains(['#', '$'])
    }

    /// Operator names such as `+` or `:` (as opposed to `map` or `Just`).
    pub fn is_operator(&self) -> bool {
        self.base()
            .chars()
            .next()
            .is_some_and(|c| !(c.is_alphanumeric() || c == '_' || c == '(' || c == '['))
    }

    pub fn is_constructor(&self) -> bool {
        let b = self.base();
        b.starts_with(|c: char| c.is_uppercase()) || b.starts_with(':') || b.starts_with('(') || b == "[]"
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Source text of the equation a `Return` came from, used as a justification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    /// Name of the function or binding the equation defines.
    pub name: Name,
    pub text: Arc<str>,
}

impl Annotation {
    pub fn new(name: &str, text: &str) -> Arc<Self> {
        Arc::new(Annotation { name: Name::new(name), text: Arc::from(text) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(Name),
    App(Arc<Expr>, Arc<Expr>),
    Lam(Arc<Matching>),
    Con(Name, Vec<Expr>),
    Int(BigInt),
    Char(char),
    Prim(PrimOp, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matching {
    Return(Expr, Option<Arc<Annotation>>),
    Fail,
    Pat(Pattern, Arc<Matching>),
    Arg(Expr, Arc<Matching>),
    Alt(Arc<Matching>, Arc<Matching>),
    Where(Arc<Matching>, Bindings),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Var(Name),
    Wild,
    Con(Name, Vec<Pattern>),
    Int(BigInt),
    Char(char),
    /// Strict variable: forces the argument before binding it.
    Bang(Name),
}

/// Mutually recursive local bindings.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Bindings(pub Vec<(Name, Expr)>);

impl Bindings {
    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.0.iter().map(|(n, _)| n)
    }
}

// ---------------------------------------------------------------------------
// Constructors

impl Expr {
    pub fn var(s: &str) -> Expr {
        Expr::Var(Name::new(s))
    }

    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn lam(m: Matching) -> Expr {
        Expr::Lam(Arc::new(m))
    }

    pub fn app(f: Expr, x: Expr) -> Expr {
        Expr::App(Arc::new(f), Arc::new(x))
    }

    pub fn apps(f: Expr, xs: impl IntoIterator<Item = Expr>) -> Expr {
        xs.into_iter().fold(f, Expr::app)
    }

    pub fn con(c: &str, args: Vec<Expr>) -> Expr {
        Expr::Con(Name::new(c), args)
    }

    /// `let binds in body`
    pub fn let_in(binds: Bindings, body: Expr) -> Expr {
        Expr::lam(Matching::Where(Arc::new(Matching::ret(body)), binds))
    }

    /// `case scrutinee of alts`, each alternative a matching of arity one.
    pub fn case_of(scrutinee: Expr, alts: Vec<Matching>) -> Expr {
        Expr::lam(Matching::Arg(scrutinee, Arc::new(Matching::alts(alts))))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Expr::Var(n) => Some(n),
            _ => None,
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Expr::App(f, x) = cur {
            args.push(&**x);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }
}

impl Matching {
    pub fn ret(e: Expr) -> Matching {
        Matching::Return(e, None)
    }

    pub fn pat(p: Pattern, m: Matching) -> Matching {
        Matching::Pat(p, Arc::new(m))
    }

    pub fn arg(e: Expr, m: Matching) -> Matching {
        Matching::Arg(e, Arc::new(m))
    }

    pub fn alt(a: Matching, b: Matching) -> Matching {
        Matching::Alt(Arc::new(a), Arc::new(b))
    }

    /// Right-nested alternatives; an empty list fails.
    pub fn alts(ms: Vec<Matching>) -> Matching {
        let mut it = ms.into_iter().rev();
        match it.next() {
            None => Matching::Fail,
            Some(last) => it.fold(last, |acc, m| Matching::alt(m, acc)),
        }
    }

    /// `p1 ▷ p2 ▷ … ▷ m`
    pub fn pats(ps: Vec<Pattern>, m: Matching) -> Matching {
        ps.into_iter().rev().fold(m, |acc, p| Matching::pat(p, acc))
    }

    /// First annotation reachable without entering expressions.
    pub fn label(&self) -> Option<&Arc<Annotation>> {
        match self {
            Matching::Return(_, a) => a.as_ref(),
            Matching::Fail => None,
            Matching::Pat(_, m) | Matching::Arg(_, m) | Matching::Where(m, _) => m.label(),
            Matching::Alt(a, b) => a.label().or_else(|| b.label()),
        }
    }
}

impl Pattern {
    pub fn var(s: &str) -> Pattern {
        Pattern::Var(Name::new(s))
    }

    pub fn con(c: &str, ps: Vec<Pattern>) -> Pattern {
        Pattern::Con(Name::new(c), ps)
    }

    pub fn binders(&self, out: &mut Vec<Name>) {
        match self {
            Pattern::Var(n) | Pattern::Bang(n) => out.push(n.clone()),
            Pattern::Con(_, ps) => ps.iter().for_each(|p| p.binders(out)),
            Pattern::Wild | Pattern::Int(_) | Pattern::Char(_) => {}
        }
    }
}

// ---------------------------------------------------------------------------
// Arity and weak head normal form

/// Number of arguments a matching consumes before returning or failing.
/// `None` when alternatives disagree.
pub fn arity(m: &Matching) -> Option<usize> {
    match m {
        Matching::Return(..) | Matching::Fail => Some(0),
        Matching::Pat(_, m) => arity(m).map(|n| n + 1),
        Matching::Arg(_, m) => arity(m).map(|n| n.saturating_sub(1)),
        Matching::Alt(a, b) => {
            let (a, b) = (arity(a)?, arity(b)?);
            (a == b).then_some(a)
        }
        Matching::Where(m, _) => arity(m),
    }
}

pub fn is_whnf(e: &Expr) -> bool {
    match e {
        Expr::Lam(m) => arity(m).is_some_and(|n| n > 0),
        Expr::Con(..) | Expr::Int(_) | Expr::Char(_) => true,
        Expr::Var(_) | Expr::App(..) | Expr::Prim(..) => false,
    }
}

// ---------------------------------------------------------------------------
// Free variables

pub fn free_vars(e: &Expr) -> HashSet<Name> {
    let mut out = HashSet::new();
    fv_expr(e, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_matching(m: &Matching) -> HashSet<Name> {
    let mut out = HashSet::new();
    fv_matching(m, &mut Vec::new(), &mut out);
    out
}

fn fv_expr(e: &Expr, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    match e {
        Expr::Var(n) => {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        }
        Expr::App(f, x) => {
            fv_expr(f, bound, out);
            fv_expr(x, bound, out);
        }
        Expr::Lam(m) => fv_matching(m, bound, out),
        Expr::Con(_, xs) | Expr::Prim(_, xs) => xs.iter().for_each(|x| fv_expr(x, bound, out)),
        Expr::Int(_) | Expr::Char(_) => {}
    }
}

fn fv_matching(m: &Matching, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    match m {
        Matching::Return(e, _) => fv_expr(e, bound, out),
        Matching::Fail => {}
        Matching::Pat(p, m) => {
            let mark = bound.len();
            p.binders(bound);
            fv_matching(m, bound, out);
            bound.truncate(mark);
        }
        Matching::Arg(e, m) => {
            fv_expr(e, bound, out);
            fv_matching(m, bound, out);
        }
        Matching::Alt(a, b) => {
            fv_matching(a, bound, out);
            fv_matching(b, bound, out);
        }
        Matching::Where(m, bs) => {
            let mark = bound.len();
            bound.extend(bs.names().cloned());
            bs.0.iter().for_each(|(_, e)| fv_expr(e, bound, out));
            fv_matching(m, bound, out);
            bound.truncate(mark);
        }
    }
}

// ---------------------------------------------------------------------------
// Renaming

/// Simultaneous substitution of names for free variables.
///
/// Substituted names are heap locations or fresh names, which never occur
/// as binders, so no capture can arise.
pub type Renaming = HashMap<Name, Name>;

pub fn rename_expr(e: &Expr, r: &Renaming) -> Expr {
    if r.is_empty() {
        return e.clone();
    }
    ren_expr(e, r).unwrap_or_else(|| e.clone())
}

pub fn rename_matching(m: &Arc<Matching>, r: &Renaming) -> Arc<Matching> {
    if r.is_empty() {
        return m.clone();
    }
    ren_matching_arc(m, r)
}

fn ren_matching_arc(m: &Arc<Matching>, r: &Renaming) -> Arc<Matching> {
    ren_matching(m, r).map(Arc::new).unwrap_or_else(|| m.clone())
}

fn ren_list(xs: &[Expr], r: &Renaming) -> Option<Vec<Expr>> {
    let new: Vec<Option<Expr>> = xs.iter().map(|x| ren_expr(x, r)).collect();
    if new.iter().all(Option::is_none) {
        return None;
    }
    Some(new.into_iter().zip(xs).map(|(n, o)| n.unwrap_or_else(|| o.clone())).collect())
}

/// `None` when nothing changed, which keeps unchanged subtrees shared.
fn ren_expr(e: &Expr, r: &Renaming) -> Option<Expr> {
    match e {
        Expr::Var(n) => r.get(n).map(|m| Expr::Var(m.clone())),
        Expr::App(f, x) => {
            let (f2, x2) = (ren_expr(f, r), ren_expr(x, r));
            if f2.is_none() && x2.is_none() {
                return None;
            }
            Some(Expr::App(
                f2.map(Arc::new).unwrap_or_else(|| f.clone()),
                x2.map(Arc::new).unwrap_or_else(|| x.clone()),
            ))
        }
        Expr::Lam(m) => ren_matching(m, r).map(|m| Expr::Lam(Arc::new(m))),
        Expr::Con(c, xs) => ren_list(xs, r).map(|xs| Expr::Con(c.clone(), xs)),
        Expr::Prim(op, xs) => ren_list(xs, r).map(|xs| Expr::Prim(*op, xs)),
        Expr::Int(_) | Expr::Char(_) => None,
    }
}

/// Drops keys shadowed by `names`; borrowed when nothing is shadowed.
fn shadow<'a>(r: &'a Renaming, names: &[Name]) -> std::borrow::Cow<'a, Renaming> {
    if names.iter().any(|n| r.contains_key(n)) {
        let mut r2 = r.clone();
        names.iter().for_each(|n| {
            r2.remove(n);
        });
        std::borrow::Cow::Owned(r2)
    } else {
        std::borrow::Cow::Borrowed(r)
    }
}

fn ren_matching(m: &Matching, r: &Renaming) -> Option<Matching> {
    match m {
        Matching::Return(e, a) => ren_expr(e, r).map(|e| Matching::Return(e, a.clone())),
        Matching::Fail => None,
        Matching::Pat(p, body) => {
            let mut bs = Vec::new();
            p.binders(&mut bs);
            let r = shadow(r, &bs);
            if r.is_empty() {
                return None;
            }
            ren_matching(body, &r).map(|b| Matching::Pat(p.clone(), Arc::new(b)))
        }
        Matching::Arg(e, body) => {
            let (e2, b2) = (ren_expr(e, r), ren_matching(body, r));
            if e2.is_none() && b2.is_none() {
                return None;
            }
            Some(Matching::Arg(
                e2.unwrap_or_else(|| e.clone()),
                b2.map(Arc::new).unwrap_or_else(|| body.clone()),
            ))
        }
        Matching::Alt(a, b) => {
            let (a2, b2) = (ren_matching(a, r), ren_matching(b, r));
            if a2.is_none() && b2.is_none() {
                return None;
            }
            Some(Matching::Alt(
                a2.map(Arc::new).unwrap_or_else(|| a.clone()),
                b2.map(Arc::new).unwrap_or_else(|| b.clone()),
            ))
        }
        Matching::Where(body, bs) => {
            let names: Vec<Name> = bs.names().cloned().collect();
            let r = shadow(r, &names);
            if r.is_empty() {
                return None;
            }
            let new: Vec<Option<Expr>> = bs.0.iter().map(|(_, e)| ren_expr(e, &r)).collect();
            let b2 = ren_matching(body, &r);
            if b2.is_none() && new.iter().all(Option::is_none) {
                return None;
            }
            let bs2 = bs
                .0
                .iter()
                .zip(new)
                .map(|((n, e), e2)| (n.clone(), e2.unwrap_or_else(|| e.clone())))
                .collect();
            Some(Matching::Where(b2.map(Arc::new).unwrap_or_else(|| body.clone()), Bindings(bs2)))
        }
    }
}

/// `m[y/x]` for a single variable.
pub fn rename1(m: &Arc<Matching>, from: &Name, to: &Name) -> Arc<Matching> {
    let mut r = Renaming::new();
    r.insert(from.clone(), to.clone());
    ren_matching_arc(m, &r)
}

// ---------------------------------------------------------------------------
// Fresh names

/// Source of names that cannot clash with user identifiers.
#[derive(Clone, Debug)]
pub struct NameSupply {
    tag: char,
    next: u64,
}

impl NameSupply {
    /// Names produced during translation.
    pub fn translation() -> Self {
        NameSupply { tag: '#', next: 0 }
    }

    /// Heap locations allocated while evaluating.
    pub fn runtime() -> Self {
        NameSupply { tag: '$', next: 0 }
    }

    pub fn fresh(&mut self, hint: &str) -> Name {
        let base = match hint.find(['#', '$']) {
            Some(i) => &hint[..i],
            None => hint,
        };
        self.next += 1;
        Name::new(&format!("{base}{}{}", self.tag, self.next))
    }

    pub fn issued(&self) -> u64 {
        self.next
    }
}

// ---------------------------------------------------------------------------
// Normalization: arguments of applications, constructors, primitives and
// argument supplies become variables.

pub fn normalize(e: &Expr, supply: &mut NameSupply) -> Expr {
    match e {
        Expr::Var(_) | Expr::Int(_) | Expr::Char(_) => e.clone(),
        Expr::App(..) => {
            let (head, args) = e.spine();
            let head = normalize(head, supply);
            let mut binds = Vec::new();
            let vars: Vec<Expr> = args.into_iter().map(|a| atomize(a, supply, &mut binds)).collect();
            wrap_let(Expr::apps(head, vars), binds)
        }
        Expr::Lam(m) => Expr::Lam(Arc::new(normalize_matching(m, supply))),
        Expr::Con(c, args) => {
            let mut binds = Vec::new();
            let vars = args.iter().map(|a| atomize(a, supply, &mut binds)).collect();
            wrap_let(Expr::Con(c.clone(), vars), binds)
        }
        Expr::Prim(op, args) => {
            let mut binds = Vec::new();
            let vars = args.iter().map(|a| atomize(a, supply, &mut binds)).collect();
            wrap_let(Expr::Prim(*op, vars), binds)
        }
    }
}

fn atomize(e: &Expr, supply: &mut NameSupply, binds: &mut Vec<(Name, Expr)>) -> Expr {
    if let Expr::Var(_) = e {
        return e.clone();
    }
    let y = supply.fresh("");
    binds.push((y.clone(), normalize(e, supply)));
    Expr::Var(y)
}

fn wrap_let(e: Expr, binds: Vec<(Name, Expr)>) -> Expr {
    if binds.is_empty() {
        e
    } else {
        Expr::let_in(Bindings(binds), e)
    }
}

pub fn normalize_matching(m: &Matching, supply: &mut NameSupply) -> Matching {
    match m {
        Matching::Return(e, a) => Matching::Return(normalize(e, supply), a.clone()),
        Matching::Fail => Matching::Fail,
        Matching::Pat(p, m) => Matching::pat(p.clone(), normalize_matching(m, supply)),
        Matching::Arg(Expr::Var(y), m) => Matching::arg(Expr::Var(y.clone()), normalize_matching(m, supply)),
        Matching::Arg(e, m) => {
            let y = supply.fresh("");
            let e = normalize(e, supply);
            let inner = Matching::arg(Expr::Var(y.clone()), normalize_matching(m, supply));
            Matching::Where(Arc::new(inner), Bindings(vec![(y, e)]))
        }
        Matching::Alt(a, b) => Matching::alt(normalize_matching(a, supply), normalize_matching(b, supply)),
        Matching::Where(m, bs) => {
            let bs = bs.0.iter().map(|(n, e)| (n.clone(), normalize(e, supply))).collect();
            Matching::Where(Arc::new(normalize_matching(m, supply)), Bindings(bs))
        }
    }
}

pub fn is_normalized(e: &Expr) -> bool {
    let atoms = |xs: &[Expr]| xs.iter().all(|x| matches!(x, Expr::Var(_)));
    match e {
        Expr::Var(_) | Expr::Int(_) | Expr::Char(_) => true,
        Expr::App(f, x) => matches!(**x, Expr::Var(_)) && is_normalized(f),
        Expr::Lam(m) => is_normalized_matching(m),
        Expr::Con(_, xs) | Expr::Prim(_, xs) => atoms(xs),
    }
}

pub fn is_normalized_matching(m: &Matching) -> bool {
    match m {
        Matching::Return(e, _) => is_normalized(e),
        Matching::Fail => true,
        Matching::Pat(_, m) => is_normalized_matching(m),
        Matching::Arg(e, m) => matches!(e, Expr::Var(_)) && is_normalized_matching(m),
        Matching::Alt(a, b) => is_normalized_matching(a) && is_normalized_matching(b),
        Matching::Where(m, bs) => is_normalized_matching(m) && bs.0.iter().all(|(_, e)| is_normalized(e)),
    }
}

// ---------------------------------------------------------------------------
// Debug notation for terms, close to the textbook presentation.

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(n) => write!(f, "{n:?}"),
            Expr::App(a, b) => match &**b {
                Expr::Var(_) | Expr::Int(_) | Expr::Char(_) => write!(f, "{a} {b}"),
                _ => write!(f, "{a} ({b})"),
            },
            Expr::Lam(m) => write!(f, "λ({m})"),
            Expr::Con(c, xs) if xs.is_empty() => write!(f, "{c:?}"),
            Expr::Con(c, xs) => {
                write!(f, "{c:?}(")?;
                comma_sep(f, xs)?;
                write!(f, ")")
            }
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Char(c) => write!(f, "{c:?}"),
            Expr::Prim(op, xs) => {
                write!(f, "{}[", op.symbol())?;
                comma_sep(f, xs)?;
                write!(f, "]")
            }
        }
    }
}

fn comma_sep<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matching::Return(e, _) => write!(f, "⌈{e}⌉"),
            Matching::Fail => write!(f, "⌊⌋"),
            Matching::Pat(p, m) => write!(f, "{p} ▷ {m}"),
            Matching::Arg(e, m) => write!(f, "{e} ◁ {m}"),
            Matching::Alt(a, b) => write!(f, "({a} | {b})"),
            Matching::Where(m, bs) => {
                write!(f, "({m} where {{")?;
                for (i, (n, e)) in bs.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{n:?} = {e}")?;
                }
                write!(f, "}})")
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(n) => write!(f, "{n:?}"),
            Pattern::Wild => write!(f, "_"),
            Pattern::Con(c, ps) if ps.is_empty() => write!(f, "{c:?}"),
            Pattern::Con(c, ps) => {
                write!(f, "{c:?}(")?;
                comma_sep(f, ps)?;
                write!(f, ")")
            }
            Pattern::Int(n) => write!(f, "{n}"),
            Pattern::Char(c) => write!(f, "{c:?}"),
            Pattern::Bang(n) => write!(f, "!{n:?}"),
        }
    }
}
