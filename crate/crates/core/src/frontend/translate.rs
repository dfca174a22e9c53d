//! Desugaring of surface syntax into core expressions and matchings.
//!
//! Equations of a function become alternatives in order. Guards become
//! matchings on `True`; when an equation has no `where` part, each guard
//! gets its own alternative repeating the equation's patterns. Each
//! returned right-hand side carries the equation's source text.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::ast::*;
use crate::error::{Error, Pos, SyntaxError, TypeError, TypeErrorKind};
use crate::syntax::{Annotation, Bindings, Expr, Matching, Name, NameSupply, Pattern};

/// A top-level definition after translation.
#[derive(Clone, Debug)]
pub struct Definition {
    pub name: Name,
    pub expr: Expr,
    pub pos: Pos,
}

pub struct Translator<'a> {
    /// Constructor arities.
    pub ctors: &'a HashMap<String, usize>,
    pub supply: &'a mut NameSupply,
    pos: Pos,
}

fn syntax(pos: Pos, message: String) -> Error {
    Error::Syntax(SyntaxError { pos, message })
}

/// Groups consecutive equations of the same name.
pub fn group_clauses<'d>(decls: impl IntoIterator<Item = &'d Clause>) -> Result<Vec<(String, Vec<&'d Clause>)>, Error> {
    let mut groups: Vec<(String, Vec<&Clause>)> = Vec::new();
    let mut seen = HashSet::new();
    for c in decls {
        match groups.last_mut() {
            Some((n, cs)) if *n == c.name => cs.push(c),
            _ => {
                if !seen.insert(c.name.clone()) {
                    return Err(syntax(c.pos, format!("conflicting definitions for `{}`", c.name)));
                }
                groups.push((c.name.clone(), vec![c]));
            }
        }
    }
    Ok(groups)
}

impl<'a> Translator<'a> {
    pub fn new(ctors: &'a HashMap<String, usize>, supply: &'a mut NameSupply) -> Self {
        Translator { ctors, supply, pos: Pos::default() }
    }

    pub fn definitions(&mut self, decls: &[Decl]) -> Result<Vec<Definition>, Error> {
        let clauses = decls.iter().filter_map(|d| match d {
            Decl::Clause(c) => Some(c),
            _ => None,
        });
        let mut out = Vec::new();
        for (name, cs) in group_clauses(clauses)? {
            self.pos = cs[0].pos;
            let expr = self.group(&name, &cs, true)?;
            out.push(Definition { name: Name::new(&name), expr, pos: cs[0].pos });
        }
        Ok(out)
    }

    fn group(&mut self, name: &str, clauses: &[&Clause], top: bool) -> Result<Expr, Error> {
        let arity = clauses[0].pats.len();
        if clauses.iter().any(|c| c.pats.len() != arity) {
            return Err(Error::Type(TypeError {
                kind: TypeErrorKind::ClauseArity(name.into()),
                binding: Some(name.into()),
                pos: Some(clauses[0].pos),
            }));
        }
        if arity == 0 && clauses.len() > 1 {
            return Err(syntax(clauses[1].pos, format!("conflicting definitions for `{name}`")));
        }
        if !top && arity == 0 {
            if let (Rhs::Plain(e, _), true) = (&clauses[0].rhs, clauses[0].wheres.is_empty()) {
                return self.expr(e);
            }
        }
        let mut alts = Vec::new();
        for c in clauses {
            alts.extend(self.clause(name, c)?);
        }
        Ok(Expr::lam(Matching::alts(alts)))
    }

    fn clause(&mut self, name: &str, c: &Clause) -> Result<Vec<Matching>, Error> {
        check_linear(&c.pats, c.pos)?;
        let binds = self.local_bindings(&c.wheres)?;
        let bodies = match &c.rhs {
            Rhs::Plain(e, text) => {
                let ann = Annotation::new(name, &format!("{} = {}", c.head_text, text));
                vec![Matching::Return(self.expr(e)?, Some(ann))]
            }
            Rhs::Guarded(gs) => {
                let mut out = Vec::new();
                for g in gs {
                    let ann = Annotation::new(name, &format!("{} | {} = {}", c.head_text, g.guard_text, g.body_text));
                    out.push(self.guarded(g, Some(ann))?);
                }
                out
            }
        };
        if binds.0.is_empty() {
            bodies.into_iter().map(|b| self.pats(&c.pats, b)).collect()
        } else {
            let body = Matching::Where(Arc::new(Matching::alts(bodies)), binds);
            Ok(vec![self.pats(&c.pats, body)?])
        }
    }

    fn guarded(&mut self, g: &Guarded, ann: Option<Arc<Annotation>>) -> Result<Matching, Error> {
        let body = Matching::Return(self.expr(&g.body)?, ann);
        match &g.guard {
            SExpr::Var(v) if v == "otherwise" => Ok(body),
            SExpr::Con(c) if c == "True" => Ok(body),
            guard => Ok(Matching::arg(self.expr(guard)?, Matching::pat(Pattern::con("True", vec![]), body))),
        }
    }

    fn local_bindings(&mut self, decls: &[Decl]) -> Result<Bindings, Error> {
        let mut clauses = Vec::new();
        for d in decls {
            match d {
                Decl::Clause(c) => clauses.push(c),
                Decl::Signature(..) => {}
                Decl::Data(dd) => return Err(syntax(dd.pos, "data declarations must be at top level".into())),
                Decl::TypeSynonym(.., pos) => return Err(syntax(*pos, "type synonyms must be at top level".into())),
            }
        }
        let mut out = Vec::new();
        for (name, cs) in group_clauses(clauses)? {
            out.push((Name::new(&name), self.group(&name, &cs, false)?));
        }
        Ok(Bindings(out))
    }

    /// `p1 ▷ p2 ▷ … ▷ body`, with as-patterns re-matched right after the
    /// pattern containing them.
    fn pats(&mut self, ps: &[SPat], body: Matching) -> Result<Matching, Error> {
        let Some((first, rest)) = ps.split_first() else { return Ok(body) };
        let inner = self.pats(rest, body)?;
        let mut extras = Vec::new();
        let p = self.pattern(first, &mut extras)?;
        let mut m = inner;
        for (x, sp) in extras.into_iter().rev() {
            m = Matching::arg(Expr::Var(Name::new(&x)), self.pats(std::slice::from_ref(&sp), m)?);
        }
        Ok(Matching::pat(p, m))
    }

    fn pattern(&mut self, sp: &SPat, extras: &mut Vec<(String, SPat)>) -> Result<Pattern, Error> {
        Ok(match sp {
            SPat::Var(x) => Pattern::var(x),
            SPat::Wild => Pattern::Wild,
            SPat::Bang(x) => Pattern::Bang(Name::new(x)),
            SPat::Int(n) => Pattern::Int(n.clone()),
            SPat::Char(c) => Pattern::Char(*c),
            SPat::Str(s) => s.chars().rev().fold(Pattern::con("[]", vec![]), |acc, c| {
                Pattern::con(":", vec![Pattern::Char(c), acc])
            }),
            SPat::As(x, p) => {
                extras.push((x.clone(), (**p).clone()));
                Pattern::var(x)
            }
            SPat::Con(c, args) => {
                let arity = self.ctor_arity(c)?;
                if arity != args.len() {
                    return Err(Error::Type(TypeError {
                        kind: TypeErrorKind::ConstructorArity { name: c.clone(), expected: arity, found: args.len() },
                        binding: None,
                        pos: Some(self.pos),
                    }));
                }
                let ps = args.iter().map(|a| self.pattern(a, extras)).collect::<Result<_, _>>()?;
                Pattern::con(c, ps)
            }
        })
    }

    fn ctor_arity(&self, c: &str) -> Result<usize, Error> {
        self.ctors.get(c).copied().ok_or_else(|| {
            Error::Type(TypeError { kind: TypeErrorKind::Unbound(c.into()), binding: None, pos: Some(self.pos) })
        })
    }

    pub fn expr(&mut self, e: &SExpr) -> Result<Expr, Error> {
        Ok(match e {
            SExpr::Var(x) => Expr::var(x),
            SExpr::Con(c) => {
                if self.ctor_arity(c)? == 0 {
                    Expr::con(c, vec![])
                } else {
                    Expr::var(c)
                }
            }
            SExpr::Int(n) => Expr::Int(n.clone()),
            SExpr::Char(c) => Expr::Char(*c),
            SExpr::Str(s) => string(s),
            SExpr::App(..) => {
                let mut args = Vec::new();
                let mut head = e;
                while let SExpr::App(f, x) = head {
                    args.push(&**x);
                    head = f;
                }
                args.reverse();
                let args: Vec<Expr> = args.into_iter().map(|a| self.expr(a)).collect::<Result<_, _>>()?;
                match head {
                    SExpr::Con(c) if self.ctor_arity(c)? == args.len() => Expr::con(c, args),
                    _ => Expr::apps(self.expr(head)?, args),
                }
            }
            SExpr::Lambda(ps, body) => {
                check_linear(ps, self.pos)?;
                let body = Matching::ret(self.expr(body)?);
                Expr::lam(self.pats(ps, body)?)
            }
            SExpr::Let(decls, body) => {
                let binds = self.local_bindings(decls)?;
                Expr::let_in(binds, self.expr(body)?)
            }
            SExpr::If(c, t, f) => {
                let alts = vec![
                    Matching::pat(Pattern::con("True", vec![]), Matching::ret(self.expr(t)?)),
                    Matching::pat(Pattern::con("False", vec![]), Matching::ret(self.expr(f)?)),
                ];
                Expr::case_of(self.expr(c)?, alts)
            }
            SExpr::Case(scrut, alts) => {
                let mut ms = Vec::new();
                for alt in alts {
                    check_linear(std::slice::from_ref(&alt.pat), self.pos)?;
                    let binds = self.local_bindings(&alt.wheres)?;
                    let body = match &alt.rhs {
                        Rhs::Plain(e, _) => Matching::ret(self.expr(e)?),
                        Rhs::Guarded(gs) => {
                            let gs = gs.iter().map(|g| self.guarded(g, None)).collect::<Result<_, _>>()?;
                            Matching::alts(gs)
                        }
                    };
                    let body = if binds.0.is_empty() { body } else { Matching::Where(Arc::new(body), binds) };
                    ms.push(self.pats(std::slice::from_ref(&alt.pat), body)?);
                }
                Expr::case_of(self.expr(scrut)?, ms)
            }
            SExpr::List(es) => {
                let es: Vec<Expr> = es.iter().map(|x| self.expr(x)).collect::<Result<_, _>>()?;
                es.into_iter().rev().fold(Expr::con("[]", vec![]), |acc, x| Expr::con(":", vec![x, acc]))
            }
            SExpr::Tuple(es) => {
                let name = super::parser::tuple_name(es.len());
                let es = es.iter().map(|x| self.expr(x)).collect::<Result<_, _>>()?;
                Expr::con(&name, es)
            }
            SExpr::Neg(x) => match &**x {
                SExpr::Int(n) => Expr::Int(-n.clone()),
                x => Expr::app(Expr::var("negate"), self.expr(x)?),
            },
            SExpr::LeftSection(x, op) => Expr::app(self.operator(op)?, self.expr(x)?),
            SExpr::RightSection(op, x) => {
                let v = self.supply.fresh("x");
                let body = Expr::apps(self.operator(op)?, [Expr::Var(v.clone()), self.expr(x)?]);
                Expr::lam(Matching::pat(Pattern::Var(v), Matching::ret(body)))
            }
            SExpr::EnumFrom(a, None) => Expr::app(Expr::var("enumFrom"), self.expr(a)?),
            SExpr::EnumFrom(a, Some(b)) => Expr::apps(Expr::var("enumFromTo"), [self.expr(a)?, self.expr(b)?]),
            SExpr::Typed(x, _) => self.expr(x)?,
        })
    }

    /// Operators in sections always go through their curried wrapper.
    fn operator(&mut self, op: &SExpr) -> Result<Expr, Error> {
        match op {
            SExpr::Var(o) | SExpr::Con(o) => Ok(Expr::var(o)),
            other => self.expr(other),
        }
    }
}

pub fn string(s: &str) -> Expr {
    s.chars().rev().fold(Expr::con("[]", vec![]), |acc, c| Expr::con(":", vec![Expr::Char(c), acc]))
}

fn check_linear(ps: &[SPat], pos: Pos) -> Result<(), Error> {
    fn walk(p: &SPat, seen: &mut HashSet<String>) -> Result<(), String> {
        let mut add = |x: &String| if seen.insert(x.clone()) { Ok(()) } else { Err(x.clone()) };
        match p {
            SPat::Var(x) | SPat::Bang(x) => add(x),
            SPat::As(x, q) => {
                add(x)?;
                walk(q, seen)
            }
            SPat::Con(_, qs) => qs.iter().try_for_each(|q| walk(q, seen)),
            SPat::Wild | SPat::Int(_) | SPat::Char(_) | SPat::Str(_) => Ok(()),
        }
    }
    let mut seen = HashSet::new();
    for p in ps {
        walk(p, &mut seen).map_err(|x| syntax(pos, format!("conflicting definitions for `{x}` in a pattern")))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Keeping local names apart from global ones

/// Renames local binders that coincide with global names, so that
/// substituting globals for variables can never be captured.
pub fn separate_from_globals(e: &Expr, globals: &HashSet<Name>, supply: &mut NameSupply) -> Expr {
    Separator { globals, supply }.expr(e, &HashMap::new())
}

struct Separator<'a> {
    globals: &'a HashSet<Name>,
    supply: &'a mut NameSupply,
}

impl Separator<'_> {
    fn expr(&mut self, e: &Expr, env: &HashMap<Name, Name>) -> Expr {
        match e {
            Expr::Var(x) => Expr::Var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
            Expr::App(f, x) => Expr::app(self.expr(f, env), self.expr(x, env)),
            Expr::Lam(m) => Expr::lam(self.matching(m, env)),
            Expr::Con(c, xs) => Expr::Con(c.clone(), xs.iter().map(|x| self.expr(x, env)).collect()),
            Expr::Prim(op, xs) => Expr::Prim(*op, xs.iter().map(|x| self.expr(x, env)).collect()),
            Expr::Int(_) | Expr::Char(_) => e.clone(),
        }
    }

    fn bind(&mut self, x: &Name, env: &mut HashMap<Name, Name>) -> Name {
        if self.globals.contains(x) {
            let y = self.supply.fresh(x.as_str());
            env.insert(x.clone(), y.clone());
            y
        } else {
            env.remove(x);
            x.clone()
        }
    }

    fn pattern(&mut self, p: &Pattern, env: &mut HashMap<Name, Name>) -> Pattern {
        match p {
            Pattern::Var(x) => Pattern::Var(self.bind(x, env)),
            Pattern::Bang(x) => Pattern::Bang(self.bind(x, env)),
            Pattern::Con(c, ps) => Pattern::Con(c.clone(), ps.iter().map(|q| self.pattern(q, env)).collect()),
            Pattern::Wild | Pattern::Int(_) | Pattern::Char(_) => p.clone(),
        }
    }

    fn matching(&mut self, m: &Matching, env: &HashMap<Name, Name>) -> Matching {
        match m {
            Matching::Return(e, a) => Matching::Return(self.expr(e, env), a.clone()),
            Matching::Fail => Matching::Fail,
            Matching::Pat(p, body) => {
                let mut env2 = env.clone();
                let p = self.pattern(p, &mut env2);
                Matching::pat(p, self.matching(body, &env2))
            }
            Matching::Arg(e, body) => Matching::arg(self.expr(e, env), self.matching(body, env)),
            Matching::Alt(a, b) => Matching::alt(self.matching(a, env), self.matching(b, env)),
            Matching::Where(body, bs) => {
                let mut env2 = env.clone();
                let names: Vec<Name> = bs.names().map(|x| self.bind(x, &mut env2)).collect();
                let binds = names.into_iter().zip(&bs.0).map(|(n, (_, e))| (n, self.expr(e, &env2))).collect();
                Matching::Where(Arc::new(self.matching(body, &env2)), Bindings(binds))
            }
        }
    }
}
