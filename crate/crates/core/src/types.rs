//! Hindley-Milner type inference over core terms.
//!
//! Bindings are generalized per strongly connected component of their
//! dependency graph, so a function used at several types elsewhere in its
//! own group of definitions stays polymorphic outside that group.

use std::collections::HashMap;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Pos, TypeError, TypeErrorKind};
use crate::frontend::ast::{DataDecl, SType};
use crate::prim::PrimOp;
use crate::syntax::{free_vars, Bindings, Expr, Matching, Name, Pattern};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Var(u32),
    Con(String, Vec<Type>),
    Fun(Box<Type>, Box<Type>),
}

impl Type {
    pub fn con(c: &str) -> Type {
        Type::Con(c.into(), vec![])
    }

    pub fn fun(a: Type, b: Type) -> Type {
        Type::Fun(Box::new(a), Box::new(b))
    }

    pub fn list(a: Type) -> Type {
        Type::Con("[]".into(), vec![a])
    }

    fn ftv(&self, out: &mut Vec<u32>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Type::Con(_, ts) => ts.iter().for_each(|t| t.ftv(out)),
            Type::Fun(a, b) => {
                a.ftv(out);
                b.ftv(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub vars: Vec<u32>,
    pub ty: Type,
}

impl Scheme {
    pub fn mono(ty: Type) -> Scheme {
        Scheme { vars: vec![], ty }
    }

    /// Quantifies over every type variable.
    pub fn closed(ty: Type) -> Scheme {
        let mut vars = Vec::new();
        ty.ftv(&mut vars);
        Scheme { vars, ty }
    }
}

fn var_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

struct Printer {
    names: HashMap<u32, String>,
}

impl Printer {
    fn name(&mut self, v: u32) -> String {
        let n = self.names.len();
        self.names.entry(v).or_insert_with(|| var_name(n)).clone()
    }

    fn ty(&mut self, t: &Type, prec: u8) -> String {
        match t {
            Type::Var(v) => self.name(*v),
            Type::Fun(a, b) => {
                let s = format!("{} -> {}", self.ty(a, 1), self.ty(b, 0));
                if prec > 0 {
                    format!("({s})")
                } else {
                    s
                }
            }
            Type::Con(c, args) if c == "[]" && args.len() == 1 => format!("[{}]", self.ty(&args[0], 0)),
            Type::Con(c, args) if c.starts_with("(,") => {
                let parts: Vec<String> = args.iter().map(|a| self.ty(a, 0)).collect();
                format!("({})", parts.join(", "))
            }
            Type::Con(c, args) if args.is_empty() => c.trim_start_matches('\'').to_string(),
            Type::Con(c, args) => {
                let parts: Vec<String> = args.iter().map(|a| self.ty(a, 2)).collect();
                let s = format!("{c} {}", parts.join(" "));
                if prec > 1 {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer { names: HashMap::new() }.ty(self, 0))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ty.fmt(f)
    }
}

// ---------------------------------------------------------------------------
// Data types

/// Type constructors, synonyms and constructor signatures in scope.
#[derive(Clone, Debug)]
pub struct DataEnv {
    /// Type constructor arities.
    pub tycons: HashMap<String, usize>,
    pub synonyms: HashMap<String, (Vec<String>, SType)>,
    pub ctors: HashMap<String, Scheme>,
    /// Constructor arities, as needed by translation.
    pub ctor_arity: HashMap<String, usize>,
    next: u32,
}

impl Default for DataEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl DataEnv {
    pub fn new() -> Self {
        let mut env = DataEnv {
            tycons: HashMap::new(),
            synonyms: HashMap::new(),
            ctors: HashMap::new(),
            ctor_arity: HashMap::new(),
            next: 0,
        };
        for (t, n) in [("Int", 0), ("Char", 0), ("Bool", 0), ("[]", 1), ("()", 0), ("(,)", 2), ("(,,)", 3), ("(,,,)", 4)] {
            env.tycons.insert(t.into(), n);
        }
        env.synonyms.insert("String".into(), (vec![], SType::Con("[]".into(), vec![SType::Con("Char".into(), vec![])])));
        let a = Type::Var(0);
        env.add_ctor("True", Type::con("Bool"), 0);
        env.add_ctor("False", Type::con("Bool"), 0);
        env.add_ctor("()", Type::con("()"), 0);
        env.add_ctor("[]", Type::list(a.clone()), 0);
        env.add_ctor(":", Type::fun(a.clone(), Type::fun(Type::list(a.clone()), Type::list(a))), 2);
        for n in 2..=4 {
            let vars: Vec<Type> = (0..n).map(Type::Var).collect();
            let name = format!("({})", ",".repeat(n as usize - 1));
            let result = Type::Con(name.clone(), vars.clone());
            let ty = vars.into_iter().rev().fold(result, |acc, v| Type::fun(v, acc));
            env.add_ctor(&name, ty, n as usize);
        }
        env.next = 100;
        env
    }

    fn add_ctor(&mut self, name: &str, ty: Type, arity: usize) {
        self.ctors.insert(name.into(), Scheme::closed(ty));
        self.ctor_arity.insert(name.into(), arity);
    }

    pub fn add_data(&mut self, d: &DataDecl) -> Result<(), TypeError> {
        let err = |kind| TypeError { kind, binding: Some(d.name.clone()), pos: Some(d.pos) };
        self.tycons.insert(d.name.clone(), d.params.len());
        let mut vars = HashMap::new();
        for p in &d.params {
            vars.insert(p.clone(), Type::Var(self.next));
            self.next += 1;
        }
        let result = Type::Con(d.name.clone(), d.params.iter().map(|p| vars[p].clone()).collect());
        for (c, fields) in &d.constructors {
            let mut ty = result.clone();
            for f in fields.iter().rev() {
                let ft = self.convert(f, &mut |v| vars.get(v).cloned()).map_err(err)?;
                ty = Type::fun(ft, ty);
            }
            self.add_ctor(c, ty, fields.len());
        }
        Ok(())
    }

    pub fn add_synonym(&mut self, name: &str, params: Vec<String>, body: SType) {
        self.synonyms.insert(name.into(), (params, body));
    }

    /// Converts a written type, resolving variables through `var`.
    pub fn convert(&self, t: &SType, var: &mut dyn FnMut(&str) -> Option<Type>) -> Result<Type, TypeErrorKind> {
        match t {
            SType::Var(v) => var(v).ok_or_else(|| TypeErrorKind::Unbound(format!("type variable {v}"))),
            SType::Fun(a, b) => Ok(Type::fun(self.convert(a, var)?, self.convert(b, var)?)),
            SType::Con(c, args) => {
                if let Some((params, body)) = self.synonyms.get(c) {
                    if params.len() != args.len() {
                        return Err(TypeErrorKind::ConstructorArity { name: c.clone(), expected: params.len(), found: args.len() });
                    }
                    let sub: HashMap<&str, &SType> = params.iter().map(String::as_str).zip(args).collect();
                    return self.convert(&substitute(body, &sub), var);
                }
                match self.tycons.get(c) {
                    None => Err(TypeErrorKind::UnknownType(c.clone())),
                    Some(&n) if n != args.len() => {
                        Err(TypeErrorKind::ConstructorArity { name: c.clone(), expected: n, found: args.len() })
                    }
                    Some(_) => {
                        let args = args.iter().map(|a| self.convert(a, var)).collect::<Result<_, _>>()?;
                        Ok(Type::Con(c.clone(), args))
                    }
                }
            }
        }
    }
}

fn substitute(t: &SType, sub: &HashMap<&str, &SType>) -> SType {
    match t {
        SType::Var(v) => sub.get(v.as_str()).map(|s| (*s).clone()).unwrap_or_else(|| t.clone()),
        SType::Fun(a, b) => SType::Fun(Box::new(substitute(a, sub)), Box::new(substitute(b, sub))),
        SType::Con(c, args) => SType::Con(c.clone(), args.iter().map(|a| substitute(a, sub)).collect()),
    }
}

pub fn prim_type(op: PrimOp) -> Scheme {
    let int = Type::con("Int");
    let bool_ = Type::con("Bool");
    let a = Type::Var(0);
    let bin = |x: Type, r: Type| Type::fun(x.clone(), Type::fun(x, r));
    Scheme::closed(match op {
        PrimOp::Add | PrimOp::Sub | PrimOp::Mul | PrimOp::Div | PrimOp::Mod => bin(int.clone(), int),
        PrimOp::Negate => Type::fun(int.clone(), int),
        PrimOp::Eq | PrimOp::Ne => bin(a, bool_),
        PrimOp::Lt | PrimOp::Le | PrimOp::Gt | PrimOp::Ge => bin(int, bool_),
        PrimOp::Ord => Type::fun(Type::con("Char"), int),
        PrimOp::Chr => Type::fun(int, Type::con("Char")),
        PrimOp::Force => Type::fun(a.clone(), a),
    })
}

// ---------------------------------------------------------------------------
// Inference

/// Types of global names.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    pub globals: HashMap<Name, Scheme>,
}

pub struct Checker<'a> {
    data: &'a DataEnv,
    subst: HashMap<u32, Type>,
    next: u32,
    locals: Vec<(Name, Scheme)>,
    binding: Option<String>,
    pos: Option<Pos>,
}

impl<'a> Checker<'a> {
    pub fn new(data: &'a DataEnv) -> Self {
        Checker { data, subst: HashMap::new(), next: 1000, locals: Vec::new(), binding: None, pos: None }
    }

    fn fresh(&mut self) -> Type {
        self.next += 1;
        Type::Var(self.next)
    }

    fn error(&self, kind: TypeErrorKind) -> TypeError {
        TypeError { kind, binding: self.binding.clone(), pos: self.pos }
    }

    fn resolve(&self, t: &Type) -> Type {
        match t {
            Type::Var(v) => match self.subst.get(v) {
                Some(t2) => self.resolve(t2),
                None => t.clone(),
            },
            Type::Con(c, ts) => Type::Con(c.clone(), ts.iter().map(|t| self.resolve(t)).collect()),
            Type::Fun(a, b) => Type::fun(self.resolve(a), self.resolve(b)),
        }
    }

    fn occurs(&self, v: u32, t: &Type) -> bool {
        match t {
            Type::Var(w) => match self.subst.get(w) {
                Some(t2) => self.occurs(v, t2),
                None => *w == v,
            },
            Type::Con(_, ts) => ts.iter().any(|t| self.occurs(v, t)),
            Type::Fun(a, b) => self.occurs(v, a) || self.occurs(v, b),
        }
    }

    fn unify(&mut self, expected: &Type, found: &Type) -> Result<(), TypeError> {
        self.unify_inner(expected, found).map_err(|_| {
            // Report the whole types involved, with a shared variable naming.
            let (e, f) = (self.resolve(expected), self.resolve(found));
            let pair = Type::Con("(,)".into(), vec![e.clone(), f.clone()]);
            let mut p = Printer { names: HashMap::new() };
            let _ = p.ty(&pair, 0);
            let (es, fs) = (p.ty(&e, 0), p.ty(&f, 0));
            let mut vars = Vec::new();
            e.ftv(&mut vars);
            if let Some(v) = vars.iter().find(|v| self.occurs(**v, &f) && f != Type::Var(**v)) {
                return self.error(TypeErrorKind::Occurs { var: p.name(*v), ty: fs });
            }
            self.error(TypeErrorKind::Mismatch { expected: es, found: fs })
        })
    }

    fn unify_inner(&mut self, a: &Type, b: &Type) -> Result<(), ()> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Type::Var(x), Type::Var(y)) if x == y => Ok(()),
            (Type::Var(x), t) | (t, Type::Var(x)) => {
                if self.occurs(*x, t) {
                    return Err(());
                }
                self.subst.insert(*x, t.clone());
                Ok(())
            }
            (Type::Fun(a1, b1), Type::Fun(a2, b2)) => {
                self.unify_inner(a1, a2)?;
                self.unify_inner(b1, b2)
            }
            (Type::Con(c1, ts1), Type::Con(c2, ts2)) if c1 == c2 && ts1.len() == ts2.len() => {
                for (x, y) in ts1.iter().zip(ts2) {
                    self.unify_inner(x, y)?;
                }
                Ok(())
            }
            _ => Err(()),
        }
    }

    fn shallow(&self, t: &Type) -> Type {
        let mut t = t.clone();
        while let Type::Var(v) = t {
            match self.subst.get(&v) {
                Some(t2) => t = t2.clone(),
                None => break,
            }
        }
        t
    }

    fn instantiate(&mut self, s: &Scheme) -> Type {
        let map: HashMap<u32, Type> = s.vars.iter().map(|v| (*v, self.fresh())).collect();
        fn go(t: &Type, m: &HashMap<u32, Type>) -> Type {
            match t {
                Type::Var(v) => m.get(v).cloned().unwrap_or_else(|| t.clone()),
                Type::Con(c, ts) => Type::Con(c.clone(), ts.iter().map(|t| go(t, m)).collect()),
                Type::Fun(a, b) => Type::fun(go(a, m), go(b, m)),
            }
        }
        go(&s.ty, &map)
    }

    fn generalize(&self, t: &Type) -> Scheme {
        let t = self.resolve(t);
        let mut env_vars = Vec::new();
        for (_, s) in &self.locals {
            let mut vs = Vec::new();
            self.resolve(&s.ty).ftv(&mut vs);
            env_vars.extend(vs.into_iter().filter(|v| !s.vars.contains(v)));
        }
        let mut vars = Vec::new();
        t.ftv(&mut vars);
        vars.retain(|v| !env_vars.contains(v));
        Scheme { vars, ty: t }
    }

    fn lookup(&mut self, env: &TypeEnv, x: &Name) -> Result<Type, TypeError> {
        if let Some((_, s)) = self.locals.iter().rev().find(|(n, _)| n == x) {
            let s = s.clone();
            return Ok(self.instantiate(&s));
        }
        if let Some(s) = env.globals.get(x) {
            return Ok(self.instantiate(s));
        }
        if let Some(s) = self.data.ctors.get(x.as_str()) {
            return Ok(self.instantiate(s));
        }
        Err(self.error(TypeErrorKind::Unbound(x.base().to_string())))
    }

    /// Applies a function type to arguments of the given types.
    fn apply(&mut self, f: Type, args: Vec<Type>) -> Result<Type, TypeError> {
        let r = self.fresh();
        let expected = args.into_iter().rev().fold(r.clone(), |acc, a| Type::fun(a, acc));
        self.unify(&f, &expected)?;
        Ok(r)
    }

    pub fn infer(&mut self, env: &TypeEnv, e: &Expr) -> Result<Type, TypeError> {
        match e {
            Expr::Var(x) => self.lookup(env, x),
            Expr::App(f, x) => {
                let tf = self.infer(env, f)?;
                let tx = self.infer(env, x)?;
                let r = self.fresh();
                self.unify(&tf, &Type::fun(tx, r.clone()))?;
                Ok(r)
            }
            Expr::Lam(m) => self.matching(env, m),
            Expr::Con(c, args) => {
                let s = self.data.ctors.get(c.as_str()).cloned().ok_or_else(|| self.error(TypeErrorKind::Unbound(c.to_string())))?;
                let t = self.instantiate(&s);
                let args = args.iter().map(|a| self.infer(env, a)).collect::<Result<_, _>>()?;
                self.apply(t, args)
            }
            Expr::Int(_) => Ok(Type::con("Int")),
            Expr::Char(_) => Ok(Type::con("Char")),
            Expr::Prim(op, args) => {
                let t = self.instantiate(&prim_type(*op));
                let args = args.iter().map(|a| self.infer(env, a)).collect::<Result<_, _>>()?;
                self.apply(t, args)
            }
        }
    }

    fn matching(&mut self, env: &TypeEnv, m: &Matching) -> Result<Type, TypeError> {
        match m {
            Matching::Return(e, _) => self.infer(env, e),
            Matching::Fail => Ok(self.fresh()),
            Matching::Pat(p, body) => {
                let mark = self.locals.len();
                let tp = self.pattern(p)?;
                let tb = self.matching(env, body);
                self.locals.truncate(mark);
                Ok(Type::fun(tp, tb?))
            }
            Matching::Arg(e, body) => {
                let te = self.infer(env, e)?;
                let tb = self.matching(env, body)?;
                let r = self.fresh();
                self.unify(&tb, &Type::fun(te, r.clone()))?;
                Ok(r)
            }
            Matching::Alt(a, b) => {
                let ta = self.matching(env, a)?;
                let tb = self.matching(env, b)?;
                self.unify(&ta, &tb)?;
                Ok(ta)
            }
            Matching::Where(body, binds) => {
                let mark = self.locals.len();
                let r = self.bindings(env, binds, &HashMap::new()).and_then(|_| self.matching(env, body));
                self.locals.truncate(mark);
                r
            }
        }
    }

    fn pattern(&mut self, p: &Pattern) -> Result<Type, TypeError> {
        match p {
            Pattern::Var(x) | Pattern::Bang(x) => {
                let t = self.fresh();
                self.locals.push((x.clone(), Scheme::mono(t.clone())));
                Ok(t)
            }
            Pattern::Wild => Ok(self.fresh()),
            Pattern::Int(_) => Ok(Type::con("Int")),
            Pattern::Char(_) => Ok(Type::con("Char")),
            Pattern::Con(c, ps) => {
                let s = self.data.ctors.get(c.as_str()).cloned().ok_or_else(|| self.error(TypeErrorKind::Unbound(c.to_string())))?;
                let t = self.instantiate(&s);
                let args = ps.iter().map(|q| self.pattern(q)).collect::<Result<_, _>>()?;
                self.apply(t, args)
            }
        }
    }

    /// Infers a group of mutually recursive bindings, pushing their
    /// generalized types onto the local scope.
    fn bindings(&mut self, env: &TypeEnv, binds: &Bindings, sigs: &HashMap<Name, Type>) -> Result<Vec<(Name, Scheme)>, TypeError> {
        let items: Vec<(&Name, &Expr)> = binds.0.iter().map(|(n, e)| (n, e)).collect();
        let mut out = Vec::new();
        for scc in components(&items) {
            let mark = self.locals.len();
            let monos: Vec<Type> = scc.iter().map(|_| self.fresh()).collect();
            for (&i, t) in scc.iter().zip(&monos) {
                self.locals.push((items[i].0.clone(), Scheme::mono(t.clone())));
            }
            for (&i, t) in scc.iter().zip(&monos) {
                let te = self.infer(env, items[i].1)?;
                self.unify(t, &te)?;
            }
            self.locals.truncate(mark);
            for (&i, t) in scc.iter().zip(&monos) {
                let name = items[i].0.clone();
                let s = match sigs.get(&name) {
                    Some(sig) => self.check_signature(&name, t, sig)?,
                    None => self.generalize(t),
                };
                out.push((name, s));
            }
            for (n, s) in &out[out.len() - scc.len()..] {
                self.locals.push((n.clone(), s.clone()));
            }
        }
        Ok(out)
    }

    /// `sig` uses constants `'a` for its quantified variables.
    fn check_signature(&mut self, name: &Name, inferred: &Type, sig: &Type) -> Result<Scheme, TypeError> {
        let generalized = self.generalize(inferred);
        let inst = self.instantiate(&generalized);
        let saved = self.subst.clone();
        if self.unify_inner(sig, &inst).is_ok() {
            return Ok(unskolemize(sig));
        }
        self.subst = saved;
        let declared = unskolemize(sig);
        let flexible = self.instantiate(&declared);
        let inst2 = self.instantiate(&generalized);
        let kind = if self.unify_inner(&flexible, &inst2).is_ok() {
            TypeErrorKind::SignatureTooGeneral {
                name: name.base().to_string(),
                declared: declared.to_string(),
                inferred: generalized.to_string(),
            }
        } else {
            TypeErrorKind::Mismatch { expected: declared.to_string(), found: generalized.to_string() }
        };
        Err(self.error(kind))
    }
}

/// Replaces the constants standing for signature variables by quantified
/// variables.
fn unskolemize(t: &Type) -> Scheme {
    let mut map: HashMap<String, u32> = HashMap::new();
    fn go(t: &Type, map: &mut HashMap<String, u32>) -> Type {
        match t {
            Type::Con(c, ts) if c.starts_with('\'') && ts.is_empty() => {
                let n = map.len() as u32;
                Type::Var(*map.entry(c.clone()).or_insert(n))
            }
            Type::Con(c, ts) => Type::Con(c.clone(), ts.iter().map(|t| go(t, map)).collect()),
            Type::Fun(a, b) => Type::fun(go(a, map), go(b, map)),
            Type::Var(_) => t.clone(),
        }
    }
    Scheme::closed(go(t, &mut map))
}

/// Strongly connected components of a binding group, dependencies first.
fn components(items: &[(&Name, &Expr)]) -> Vec<Vec<usize>> {
    let index: HashMap<&Name, usize> = items.iter().enumerate().map(|(i, (n, _))| (*n, i)).collect();
    let mut g = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..items.len()).map(|i| g.add_node(i)).collect();
    for (i, (_, e)) in items.iter().enumerate() {
        for v in free_vars(e) {
            if let Some(&j) = index.get(&v) {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|scc| {
            let mut ix: Vec<usize> = scc.into_iter().map(|n| g[n]).collect();
            ix.sort_unstable();
            ix
        })
        .collect()
}

/// A type signature written in a program, with its variables rigid.
pub fn signature_type(data: &DataEnv, t: &SType) -> Result<Type, TypeErrorKind> {
    data.convert(t, &mut |v| Some(Type::con(&format!("'{v}"))))
}

/// Infers types for top-level definitions and adds them to `env`.
pub fn check_definitions(
    data: &DataEnv,
    env: &mut TypeEnv,
    defs: &[(Name, Expr, Option<Pos>)],
    sigs: &HashMap<Name, Type>,
) -> Result<(), TypeError> {
    let items: Vec<(&Name, &Expr)> = defs.iter().map(|(n, e, _)| (n, e)).collect();
    let positions: HashMap<&Name, Option<Pos>> = defs.iter().map(|(n, _, p)| (n, *p)).collect();
    for scc in components(&items) {
        let mut ck = Checker::new(data);
        let monos: Vec<Type> = scc.iter().map(|_| ck.fresh()).collect();
        for (&i, t) in scc.iter().zip(&monos) {
            ck.locals.push((items[i].0.clone(), Scheme::mono(t.clone())));
        }
        for (&i, t) in scc.iter().zip(&monos) {
            let name = items[i].0;
            ck.binding = Some(name.base().to_string());
            ck.pos = positions[name];
            let te = ck.infer(env, items[i].1)?;
            ck.unify(t, &te)?;
        }
        ck.locals.clear();
        for (&i, t) in scc.iter().zip(&monos) {
            let name = items[i].0;
            ck.binding = Some(name.base().to_string());
            ck.pos = positions[name];
            let s = match sigs.get(name) {
                Some(sig) => ck.check_signature(name, t, sig)?,
                None => ck.generalize(t),
            };
            env.globals.insert(name.clone(), normalize_scheme(s));
        }
    }
    Ok(())
}

/// Renumbers quantified variables from zero.
fn normalize_scheme(s: Scheme) -> Scheme {
    let map: HashMap<u32, u32> = s.vars.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
    fn go(t: &Type, m: &HashMap<u32, u32>) -> Type {
        match t {
            Type::Var(v) => Type::Var(m.get(v).copied().unwrap_or(*v)),
            Type::Con(c, ts) => Type::Con(c.clone(), ts.iter().map(|t| go(t, m)).collect()),
            Type::Fun(a, b) => Type::fun(go(a, m), go(b, m)),
        }
    }
    Scheme { vars: (0..s.vars.len() as u32).collect(), ty: go(&s.ty, &map) }
}

/// Infers the type of a closed expression.
pub fn infer_expr(data: &DataEnv, env: &TypeEnv, e: &Expr) -> Result<Scheme, TypeError> {
    let mut ck = Checker::new(data);
    let t = ck.infer(env, e)?;
    Ok(normalize_scheme(ck.generalize(&t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Bindings;

    fn v(s: &str) -> Expr {
        Expr::var(s)
    }

    fn id_fn() -> Expr {
        Expr::lam(Matching::pat(Pattern::var("x"), Matching::ret(v("x"))))
    }

    #[test]
    fn identity_is_polymorphic() {
        let data = DataEnv::new();
        let env = TypeEnv::default();
        let s = infer_expr(&data, &env, &id_fn()).unwrap();
        assert_eq!(s.to_string(), "a -> a");
    }

    #[test]
    fn let_polymorphism() {
        let data = DataEnv::new();
        let env = TypeEnv::default();
        let body = Expr::con("(,)", vec![Expr::app(v("i"), Expr::int(1)), Expr::app(v("i"), Expr::Char('c'))]);
        let e = Expr::let_in(Bindings(vec![(Name::new("i"), id_fn())]), body);
        assert_eq!(infer_expr(&data, &env, &e).unwrap().to_string(), "(Int, Char)");
    }

    #[test]
    fn lambda_bound_is_monomorphic() {
        let data = DataEnv::new();
        let env = TypeEnv::default();
        let body = Expr::con("(,)", vec![Expr::app(v("f"), Expr::int(1)), Expr::app(v("f"), Expr::Char('c'))]);
        let e = Expr::lam(Matching::pat(Pattern::var("f"), Matching::ret(body)));
        let err = infer_expr(&data, &env, &e).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::Mismatch { .. }), "{err}");
    }

    #[test]
    fn occurs_check() {
        let data = DataEnv::new();
        let env = TypeEnv::default();
        let e = Expr::lam(Matching::pat(Pattern::var("x"), Matching::ret(Expr::app(v("x"), v("x")))));
        let err = infer_expr(&data, &env, &e).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::Occurs { .. }), "{err}");
    }

    #[test]
    fn recursive_definitions_generalize_after_group() {
        let data = DataEnv::new();
        let mut env = TypeEnv::default();
        // len [] = 0; len (_:xs) = len xs
        let len = Expr::lam(Matching::alt(
            Matching::pat(Pattern::con("[]", vec![]), Matching::ret(Expr::int(0))),
            Matching::pat(Pattern::con(":", vec![Pattern::Wild, Pattern::var("xs")]), Matching::ret(Expr::app(v("len"), v("xs")))),
        ));
        let defs = vec![(Name::new("len"), len, None)];
        check_definitions(&data, &mut env, &defs, &HashMap::new()).unwrap();
        assert_eq!(env.globals[&Name::new("len")].to_string(), "[a] -> Int");
    }

    #[test]
    fn signature_checked() {
        let data = DataEnv::new();
        let mut env = TypeEnv::default();
        let defs = vec![(Name::new("f"), id_fn(), None)];
        let sig = signature_type(&data, &SType::Fun(Box::new(SType::Con("Int".into(), vec![])), Box::new(SType::Con("Int".into(), vec![])))).unwrap();
        let sigs = [(Name::new("f"), sig)].into_iter().collect();
        check_definitions(&data, &mut env, &defs, &sigs).unwrap();
        assert_eq!(env.globals[&Name::new("f")].to_string(), "Int -> Int");

        let mut env = TypeEnv::default();
        let len_const = Expr::lam(Matching::pat(Pattern::var("x"), Matching::ret(Expr::int(0))));
        let defs = vec![(Name::new("g"), len_const, None)];
        let sig = signature_type(&data, &SType::Fun(Box::new(SType::Var("a".into())), Box::new(SType::Var("a".into())))).unwrap();
        let sigs = [(Name::new("g"), sig)].into_iter().collect();
        let err = check_definitions(&data, &mut env, &defs, &sigs).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::SignatureTooGeneral { .. }), "{err}");
    }

    #[test]
    fn printing() {
        let t = Type::fun(Type::fun(Type::Var(5), Type::Var(6)), Type::list(Type::Con("Maybe".into(), vec![Type::Var(5)])));
        assert_eq!(t.to_string(), "(a -> b) -> [Maybe a]");
    }
}
