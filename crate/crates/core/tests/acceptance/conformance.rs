//! Translations of small definitions compared with hand-built terms.

use std::collections::HashMap;
use std::sync::Arc;

use haskelite_core::frontend::parse_program;
use haskelite_core::frontend::translate::Translator;
use haskelite_core::syntax::{Annotation, Bindings, Expr, Matching, Name, NameSupply, Pattern};

/// Renames every name to its order of first appearance, so that terms
/// differing only in the choice of names become equal.
#[derive(Default)]
struct Canon {
    names: HashMap<Name, Name>,
    keep_annotations: bool,
}

impl Canon {
    fn name(&mut self, n: &Name) -> Name {
        let k = self.names.len();
        self.names.entry(n.clone()).or_insert_with(|| Name::new(&format!("n{k}"))).clone()
    }

    fn expr(&mut self, e: &Expr) -> Expr {
        match e {
            Expr::Var(x) => Expr::Var(self.name(x)),
            Expr::App(f, x) => Expr::App(Arc::new(self.expr(f)), Arc::new(self.expr(x))),
            Expr::Lam(m) => Expr::Lam(Arc::new(self.matching(m))),
            Expr::Con(c, es) => Expr::Con(c.clone(), es.iter().map(|x| self.expr(x)).collect()),
            Expr::Prim(op, es) => Expr::Prim(*op, es.iter().map(|x| self.expr(x)).collect()),
            Expr::Int(_) | Expr::Char(_) => e.clone(),
        }
    }

    fn pattern(&mut self, p: &Pattern) -> Pattern {
        match p {
            Pattern::Var(x) => Pattern::Var(self.name(x)),
            Pattern::Bang(x) => Pattern::Bang(self.name(x)),
            Pattern::Con(c, ps) => Pattern::Con(c.clone(), ps.iter().map(|q| self.pattern(q)).collect()),
            Pattern::Wild | Pattern::Int(_) | Pattern::Char(_) => p.clone(),
        }
    }

    fn matching(&mut self, m: &Matching) -> Matching {
        match m {
            Matching::Return(e, a) => Matching::Return(self.expr(e), a.clone().filter(|_| self.keep_annotations)),
            Matching::Fail => Matching::Fail,
            Matching::Pat(p, m) => {
                let p = self.pattern(p);
                Matching::Pat(p, Arc::new(self.matching(m)))
            }
            Matching::Arg(e, m) => {
                let e = self.expr(e);
                Matching::Arg(e, Arc::new(self.matching(m)))
            }
            Matching::Alt(a, b) => {
                let a = self.matching(a);
                Matching::Alt(Arc::new(a), Arc::new(self.matching(b)))
            }
            Matching::Where(m, bs) => {
                let bs = Bindings(bs.0.iter().map(|(x, e)| (self.name(x), self.expr(e))).collect());
                Matching::Where(Arc::new(self.matching(m)), bs)
            }
        }
    }
}

fn canonical(e: &Expr, keep_annotations: bool) -> Expr {
    Canon { keep_annotations, ..Canon::default() }.expr(e)
}

fn translate(src: &str) -> Result<Expr, String> {
    let decls = parse_program(src).map_err(|e| e.to_string())?;
    let ctors: HashMap<String, usize> =
        [("[]", 0), (":", 2), ("True", 0), ("False", 0)].into_iter().map(|(c, n)| (c.to_string(), n)).collect();
    let mut supply = NameSupply::translation();
    let defs = Translator::new(&ctors, &mut supply).definitions(&decls).map_err(|e| e.to_string())?;
    match defs.as_slice() {
        [d] => Ok(d.expr.clone()),
        _ => Err(format!("expected one definition, got {}", defs.len())),
    }
}

fn v(x: &str) -> Expr {
    Expr::var(x)
}

fn pv(x: &str) -> Pattern {
    Pattern::var(x)
}

fn cons(x: Expr, xs: Expr) -> Expr {
    Expr::con(":", vec![x, xs])
}

fn nil() -> Expr {
    Expr::con("[]", vec![])
}

fn pcons(x: Pattern, xs: Pattern) -> Pattern {
    Pattern::con(":", vec![x, xs])
}

fn guard(cond: Expr, body: Matching) -> Matching {
    Matching::arg(cond, Matching::pat(Pattern::con("True", vec![]), body))
}

fn op(o: &str, a: Expr, b: Expr) -> Expr {
    Expr::apps(v(o), [a, b])
}

fn is_short() -> Expr {
    Expr::lam(Matching::alts(vec![
        Matching::pat(pcons(pv("x"), pcons(pv("y"), pv("ys"))), Matching::ret(Expr::con("False", vec![]))),
        Matching::pat(pv("ys"), Matching::ret(Expr::con("True", vec![]))),
    ]))
}

fn zip_with() -> Expr {
    let body = cons(Expr::apps(v("f"), [v("x"), v("y")]), Expr::apps(v("zipWith"), [v("f"), v("xs"), v("ys")]));
    Expr::lam(Matching::alts(vec![
        Matching::pats(vec![pv("f"), pcons(pv("x"), pv("xs")), pcons(pv("y"), pv("ys"))], Matching::ret(body)),
        Matching::pats(vec![pv("f"), pv("xs"), pv("ys")], Matching::ret(nil())),
    ]))
}

fn nodups() -> Expr {
    let first = Matching::pat(
        pcons(pv("x"), pv("xs")),
        Matching::arg(
            v("xs"),
            Matching::pat(
                pcons(pv("y"), pv("ys")),
                guard(op("==", v("x"), v("y")), Matching::ret(Expr::app(v("nodups"), v("xs")))),
            ),
        ),
    );
    Expr::lam(Matching::alts(vec![
        first,
        Matching::pat(pcons(pv("x"), pv("xs")), Matching::ret(cons(v("x"), Expr::app(v("nodups"), v("xs"))))),
        Matching::pat(Pattern::con("[]", vec![]), Matching::ret(nil())),
    ]))
}

fn foo() -> Expr {
    let z = || v("z");
    let guards = Matching::alt(
        guard(op(">", z(), Expr::int(0)), Matching::ret(op("+", z(), Expr::int(1)))),
        guard(op("<", z(), Expr::int(0)), Matching::ret(op("-", z(), Expr::int(1)))),
    );
    let scoped = Matching::Where(Arc::new(guards), Bindings(vec![(Name::new("z"), op("*", v("x"), v("y")))]));
    Expr::lam(Matching::alt(
        Matching::pats(vec![pv("x"), pv("y")], scoped),
        Matching::pats(vec![pv("x"), pv("y")], Matching::ret(op("+", v("x"), v("y")))),
    ))
}

fn annotated_insert() -> Expr {
    let ann = |t: &str| Some(Annotation::new("insert", t));
    let yys = || pcons(pv("y"), pv("ys"));
    Expr::lam(Matching::alts(vec![
        Matching::pats(
            vec![pv("x"), Pattern::con("[]", vec![])],
            Matching::Return(cons(v("x"), nil()), ann("insert x [] = [x]")),
        ),
        Matching::pats(
            vec![pv("x"), yys()],
            guard(
                op("<=", v("x"), v("y")),
                Matching::Return(cons(v("x"), cons(v("y"), v("ys"))), ann("insert x (y:ys) | x<=y = x:y:ys")),
            ),
        ),
        Matching::pats(
            vec![pv("x"), yys()],
            Matching::Return(
                cons(v("y"), Expr::apps(v("insert"), [v("x"), v("ys")])),
                ann("insert x (y:ys) | otherwise = y:insert x ys"),
            ),
        ),
    ]))
}

pub fn check() -> Result<String, String> {
    let cases: [(&str, &str, Expr, bool); 5] = [
        ("isShort", include_str!("../../programs/isshort.hs"), is_short(), false),
        ("zipWith", include_str!("../../programs/zipwith.hs"), zip_with(), false),
        ("nodups", include_str!("../../programs/nodups.hs"), nodups(), false),
        ("foo", include_str!("../../programs/foo.hs"), foo(), false),
        ("insert", include_str!("../../programs/insert.hs"), annotated_insert(), true),
    ];
    for (name, src, want, annotated) in cases {
        let got = translate(src)?;
        if canonical(&got, annotated) != canonical(&want, annotated) {
            return Err(format!("{name}: translated to {got:?}"));
        }
    }
    Ok("5 translations match".into())
}
