//! Random well-typed programs and helpers to run them on both evaluators.
#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use haskelite_core::bigstep::Evaluator;
use haskelite_core::machine::{applicable_rules, Config, Control, Frame, Heap, Outcome, Rule, StepOutcome};
use haskelite_core::prim::PrimOp;
use haskelite_core::syntax::{normalize, Bindings, Expr, Matching, Name, NameSupply, Pattern};
use haskelite_core::types::infer_expr;
use haskelite_core::Program;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Globals the generated expressions may call, on top of the prelude.
pub const LIBRARY: &str = "\
count n | n <= 0 = 0
        | otherwise = 1 + count (n - 1)
spin x = spin x
firstOr d [] = d
firstOr d (x:_) = x
pick (x:_) = x
build n | n <= 0 = []
        | otherwise = n : build (n - 1)
twice f x = f (f x)
lenAcc !acc [] = acc
lenAcc !acc (_:xs) = lenAcc (acc + 1) xs
";

pub fn library() -> Arc<Program> {
    static P: OnceLock<Arc<Program>> = OnceLock::new();
    P.get_or_init(|| Arc::new(Program::load(LIBRARY).expect("library loads"))).clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
    List,
    /// Int -> Int
    Fun,
}

struct Gen {
    rng: ChaCha8Rng,
    next: u32,
    env: Vec<(Name, Ty)>,
}

fn v(s: &str) -> Expr {
    Expr::var(s)
}

impl Gen {
    fn fresh(&mut self) -> Name {
        self.next += 1;
        Name::new(&format!("v{}", self.next))
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        xs[self.rng.random_range(0..xs.len())]
    }

    fn var_of(&mut self, ty: Ty) -> Option<Expr> {
        let cands: Vec<Name> = self.env.iter().filter(|(_, t)| *t == ty).map(|(n, _)| n.clone()).collect();
        if cands.is_empty() {
            None
        } else {
            let i = self.rng.random_range(0..cands.len());
            Some(Expr::Var(cands[i].clone()))
        }
    }

    fn small(&mut self) -> Expr {
        Expr::int(self.rng.random_range(-2..6))
    }

    fn scoped<T>(&mut self, binds: &[(Name, Ty)], f: impl FnOnce(&mut Self) -> T) -> T {
        let mark = self.env.len();
        self.env.extend(binds.iter().cloned());
        let e = f(self);
        self.env.truncate(mark);
        e
    }

    fn leaf(&mut self, ty: Ty) -> Expr {
        if self.rng.random_bool(0.5) {
            if let Some(e) = self.var_of(ty) {
                return e;
            }
        }
        match ty {
            Ty::Int => self.small(),
            Ty::Bool => Expr::con(if self.rng.random_bool(0.5) { "True" } else { "False" }, vec![]),
            Ty::List => {
                let n = self.rng.random_range(0..4);
                (0..n).fold(Expr::con("[]", vec![]), |acc, _| {
                    let x = self.small();
                    Expr::con(":", vec![x, acc])
                })
            }
            Ty::Fun => match self.rng.random_range(0..3) {
                0 => v("negate"),
                1 => {
                    let k = self.small();
                    Expr::app(v("+"), k)
                }
                _ => {
                    let x = self.fresh();
                    Expr::lam(Matching::pat(Pattern::Var(x.clone()), Matching::ret(Expr::Var(x))))
                }
            },
        }
    }

    fn expr(&mut self, ty: Ty, depth: u32) -> Expr {
        if depth == 0 || self.rng.random_bool(0.2) {
            return self.leaf(ty);
        }
        let d = depth - 1;
        // Forms shared by every type.
        match self.rng.random_range(0..12) {
            0 => return self.let_form(ty, d),
            1 => return self.case_list(ty, d),
            2 => return self.if_form(ty, d),
            3 => return self.bang_form(ty, d),
            _ => {}
        }
        match ty {
            Ty::Int => match self.rng.random_range(0..11) {
                0..=2 => {
                    let op = self.pick(&["+", "-", "*"]);
                    let (a, b) = (self.expr(Ty::Int, d), self.expr(Ty::Int, d));
                    Expr::apps(v(op), [a, b])
                }
                3 => {
                    let (f, x) = (self.expr(Ty::Fun, d), self.expr(Ty::Int, d));
                    Expr::app(f, x)
                }
                4 => {
                    let n = Expr::int(self.rng.random_range(0..4));
                    Expr::app(v("count"), n)
                }
                5 => {
                    let g = self.pick(&["sum", "length"]);
                    let l = self.expr(Ty::List, d);
                    Expr::app(v(g), l)
                }
                6 => {
                    let (a, l) = (self.expr(Ty::Int, d), self.expr(Ty::List, d));
                    Expr::apps(v("firstOr"), [a, l])
                }
                7 => {
                    let l = self.expr(Ty::List, d);
                    Expr::app(v("pick"), l)
                }
                8 => {
                    let (a, b) = (self.expr(Ty::Int, d), self.expr(Ty::Int, d));
                    Expr::Prim(self.pick(&[PrimOp::Div, PrimOp::Mod]), vec![a, b])
                }
                9 => self.literal_alts(d),
                _ => {
                    if self.rng.random_bool(0.15) {
                        let x = self.expr(Ty::Int, d);
                        Expr::app(v("spin"), x)
                    } else {
                        let l = self.expr(Ty::List, d);
                        Expr::apps(v("lenAcc"), [Expr::int(0), l])
                    }
                }
            },
            Ty::Bool => {
                let op = self.pick(&["<=", "==", "<", "/="]);
                let (a, b) = (self.expr(Ty::Int, d), self.expr(Ty::Int, d));
                Expr::apps(v(op), [a, b])
            }
            Ty::List => match self.rng.random_range(0..5) {
                0 | 1 => {
                    let (x, xs) = (self.expr(Ty::Int, d), self.expr(Ty::List, d));
                    Expr::con(":", vec![x, xs])
                }
                2 => {
                    let (f, l) = (self.expr(Ty::Fun, d), self.expr(Ty::List, d));
                    Expr::apps(v("map"), [f, l])
                }
                3 => {
                    let n = Expr::int(self.rng.random_range(0..4));
                    Expr::app(v("build"), n)
                }
                _ => {
                    let (n, l) = (self.expr(Ty::Int, d), self.expr(Ty::List, d));
                    Expr::apps(v("take"), [n, l])
                }
            },
            Ty::Fun => match self.rng.random_range(0..3) {
                0 => {
                    let x = self.fresh();
                    let body = self.scoped(&[(x.clone(), Ty::Int)], |g| g.expr(Ty::Int, d));
                    Expr::lam(Matching::pat(Pattern::Var(x), Matching::ret(body)))
                }
                1 => {
                    let f = self.expr(Ty::Fun, d);
                    Expr::app(v("twice"), f)
                }
                _ => {
                    // A literal clause with a variable fallback.
                    let k: i64 = self.rng.random_range(0..3);
                    let a = self.expr(Ty::Int, d);
                    let x = self.fresh();
                    let b = self.scoped(&[(x.clone(), Ty::Int)], |g| g.expr(Ty::Int, d));
                    Expr::lam(Matching::alt(
                        Matching::pat(Pattern::Int(k.into()), Matching::ret(a)),
                        Matching::pat(Pattern::Var(x), Matching::ret(b)),
                    ))
                }
            },
        }
    }

    /// `let x = e1 in e2`, occasionally recursive.
    fn let_form(&mut self, ty: Ty, d: u32) -> Expr {
        let bty = self.pick(&[Ty::Int, Ty::List, Ty::Fun]);
        let x = self.fresh();
        let recursive = self.rng.random_bool(0.1);
        let rhs = if recursive {
            self.scoped(&[(x.clone(), bty)], |g| g.expr(bty, d))
        } else {
            self.expr(bty, d)
        };
        let body = self.scoped(&[(x.clone(), bty)], |g| g.expr(ty, d));
        Expr::let_in(Bindings(vec![(x, rhs)]), body)
    }

    /// `case l of [] -> a; (y:ys) -> b`, sometimes without the `[]` case.
    fn case_list(&mut self, ty: Ty, d: u32) -> Expr {
        let l = self.expr(Ty::List, d);
        let (y, ys) = (self.fresh(), self.fresh());
        let cons = self.scoped(&[(y.clone(), Ty::Int), (ys.clone(), Ty::List)], |g| g.expr(ty, d));
        let cons_alt = Matching::pat(Pattern::con(":", vec![Pattern::Var(y), Pattern::Var(ys)]), Matching::ret(cons));
        let mut alts = Vec::new();
        if self.rng.random_bool(0.85) {
            let nil = self.expr(ty, d);
            alts.push(Matching::pat(Pattern::con("[]", vec![]), Matching::ret(nil)));
        }
        alts.push(cons_alt);
        if self.rng.random_bool(0.5) {
            alts.reverse();
        }
        Expr::case_of(l, alts)
    }

    fn if_form(&mut self, ty: Ty, d: u32) -> Expr {
        let c = self.expr(Ty::Bool, d);
        let (t, f) = (self.expr(ty, d), self.expr(ty, d));
        Expr::case_of(
            c,
            vec![
                Matching::pat(Pattern::con("True", vec![]), Matching::ret(t)),
                Matching::pat(Pattern::con("False", vec![]), Matching::ret(f)),
            ],
        )
    }

    /// A strict binding followed by a `where` block and a guard.
    fn bang_form(&mut self, ty: Ty, d: u32) -> Expr {
        let bty = self.pick(&[Ty::Int, Ty::List]);
        let scrut = self.expr(bty, d);
        let (x, w) = (self.fresh(), self.fresh());
        let wrhs = self.scoped(&[(x.clone(), bty)], |g| g.expr(Ty::Int, d));
        let (guard, body, other) = self.scoped(&[(x.clone(), bty), (w.clone(), Ty::Int)], |g| {
            let guard = g.expr(Ty::Bool, d);
            let body = g.expr(ty, d);
            let other = g.expr(ty, d);
            (guard, body, other)
        });
        let guarded = Matching::alt(
            Matching::arg(guard, Matching::pat(Pattern::con("True", vec![]), Matching::ret(body))),
            Matching::ret(other),
        );
        let m = Matching::pat(Pattern::Bang(x), Matching::Where(Arc::new(guarded), Bindings(vec![(w, wrhs)])));
        Expr::lam(Matching::arg(scrut, m))
    }

    /// Integer literal patterns, possibly without a catch-all.
    fn literal_alts(&mut self, d: u32) -> Expr {
        let scrut = self.expr(Ty::Int, d);
        let mut alts = Vec::new();
        for k in 0..self.rng.random_range(1i64..3) {
            let a = self.expr(Ty::Int, d);
            alts.push(Matching::pat(Pattern::Int(k.into()), Matching::ret(a)));
        }
        if self.rng.random_bool(0.7) {
            let z = self.expr(Ty::Int, d);
            alts.push(Matching::pat(Pattern::Wild, Matching::ret(z)));
        }
        Expr::case_of(scrut, alts)
    }
}

/// A generated program: the library heap plus a root expression.
#[derive(Clone, Debug)]
pub struct Generated {
    pub heap: Heap,
    pub root: Name,
    /// Whether the result is evaluated completely.
    pub force: bool,
    pub source: Expr,
}

impl Generated {
    pub fn start(&self) -> Expr {
        if self.force {
            Expr::Prim(PrimOp::Force, vec![Expr::Var(self.root.clone())])
        } else {
            Expr::Var(self.root.clone())
        }
    }
}

/// Deterministically generates a well-typed program from `seed`.
pub fn generate(seed: u64, depth: u32) -> Generated {
    let p = library();
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), next: 0, env: Vec::new() };
    loop {
        let ty = g.pick(&[Ty::Int, Ty::Int, Ty::Bool, Ty::List, Ty::List]);
        let e = g.expr(ty, depth);
        if infer_expr(&p.data, &p.types, &e).is_err() {
            continue;
        }
        let mut supply = NameSupply::translation();
        let n = normalize(&e, &mut supply);
        let mut heap = p.heap();
        let root = Name::new("root#gen");
        heap.insert(root.clone(), n);
        let force = g.rng.random_bool(0.6);
        return Generated { heap, root, force, source: e };
    }
}

/// Result of running the machine with per-step checks.
#[derive(Debug)]
pub struct MachineRun {
    pub outcome: Outcome,
    pub rules: Vec<Rule>,
    /// Stack height before each step, plus the final height.
    pub heights: Vec<usize>,
    pub config: Config,
    /// Configurations where the number of applicable rules was not one.
    pub nondeterministic: usize,
    /// Steps that removed an update frame without the Update rule, or
    /// Update steps that did not remove exactly the top update frame.
    pub update_violations: usize,
}

fn updates(stack: &[Frame]) -> Vec<Name> {
    stack
        .iter()
        .filter_map(|f| match f {
            Frame::Update(l) => Some(l.clone()),
            _ => None,
        })
        .collect()
}

pub fn run_machine(heap: Heap, start: Expr, fuel: u64) -> MachineRun {
    let mut c = Config::new(heap, start);
    let mut rules = Vec::new();
    let mut heights = Vec::new();
    let mut nondeterministic = 0;
    let mut update_violations = 0;
    let outcome = loop {
        let applicable = applicable_rules(&c);
        let before = updates(&c.stack);
        heights.push(c.stack.len());
        if c.steps >= fuel {
            let mut probe = c.clone();
            break match probe.step() {
                StepOutcome::Stepped(_) => Outcome::OutOfFuel,
                StepOutcome::FinalWhnf => Outcome::Value,
                StepOutcome::StuckFail(l) => Outcome::MatchFailure(l),
                StepOutcome::Error(e) => Outcome::Error(e),
            };
        }
        match c.step() {
            StepOutcome::Stepped(r) => {
                if applicable != [r] {
                    nondeterministic += 1;
                }
                let after = updates(&c.stack);
                let ok = if r == Rule::Update {
                    after.len() + 1 == before.len() && before.starts_with(&after)
                } else {
                    after.starts_with(&before)
                };
                if !ok {
                    update_violations += 1;
                }
                rules.push(r);
            }
            StepOutcome::FinalWhnf => {
                if !applicable.is_empty() {
                    nondeterministic += 1;
                }
                break Outcome::Value;
            }
            StepOutcome::StuckFail(l) => {
                if !applicable.is_empty() {
                    nondeterministic += 1;
                }
                break Outcome::MatchFailure(l);
            }
            StepOutcome::Error(e) => break Outcome::Error(e),
        }
    };
    heights.push(c.stack.len());
    MachineRun { outcome, rules, heights, config: c, nondeterministic, update_violations }
}

/// How the two evaluators compared on one program.
#[derive(Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Both produced the same value and heap.
    Value,
    /// Both stopped the same way without a value.
    Stopped,
    Disagree(String),
}

pub fn compare(g: &Generated, fuel: u64) -> (Agreement, MachineRun) {
    let m = run_machine(g.heap.clone(), g.start(), fuel);
    let mut ev = Evaluator::new(g.heap.clone(), fuel);
    let (outcome, value) = ev.run(&g.start());
    if outcome != m.outcome {
        return (Agreement::Disagree(format!("outcomes {outcome:?} vs {:?}", m.outcome)), m);
    }
    if ev.cost != m.rules.len() as u64 {
        return (Agreement::Disagree(format!("cost {} vs {} steps", ev.cost, m.rules.len())), m);
    }
    if outcome != Outcome::Value {
        return (Agreement::Stopped, m);
    }
    let Control::Eval(w) = &m.config.control else {
        return (Agreement::Disagree("machine halted in a matching".into()), m);
    };
    if value.as_ref() != Some(w) {
        return (Agreement::Disagree(format!("values {value:?} vs {w:?}")), m);
    }
    if ev.heap != m.config.heap {
        return (Agreement::Disagree("heaps differ".into()), m);
    }
    (Agreement::Value, m)
}

/// Segments of a run that must be balanced: each `Var` up to its `Update`.
pub fn update_segments(m: &MachineRun) -> Vec<&[Rule]> {
    let mut out = Vec::new();
    for (i, r) in m.rules.iter().enumerate() {
        if *r != Rule::Var {
            continue;
        }
        let h = m.heights[i];
        for j in i + 1..m.rules.len() {
            if m.rules[j] == Rule::Update && m.heights[j + 1] == h {
                out.push(&m.rules[i..=j]);
                break;
            }
        }
    }
    out
}
