//! Small-step abstract machine.
//!
//! A configuration is a heap, a control (either an expression under
//! evaluation or a matching applied to pending arguments) and a stack of
//! continuation frames. Each transition is labelled with the [`Rule`] that
//! produced it.

pub mod grammar;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::RuntimeError;
use crate::prim::{self, PrimOp};
use crate::syntax::{arity, is_whnf, rename1, Annotation, Expr, Matching, Name, NameSupply, Pattern, Renaming};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Heap(HashMap<Name, Expr>);

impl Heap {
    pub fn new() -> Self {
        Heap::default()
    }

    pub fn get(&self, n: &Name) -> Option<&Expr> {
        self.0.get(n)
    }

    pub fn insert(&mut self, n: Name, e: Expr) {
        self.0.insert(n, e);
    }

    pub fn remove(&mut self, n: &Name) -> Option<Expr> {
        self.0.remove(n)
    }

    pub fn contains(&self, n: &Name) -> bool {
        self.0.contains_key(n)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Expr)> {
        self.0.iter()
    }
}

/// Pending arguments of a matching. The head of the argument list is the
/// last element.
pub type Args = Vec<Name>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Control {
    Eval(Expr),
    Match(Args, Arc<Matching>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    /// Argument waiting for the function being evaluated.
    Arg(Name),
    /// Location to overwrite with the value being computed.
    Update(Name),
    /// Boundary of a saturated matching, with the equation it belongs to.
    EndMatch(Option<Arc<Annotation>>),
    /// Second alternative to try if the first fails.
    Alt(Args, Arc<Matching>),
    /// Constructor or literal pattern waiting for its scrutinee.
    Pat(Args, Pattern, Arc<Matching>),
    /// Matching to resume once a strict argument is evaluated.
    Bang(Args, Arc<Matching>),
    /// Primitive with evaluated operands so far and remaining ones (the next
    /// operand last).
    Prim(PrimOp, Vec<Expr>, Vec<Name>),
    /// Deep evaluation of the structure rooted at a location.
    Force(Name),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    App1,
    App2,
    Sat,
    Var,
    Update,
    Return1A,
    Return1B,
    Return1C,
    Return2,
    Fail,
    Bind,
    Arg,
    Cons1,
    Cons2,
    Alt1,
    Alt2,
    Where,
    Bang1,
    Bang2,
    PrimStart,
    PrimNext,
    PrimReduce,
    ForceEnter,
    ForceStep,
    ForceDone,
}

impl Rule {
    pub const ALL: [Rule; 25] = [
        Rule::App1,
        Rule::App2,
        Rule::Sat,
        Rule::Var,
        Rule::Update,
        Rule::Return1A,
        Rule::Return1B,
        Rule::Return1C,
        Rule::Return2,
        Rule::Fail,
        Rule::Bind,
        Rule::Arg,
        Rule::Cons1,
        Rule::Cons2,
        Rule::Alt1,
        Rule::Alt2,
        Rule::Where,
        Rule::Bang1,
        Rule::Bang2,
        Rule::PrimStart,
        Rule::PrimNext,
        Rule::PrimReduce,
        Rule::ForceEnter,
        Rule::ForceStep,
        Rule::ForceDone,
    ];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped(Rule),
    /// A value with an empty stack: evaluation is complete.
    FinalWhnf,
    /// Every alternative of a saturated matching failed.
    StuckFail(Option<Arc<Annotation>>),
    Error(RuntimeError),
}

#[derive(Clone, Debug)]
pub struct Config {
    pub heap: Heap,
    pub control: Control,
    pub stack: Vec<Frame>,
    pub supply: NameSupply,
    pub steps: u64,
}

impl Config {
    pub fn new(heap: Heap, expr: Expr) -> Self {
        Config { heap, control: Control::Eval(expr), stack: Vec::new(), supply: NameSupply::runtime(), steps: 0 }
    }

    /// Locations currently being evaluated: those with an update frame.
    pub fn upd(&self) -> HashSet<Name> {
        upd(&self.stack)
    }

    pub fn is_final(&self) -> bool {
        self.stack.is_empty() && matches!(&self.control, Control::Eval(e) if is_whnf(e))
    }

    /// Performs one transition in place.
    pub fn step(&mut self) -> StepOutcome {
        let control = std::mem::replace(&mut self.control, Control::Eval(Expr::Int(0.into())));
        let result = match control {
            Control::Eval(e) => self.step_eval(e),
            Control::Match(args, m) => self.step_match(args, m),
        };
        match result {
            Ok(Transition::Step(rule, control)) => {
                self.control = control;
                self.steps += 1;
                StepOutcome::Stepped(rule)
            }
            Ok(Transition::Final(control)) => {
                self.control = control;
                StepOutcome::FinalWhnf
            }
            Ok(Transition::StuckFail(control, label)) => {
                self.control = control;
                StepOutcome::StuckFail(label)
            }
            Err((control, e)) => {
                self.control = control;
                StepOutcome::Error(e)
            }
        }
    }

    fn step_eval(&mut self, e: Expr) -> Result<Transition, (Control, RuntimeError)> {
        let stuck = |e: Expr, msg: String| Err((Control::Eval(e), RuntimeError::Stuck(msg)));
        match e {
            Expr::Var(l) => match self.heap.remove(&l) {
                Some(content) => {
                    self.stack.push(Frame::Update(l));
                    Ok(Transition::Step(Rule::Var, Control::Eval(content)))
                }
                None => {
                    let err = if upd(&self.stack).contains(&l) {
                        RuntimeError::BlackHole(l.clone())
                    } else {
                        RuntimeError::Unbound(l.clone())
                    };
                    Err((Control::Eval(Expr::Var(l)), err))
                }
            },
            Expr::App(f, x) => match &*x {
                Expr::Var(y) => {
                    self.stack.push(Frame::Arg(y.clone()));
                    Ok(Transition::Step(Rule::App1, Control::Eval((*f).clone())))
                }
                _ => stuck(Expr::App(f, x), "application to a non-variable argument".into()),
            },
            Expr::Prim(PrimOp::Force, args) => match args.first() {
                Some(Expr::Var(y)) => {
                    let y = y.clone();
                    self.stack.push(Frame::Force(y.clone()));
                    Ok(Transition::Step(Rule::ForceEnter, Control::Eval(Expr::Var(y))))
                }
                _ => stuck(Expr::Prim(PrimOp::Force, args), "force of a non-variable".into()),
            },
            Expr::Prim(op, args) => {
                let mut pending = Vec::with_capacity(args.len());
                for a in args.iter().rev() {
                    match a {
                        Expr::Var(y) => pending.push(y.clone()),
                        _ => return stuck(Expr::Prim(op, args), "primitive operand is not a variable".into()),
                    }
                }
                match pending.pop() {
                    Some(first) => {
                        self.stack.push(Frame::Prim(op, Vec::new(), pending));
                        Ok(Transition::Step(Rule::PrimStart, Control::Eval(Expr::Var(first))))
                    }
                    None => stuck(Expr::Prim(op, args), "primitive without operands".into()),
                }
            }
            Expr::Lam(m) => match arity(&m) {
                None => stuck(Expr::Lam(m), "alternatives with different arities".into()),
                Some(0) => {
                    self.stack.push(Frame::EndMatch(m.label().cloned()));
                    Ok(Transition::Step(Rule::Sat, Control::Match(Vec::new(), m)))
                }
                Some(_) => self.step_value(Expr::Lam(m)),
            },
            w => self.step_value(w),
        }
    }

    /// The control is a value; the top frame decides what happens next.
    fn step_value(&mut self, w: Expr) -> Result<Transition, (Control, RuntimeError)> {
        let Some(top) = self.stack.pop() else {
            return Ok(Transition::Final(Control::Eval(w)));
        };
        let stuck = |this: &mut Self, top: Frame, w: Expr, msg: &str| {
            this.stack.push(top);
            Err((Control::Eval(w), RuntimeError::Stuck(msg.into())))
        };
        match top {
            Frame::Arg(y) => match w {
                Expr::Lam(m) => {
                    let applied = Matching::Arg(Expr::Var(y), m);
                    Ok(Transition::Step(Rule::App2, Control::Eval(Expr::lam(applied))))
                }
                w => stuck(self, Frame::Arg(y), w, "application of a non-function"),
            },
            Frame::Update(l) => {
                self.heap.insert(l, w.clone());
                Ok(Transition::Step(Rule::Update, Control::Eval(w)))
            }
            Frame::Pat(args, p, m) => match scrutinize(&p, &w, &m) {
                Some(Some(m2)) => Ok(Transition::Step(Rule::Cons2, Control::Match(args, m2))),
                Some(None) => Ok(Transition::Step(Rule::Fail, Control::Match(Vec::new(), Arc::new(Matching::Fail)))),
                None => stuck(self, Frame::Pat(args, p, m), w, "pattern does not fit the value"),
            },
            Frame::Bang(args, m) => Ok(Transition::Step(Rule::Bang2, Control::Match(args, m))),
            Frame::Prim(op, mut done, mut pending) => {
                done.push(w);
                match pending.pop() {
                    Some(next) => {
                        self.stack.push(Frame::Prim(op, done, pending));
                        Ok(Transition::Step(Rule::PrimNext, Control::Eval(Expr::Var(next))))
                    }
                    None => match prim::reduce(op, &done) {
                        Ok(r) => Ok(Transition::Step(Rule::PrimReduce, Control::Eval(r))),
                        Err(e) => {
                            let w = done.pop().expect("operand");
                            pending.clear();
                            self.stack.push(Frame::Prim(op, done, pending));
                            Err((Control::Eval(w), e))
                        }
                    },
                }
            }
            Frame::Force(root) => match first_unevaluated(&self.heap, &root) {
                Some(l) => {
                    self.stack.push(Frame::Force(root));
                    Ok(Transition::Step(Rule::ForceStep, Control::Eval(Expr::Var(l))))
                }
                None => match self.heap.get(&root) {
                    Some(v) => Ok(Transition::Step(Rule::ForceDone, Control::Eval(v.clone()))),
                    None => stuck(self, Frame::Force(root), w, "forced location vanished"),
                },
            },
            top @ (Frame::EndMatch(_) | Frame::Alt(..)) => stuck(self, top, w, "value returned into a matching"),
        }
    }

    fn step_match(&mut self, mut args: Args, m: Arc<Matching>) -> Result<Transition, (Control, RuntimeError)> {
        let step = |rule, args, m| Ok(Transition::Step(rule, Control::Match(args, m)));
        match &*m {
            Matching::Return(e, a) => {
                if !args.is_empty() {
                    let applied = args.iter().rev().fold(e.clone(), |acc, y| Expr::app(acc, Expr::Var(y.clone())));
                    return step(Rule::Return1A, Vec::new(), Arc::new(Matching::Return(applied, a.clone())));
                }
                match self.stack.last() {
                    Some(Frame::EndMatch(_)) => {
                        self.stack.pop();
                        Ok(Transition::Step(Rule::Return1B, Control::Eval(e.clone())))
                    }
                    Some(Frame::Alt(..)) => {
                        self.stack.pop();
                        step(Rule::Return2, Vec::new(), m)
                    }
                    _ => Err((Control::Match(args, m), RuntimeError::Stuck("return outside a matching".into()))),
                }
            }
            Matching::Fail => {
                if !args.is_empty() {
                    return step(Rule::Return1C, Vec::new(), m);
                }
                match self.stack.last() {
                    Some(Frame::Alt(..)) => {
                        let Some(Frame::Alt(args2, m2)) = self.stack.pop() else { unreachable!() };
                        step(Rule::Alt2, args2, m2)
                    }
                    Some(Frame::EndMatch(label)) => {
                        let label = label.clone();
                        Ok(Transition::StuckFail(Control::Match(args, m), label))
                    }
                    _ => Err((Control::Match(args, m), RuntimeError::Stuck("failure outside a matching".into()))),
                }
            }
            Matching::Arg(Expr::Var(y), m2) => {
                args.push(y.clone());
                step(Rule::Arg, args, m2.clone())
            }
            Matching::Arg(..) => Err((Control::Match(args, m), RuntimeError::Stuck("argument is not a variable".into()))),
            Matching::Pat(p, m2) => {
                let Some(y) = args.pop() else {
                    return Err((Control::Match(args, m), RuntimeError::Stuck("pattern without argument".into())));
                };
                match p {
                    Pattern::Var(x) => step(Rule::Bind, args, rename1(m2, x, &y)),
                    Pattern::Wild => step(Rule::Bind, args, m2.clone()),
                    Pattern::Bang(x) => {
                        self.stack.push(Frame::Bang(args, rename1(m2, x, &y)));
                        Ok(Transition::Step(Rule::Bang1, Control::Eval(Expr::Var(y))))
                    }
                    Pattern::Con(..) | Pattern::Int(_) | Pattern::Char(_) => {
                        self.stack.push(Frame::Pat(args, p.clone(), m2.clone()));
                        Ok(Transition::Step(Rule::Cons1, Control::Eval(Expr::Var(y))))
                    }
                }
            }
            Matching::Alt(a, b) => {
                self.stack.push(Frame::Alt(args.clone(), b.clone()));
                step(Rule::Alt1, args, a.clone())
            }
            Matching::Where(body, binds) => {
                let mut r = Renaming::new();
                let fresh: Vec<Name> = binds.names().map(|x| self.supply.fresh(x.as_str())).collect();
                for (x, l) in binds.names().zip(&fresh) {
                    r.insert(x.clone(), l.clone());
                }
                for ((_, e), l) in binds.0.iter().zip(fresh) {
                    self.heap.insert(l, crate::syntax::rename_expr(e, &r));
                }
                step(Rule::Where, args, crate::syntax::rename_matching(body, &r))
            }
        }
    }
}

enum Transition {
    Step(Rule, Control),
    Final(Control),
    StuckFail(Control, Option<Arc<Annotation>>),
}

pub fn upd(stack: &[Frame]) -> HashSet<Name> {
    stack
        .iter()
        .filter_map(|f| match f {
            Frame::Update(l) => Some(l.clone()),
            _ => None,
        })
        .collect()
}

/// Matches a constructor or literal pattern against a value.
///
/// `Some(Some(m))` on success, with the fields to be matched against the
/// sub-patterns prepended to `m`; `Some(None)` on mismatch; `None` when the
/// value cannot be scrutinized by the pattern at all.
pub fn scrutinize(p: &Pattern, w: &Expr, m: &Arc<Matching>) -> Option<Option<Arc<Matching>>> {
    match (p, w) {
        (Pattern::Con(c, ps), Expr::Con(d, ys)) => {
            if c != d {
                return Some(None);
            }
            if ps.len() != ys.len() {
                return None;
            }
            let mut acc = m.clone();
            for (y, p) in ys.iter().zip(ps).rev() {
                acc = Arc::new(Matching::Arg(y.clone(), Arc::new(Matching::Pat(p.clone(), acc))));
            }
            Some(Some(acc))
        }
        (Pattern::Int(k), Expr::Int(n)) => Some((k == n).then(|| m.clone())),
        (Pattern::Char(k), Expr::Char(n)) => Some((k == n).then(|| m.clone())),
        _ => None,
    }
}

/// Leftmost-outermost location below `root` whose content is not yet a
/// value, following constructor fields.
pub fn first_unevaluated(heap: &Heap, root: &Name) -> Option<Name> {
    let mut seen = HashSet::new();
    let mut todo = vec![root.clone()];
    while let Some(l) = todo.pop() {
        if !seen.insert(l.clone()) {
            continue;
        }
        let Some(e) = heap.get(&l) else { continue };
        if !is_whnf(e) {
            return Some(l);
        }
        if let Expr::Con(_, xs) = e {
            for x in xs.iter().rev() {
                if let Expr::Var(y) = x {
                    todo.push(y.clone());
                }
            }
        }
    }
    None
}

/// Final state of a machine run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Value,
    MatchFailure(Option<Arc<Annotation>>),
    Error(RuntimeError),
    OutOfFuel,
}

/// Runs until the machine halts or `fuel` transitions have been taken.
pub fn run(config: &mut Config, fuel: u64) -> (Outcome, Vec<Rule>) {
    let mut rules = Vec::new();
    loop {
        if config.steps >= fuel {
            // Halting needs no fuel; only a further transition does.
            let mut probe = config.clone();
            return match probe.step() {
                StepOutcome::Stepped(_) => (Outcome::OutOfFuel, rules),
                StepOutcome::FinalWhnf => (Outcome::Value, rules),
                StepOutcome::StuckFail(l) => (Outcome::MatchFailure(l), rules),
                StepOutcome::Error(e) => (Outcome::Error(e), rules),
            };
        }
        match config.step() {
            StepOutcome::Stepped(r) => rules.push(r),
            StepOutcome::FinalWhnf => return (Outcome::Value, rules),
            StepOutcome::StuckFail(l) => return (Outcome::MatchFailure(l), rules),
            StepOutcome::Error(e) => return (Outcome::Error(e), rules),
        }
    }
}

/// Rules whose side conditions hold in `c`, judged from the shape of the
/// configuration alone. The machine is deterministic when this has at most
/// one element.
pub fn applicable_rules(c: &Config) -> Vec<Rule> {
    let top = c.stack.last();
    let mut out = Vec::new();
    let mut add = |cond: bool, r: Rule| {
        if cond {
            out.push(r)
        }
    };
    match &c.control {
        Control::Eval(e) => {
            let value = is_whnf(e);
            let lam_arity = match e {
                Expr::Lam(m) => arity(m),
                _ => None,
            };
            add(matches!(e, Expr::App(_, x) if matches!(**x, Expr::Var(_))), Rule::App1);
            add(value && lam_arity.is_some() && matches!(top, Some(Frame::Arg(_))), Rule::App2);
            add(lam_arity == Some(0), Rule::Sat);
            add(matches!(e, Expr::Var(l) if c.heap.contains(l)), Rule::Var);
            add(value && matches!(top, Some(Frame::Update(_))), Rule::Update);
            let con_ok = |p: &Pattern| match (p, e) {
                (Pattern::Con(c1, ps), Expr::Con(c2, ys)) => c1 == c2 && ps.len() == ys.len(),
                (Pattern::Int(a), Expr::Int(b)) => a == b,
                (Pattern::Char(a), Expr::Char(b)) => a == b,
                _ => false,
            };
            let con_bad = |p: &Pattern| match (p, e) {
                (Pattern::Con(c1, _), Expr::Con(c2, _)) => c1 != c2,
                (Pattern::Int(a), Expr::Int(b)) => a != b,
                (Pattern::Char(a), Expr::Char(b)) => a != b,
                _ => false,
            };
            add(matches!(top, Some(Frame::Pat(_, p, _)) if con_ok(p)), Rule::Cons2);
            add(matches!(top, Some(Frame::Pat(_, p, _)) if con_bad(p)), Rule::Fail);
            add(value && matches!(top, Some(Frame::Bang(..))), Rule::Bang2);
            let prim = matches!(e, Expr::Prim(op, xs) if *op != PrimOp::Force && !xs.is_empty());
            add(prim, Rule::PrimStart);
            add(value && matches!(top, Some(Frame::Prim(_, _, p)) if !p.is_empty()), Rule::PrimNext);
            add(value && matches!(top, Some(Frame::Prim(_, _, p)) if p.is_empty()), Rule::PrimReduce);
            add(matches!(e, Expr::Prim(PrimOp::Force, _)), Rule::ForceEnter);
            let pending = |r: &Name| first_unevaluated(&c.heap, r).is_some();
            add(value && matches!(top, Some(Frame::Force(r)) if pending(r)), Rule::ForceStep);
            add(value && matches!(top, Some(Frame::Force(r)) if !pending(r)), Rule::ForceDone);
        }
        Control::Match(args, m) => {
            let empty = args.is_empty();
            add(!empty && matches!(**m, Matching::Return(..)), Rule::Return1A);
            add(empty && matches!(**m, Matching::Return(..)) && matches!(top, Some(Frame::EndMatch(_))), Rule::Return1B);
            add(!empty && matches!(**m, Matching::Fail), Rule::Return1C);
            add(empty && matches!(**m, Matching::Return(..)) && matches!(top, Some(Frame::Alt(..))), Rule::Return2);
            add(empty && matches!(**m, Matching::Fail) && matches!(top, Some(Frame::Alt(..))), Rule::Alt2);
            let pat = |f: fn(&Pattern) -> bool| !empty && matches!(&**m, Matching::Pat(p, _) if f(p));
            add(pat(|p| matches!(p, Pattern::Var(_) | Pattern::Wild)), Rule::Bind);
            add(pat(|p| matches!(p, Pattern::Bang(_))), Rule::Bang1);
            add(pat(|p| matches!(p, Pattern::Con(..) | Pattern::Int(_) | Pattern::Char(_))), Rule::Cons1);
            add(matches!(&**m, Matching::Arg(Expr::Var(_), _)), Rule::Arg);
            add(matches!(**m, Matching::Alt(..)), Rule::Alt1);
            add(matches!(**m, Matching::Where(..)), Rule::Where);
        }
    }
    out
}
