//! Recursive big-step evaluator.
//!
//! Evaluation charges one unit of fuel at each point where the abstract
//! machine would take a transition, so both evaluators run out of fuel at
//! the same moment and allocate heap locations in the same order.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::RuntimeError;
use crate::machine::{first_unevaluated, scrutinize, Args, Heap, Outcome};
use crate::prim::{self, PrimOp};
use crate::syntax::{arity, is_whnf, rename1, rename_expr, rename_matching, Annotation, Expr, Matching, Name, NameSupply, Pattern, Renaming};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchResult {
    Return(Expr),
    Fail,
}

#[derive(Debug)]
enum Abort {
    Failure(Option<Arc<Annotation>>),
    Error(RuntimeError),
    OutOfFuel,
}

impl From<RuntimeError> for Abort {
    fn from(e: RuntimeError) -> Self {
        Abort::Error(e)
    }
}

type Eval<T> = Result<T, Abort>;

pub struct Evaluator {
    pub heap: Heap,
    pub supply: NameSupply,
    /// Transitions the machine would have taken so far.
    pub cost: u64,
    fuel: u64,
    /// Locations whose evaluation is in progress.
    pending: HashSet<Name>,
    depth: usize,
    max_depth: usize,
}

/// Default nesting limit; deep programs need a correspondingly large stack.
pub const DEFAULT_MAX_DEPTH: usize = 200_000;

impl Evaluator {
    pub fn new(heap: Heap, fuel: u64) -> Self {
        Evaluator {
            heap,
            supply: NameSupply::runtime(),
            cost: 0,
            fuel,
            pending: HashSet::new(),
            depth: 0,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    pub fn with_max_depth(mut self, d: usize) -> Self {
        self.max_depth = d;
        self
    }

    /// Evaluates `e` to weak head normal form.
    pub fn run(&mut self, e: &Expr) -> (Outcome, Option<Expr>) {
        match self.eval(e) {
            Ok(v) => (Outcome::Value, Some(v)),
            Err(Abort::Failure(l)) => (Outcome::MatchFailure(l), None),
            Err(Abort::Error(e)) => (Outcome::Error(e), None),
            Err(Abort::OutOfFuel) => (Outcome::OutOfFuel, None),
        }
    }

    fn charge(&mut self) -> Eval<()> {
        if self.cost >= self.fuel {
            return Err(Abort::OutOfFuel);
        }
        self.cost += 1;
        Ok(())
    }

    fn enter(&mut self) -> Eval<()> {
        self.depth += 1;
        if self.depth > self.max_depth {
            return Err(RuntimeError::TooDeep.into());
        }
        Ok(())
    }

    fn eval(&mut self, e: &Expr) -> Eval<Expr> {
        self.enter()?;
        let r = self.eval_inner(e);
        self.depth -= 1;
        r
    }

    fn eval_inner(&mut self, e: &Expr) -> Eval<Expr> {
        if is_whnf(e) {
            return Ok(e.clone());
        }
        match e {
            Expr::Var(l) => {
                if !self.heap.contains(l) {
                    return Err(if self.pending.contains(l) {
                        RuntimeError::BlackHole(l.clone())
                    } else {
                        RuntimeError::Unbound(l.clone())
                    }
                    .into());
                }
                self.charge()?;
                let content = self.heap.remove(l).expect("checked above");
                self.pending.insert(l.clone());
                let w = self.eval(&content)?;
                self.pending.remove(l);
                self.charge()?;
                self.heap.insert(l.clone(), w.clone());
                Ok(w)
            }
            Expr::App(f, x) => {
                let Expr::Var(y) = &**x else {
                    return Err(stuck("application to a non-variable argument"));
                };
                self.charge()?;
                match self.eval(f)? {
                    Expr::Lam(m) => {
                        self.charge()?;
                        self.eval(&Expr::lam(Matching::Arg(Expr::Var(y.clone()), m)))
                    }
                    _ => Err(stuck("application of a non-function")),
                }
            }
            Expr::Lam(m) => {
                if arity(m) != Some(0) {
                    return Err(stuck("alternatives with different arities"));
                }
                self.charge()?;
                match self.eval_match(Vec::new(), m)? {
                    MatchResult::Return(body) => {
                        self.charge()?;
                        self.eval(&body)
                    }
                    MatchResult::Fail => Err(Abort::Failure(m.label().cloned())),
                }
            }
            Expr::Prim(PrimOp::Force, args) => {
                let Some(Expr::Var(root)) = args.first() else {
                    return Err(stuck("force of a non-variable"));
                };
                self.charge()?;
                self.eval(&Expr::Var(root.clone()))?;
                while let Some(l) = first_unevaluated(&self.heap, root) {
                    self.charge()?;
                    self.eval(&Expr::Var(l))?;
                }
                let v = self.heap.get(root).cloned().ok_or_else(|| stuck("forced location vanished"))?;
                self.charge()?;
                self.eval(&v)
            }
            Expr::Prim(op, args) => {
                let mut vals = Vec::with_capacity(args.len());
                if args.is_empty() || !args.iter().all(|a| matches!(a, Expr::Var(_))) {
                    return Err(stuck("primitive operand is not a variable"));
                }
                for a in args {
                    self.charge()?;
                    vals.push(self.eval(a)?);
                }
                let r = prim::reduce(*op, &vals)?;
                self.charge()?;
                self.eval(&r)
            }
            Expr::Con(..) | Expr::Int(_) | Expr::Char(_) => unreachable!("values handled above"),
        }
    }

    pub fn eval_match_public(&mut self, args: Args, m: &Arc<Matching>) -> Result<MatchResult, RuntimeError> {
        match self.eval_match(args, m) {
            Ok(r) => Ok(r),
            Err(Abort::Error(e)) => Err(e),
            Err(Abort::Failure(l)) => Err(RuntimeError::MatchFailure(label_name(l.as_ref()))),
            Err(Abort::OutOfFuel) => Err(RuntimeError::FuelExhausted(self.cost)),
        }
    }

    fn eval_match(&mut self, args: Args, m: &Arc<Matching>) -> Eval<MatchResult> {
        self.enter()?;
        let r = self.eval_match_inner(args, m);
        self.depth -= 1;
        r
    }

    fn eval_match_inner(&mut self, mut args: Args, m: &Arc<Matching>) -> Eval<MatchResult> {
        match &**m {
            Matching::Return(e, _) => {
                if args.is_empty() {
                    return Ok(MatchResult::Return(e.clone()));
                }
                self.charge()?;
                let applied = args.iter().rev().fold(e.clone(), |acc, y| Expr::app(acc, Expr::Var(y.clone())));
                Ok(MatchResult::Return(applied))
            }
            Matching::Fail => {
                if !args.is_empty() {
                    self.charge()?;
                }
                Ok(MatchResult::Fail)
            }
            Matching::Arg(Expr::Var(y), body) => {
                self.charge()?;
                args.push(y.clone());
                self.eval_match(args, body)
            }
            Matching::Arg(..) => Err(stuck("argument is not a variable")),
            Matching::Pat(p, body) => {
                let Some(y) = args.pop() else {
                    return Err(stuck("pattern without argument"));
                };
                match p {
                    Pattern::Var(x) => {
                        self.charge()?;
                        self.eval_match(args, &rename1(body, x, &y))
                    }
                    Pattern::Wild => {
                        self.charge()?;
                        self.eval_match(args, body)
                    }
                    Pattern::Bang(x) => {
                        self.charge()?;
                        self.eval(&Expr::Var(y.clone()))?;
                        self.charge()?;
                        self.eval_match(args, &rename1(body, x, &y))
                    }
                    Pattern::Con(..) | Pattern::Int(_) | Pattern::Char(_) => {
                        self.charge()?;
                        let w = self.eval(&Expr::Var(y))?;
                        match scrutinize(p, &w, body) {
                            Some(Some(next)) => {
                                self.charge()?;
                                self.eval_match(args, &next)
                            }
                            Some(None) => {
                                self.charge()?;
                                Ok(MatchResult::Fail)
                            }
                            None => Err(stuck("pattern does not fit the value")),
                        }
                    }
                }
            }
            Matching::Alt(a, b) => {
                self.charge()?;
                match self.eval_match(args.clone(), a)? {
                    MatchResult::Return(e) => {
                        self.charge()?;
                        Ok(MatchResult::Return(e))
                    }
                    MatchResult::Fail => {
                        self.charge()?;
                        self.eval_match(args, b)
                    }
                }
            }
            Matching::Where(body, binds) => {
                self.charge()?;
                let mut r = Renaming::new();
                let fresh: Vec<Name> = binds.names().map(|x| self.supply.fresh(x.as_str())).collect();
                for (x, l) in binds.names().zip(&fresh) {
                    r.insert(x.clone(), l.clone());
                }
                for ((_, e), l) in binds.0.iter().zip(fresh) {
                    self.heap.insert(l, rename_expr(e, &r));
                }
                self.eval_match(args, &rename_matching(body, &r))
            }
        }
    }
}

fn stuck(msg: &str) -> Abort {
    Abort::Error(RuntimeError::Stuck(msg.into()))
}

pub fn label_name(l: Option<&Arc<Annotation>>) -> String {
    l.map(|a| a.name.base().to_string()).unwrap_or_else(|| "expression".into())
}
