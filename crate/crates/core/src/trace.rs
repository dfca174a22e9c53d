//! Equational traces built from machine runs.
//!
//! Only two kinds of transitions produce a visible entry: returning from an
//! equation of the program, and reducing a primitive to a value. Everything
//! else (argument passing, pattern matching, updates) happens between
//! entries.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::RuntimeError;
use crate::machine::{Config, Control, Frame, Rule, StepOutcome};
use crate::prim;
use crate::program::{EntryPoint, Program};
use crate::render::{render_config, render_expr, render_location, Rendered};
use crate::syntax::{is_whnf, Matching, Name};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceOptions {
    /// Maximum number of machine transitions.
    pub fuel: u64,
    pub dots_per_level: usize,
    /// Evaluate the result completely rather than to weak head normal form.
    pub force: bool,
    /// Emit an entry for every transition, labelled by its rule.
    pub machine_steps: bool,
    pub max_entries: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { fuel: 100_000, dots_per_level: 4, force: true, machine_steps: false, max_entries: 10_000 }
    }
}

/// One displayed step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    /// The expression, preceded by dots for hidden context.
    pub rendered: String,
    pub justification: String,
    /// Number of enclosing matchings hidden from view.
    pub depth: usize,
    /// First and last machine step covered by the entry.
    pub span: [u64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStatus {
    Running,
    /// The result was fully computed.
    Done,
    /// No equation of a function applied to its arguments.
    MatchFailure(String),
    Failed(RuntimeError),
    OutOfFuel,
    EntryLimit,
}

impl TraceStatus {
    pub fn is_running(&self) -> bool {
        *self == TraceStatus::Running
    }

    /// Short machine-readable name.
    pub fn label(&self) -> &'static str {
        match self {
            TraceStatus::Running => "running",
            TraceStatus::Done => "done",
            TraceStatus::MatchFailure(_) | TraceStatus::Failed(_) => "failed",
            TraceStatus::OutOfFuel => "fuel-exhausted",
            TraceStatus::EntryLimit => "entry-limit",
        }
    }

    pub fn message(&self) -> Option<String> {
        match self {
            TraceStatus::MatchFailure(name) => Some(format!("pattern match failure in {name}")),
            TraceStatus::Failed(e) => Some(e.to_string()),
            TraceStatus::OutOfFuel => Some("evaluation ran out of fuel".into()),
            TraceStatus::EntryLimit => Some("too many trace entries".into()),
            TraceStatus::Running | TraceStatus::Done => None,
        }
    }
}

/// Steps a machine and collects trace entries.
pub struct Tracer {
    program: Arc<Program>,
    config: Config,
    root: Name,
    options: TraceOptions,
    entries: Vec<TraceEntry>,
    rules: Vec<Rule>,
    status: TraceStatus,
    /// Step count at the last emitted entry.
    last_step: u64,
}

/// What a step is about to do, as far as the trace is concerned.
enum Pending {
    Equation(String),
    Primitive(prim::PrimOp, Vec<String>),
    Nothing,
}

impl Tracer {
    pub fn new(program: Arc<Program>, entry: &EntryPoint, options: TraceOptions) -> Tracer {
        let config = Config::new(entry.heap.clone(), entry.start(options.force));
        let rendered = render_location(&program, &config.heap, &entry.root);
        let mut t = Tracer {
            program,
            config,
            root: entry.root.clone(),
            options,
            entries: Vec::new(),
            rules: Vec::new(),
            status: TraceStatus::Running,
            last_step: 0,
        };
        t.entries.push(TraceEntry { rendered, justification: "initial expression".into(), depth: 0, span: [0, 0] });
        t
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn status(&self) -> &TraceStatus {
        &self.status
    }

    /// Every transition taken so far.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn options(&self) -> &TraceOptions {
        &self.options
    }

    fn pending(&self) -> Pending {
        match (&self.config.control, self.config.stack.last()) {
            (Control::Match(args, m), Some(Frame::EndMatch(_))) if args.is_empty() => match &**m {
                Matching::Return(_, Some(a)) => Pending::Equation(a.text.to_string()),
                _ => Pending::Nothing,
            },
            (Control::Eval(w), Some(Frame::Prim(op, done, rest))) if rest.is_empty() && is_whnf(w) => {
                let heap = &self.config.heap;
                let mut operands: Vec<String> = done.iter().map(|v| render_expr(&self.program, heap, v)).collect();
                operands.push(render_expr(&self.program, heap, w));
                Pending::Primitive(*op, operands)
            }
            _ => Pending::Nothing,
        }
    }

    fn emit(&mut self, r: Rendered, justification: String) {
        let start = (self.last_step + 1).min(self.config.steps);
        self.entries.push(TraceEntry {
            rendered: r.with_dots(self.options.dots_per_level),
            justification,
            depth: r.depth,
            span: [start, self.config.steps],
        });
        self.last_step = self.config.steps;
        if self.entries.len() >= self.options.max_entries && self.status.is_running() {
            self.status = TraceStatus::EntryLimit;
        }
    }

    /// Performs one transition, returning whether an entry was emitted.
    fn advance(&mut self) -> bool {
        if !self.status.is_running() {
            return false;
        }
        if self.config.steps >= self.options.fuel && !self.config.is_final() {
            self.status = TraceStatus::OutOfFuel;
            return false;
        }
        let pending = if self.options.machine_steps { Pending::Nothing } else { self.pending() };
        match self.config.step() {
            StepOutcome::Stepped(rule) => {
                self.rules.push(rule);
                if self.options.machine_steps {
                    let r = render_config(&self.program, &self.config);
                    self.emit(r, rule.to_string());
                    return true;
                }
                match pending {
                    Pending::Equation(text) if rule == Rule::Return1B => {
                        let r = render_config(&self.program, &self.config);
                        self.emit(r, text);
                        true
                    }
                    Pending::Primitive(op, operands) if rule == Rule::PrimReduce => {
                        let Control::Eval(result) = &self.config.control else { return false };
                        if !is_whnf(result) {
                            return false;
                        }
                        let value = render_expr(&self.program, &self.config.heap, result);
                        let r = render_config(&self.program, &self.config);
                        self.emit(r, prim::justification(op, &operands, &value));
                        true
                    }
                    _ => false,
                }
            }
            StepOutcome::FinalWhnf => {
                let text = render_location(&self.program, &self.config.heap, &self.root);
                self.emit(Rendered { text, depth: 0 }, "final result".into());
                if self.status.is_running() {
                    self.status = TraceStatus::Done;
                }
                true
            }
            StepOutcome::StuckFail(label) => {
                self.status = TraceStatus::MatchFailure(crate::bigstep::label_name(label.as_ref()));
                false
            }
            StepOutcome::Error(e) => {
                self.status = TraceStatus::Failed(e);
                false
            }
        }
    }

    /// Runs until the next entry; `None` once the trace has ended.
    pub fn next_entry(&mut self) -> Option<&TraceEntry> {
        while self.status.is_running() {
            if self.advance() {
                return self.entries.last();
            }
        }
        None
    }

    /// Produces up to `n` further entries.
    pub fn step_entries(&mut self, n: usize) -> &[TraceEntry] {
        let before = self.entries.len();
        for _ in 0..n {
            if self.next_entry().is_none() {
                break;
            }
        }
        &self.entries[before..]
    }

    pub fn run_to_end(&mut self) -> &[TraceEntry] {
        while self.next_entry().is_some() {}
        &self.entries
    }

    /// Requests complete evaluation of the result, also after it has
    /// reached weak head normal form.
    pub fn force(&mut self) {
        if self.config.stack.iter().any(|f| matches!(f, Frame::Force(r) if *r == self.root)) {
            return;
        }
        let finished = self.status == TraceStatus::Done;
        if !(self.status.is_running() || finished) {
            return;
        }
        self.config.stack.insert(0, Frame::Force(self.root.clone()));
        if finished {
            self.status = TraceStatus::Running;
        }
        self.options.force = true;
    }

    /// The trace laid out as in a textbook.
    pub fn plain(&self) -> String {
        format_plain(&self.entries)
    }
}

/// Expression lines interleaved with `{ justification }` lines.
pub fn format_plain(entries: &[TraceEntry]) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        if i == 0 {
            let _ = writeln!(out, "  {}", e.rendered);
        } else {
            let _ = writeln!(out, "  {{ {} }}", e.justification);
            let _ = writeln!(out, "= {}", e.rendered);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const INSERT: &str = "insert x [] = [x]\ninsert x (y:ys) | x<=y = x:y:ys\n                | otherwise = y:insert x ys\n";

    fn trace(src: &str, expr: &str, options: TraceOptions) -> Tracer {
        let p = Arc::new(Program::load(src).unwrap());
        let ep = p.entry(expr).unwrap();
        let mut t = Tracer::new(p, &ep, options);
        t.run_to_end();
        t
    }

    #[test]
    fn insert_trace() {
        let t = trace(INSERT, "insert 3 [1,2,4]", TraceOptions::default());
        let lines: Vec<String> = t.entries().iter().map(|e| format!("{} | {}", e.rendered, e.justification)).collect();
        assert_eq!(
            lines,
            vec![
                "insert 3 [1, 2, 4] | initial expression",
                ".... False | 3 <= 1 = False",
                "1 : (insert 3 [2, 4]) | insert x (y:ys) | otherwise = y:insert x ys",
                ".... False | 3 <= 2 = False",
                "1 : (2 : (insert 3 [4])) | insert x (y:ys) | otherwise = y:insert x ys",
                ".... True | 3 <= 4 = True",
                "1 : (2 : (3 : (4 : []))) | insert x (y:ys) | x<=y = x:y:ys",
                "[1, 2, 3, 4] | final result",
            ]
        );
        assert_eq!(*t.status(), TraceStatus::Done);
    }

    #[test]
    fn spans_are_contiguous() {
        let t = trace(INSERT, "insert 3 [1,2,4]", TraceOptions::default());
        let es = t.entries();
        for w in es.windows(2).skip(1) {
            assert_eq!(w[1].span[0], w[0].span[1] + 1);
        }
        assert_eq!(es.last().unwrap().span[1], t.rules().len() as u64);
    }

    #[test]
    fn match_failure_names_function() {
        let t = trace("", "head []", TraceOptions::default());
        assert_eq!(t.status().message().unwrap(), "pattern match failure in head");
    }

    #[test]
    fn fuel_runs_out() {
        let t = trace("loop n = loop (n + 1)\n", "loop 0", TraceOptions { fuel: 50, ..TraceOptions::default() });
        assert_eq!(*t.status(), TraceStatus::OutOfFuel);
    }

    #[test]
    fn force_after_whnf_completes_structure() {
        let p = Arc::new(Program::load(INSERT).unwrap());
        let ep = p.entry("insert 3 [1,2,4]").unwrap();
        let mut lazy = Tracer::new(p.clone(), &ep, TraceOptions { force: false, ..TraceOptions::default() });
        lazy.run_to_end();
        assert_eq!(lazy.entries().last().unwrap().rendered, "1 : (insert 3 [2, 4])");
        lazy.force();
        lazy.run_to_end();
        assert_eq!(lazy.entries().last().unwrap().rendered, "[1, 2, 3, 4]");
    }
}
