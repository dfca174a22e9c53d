//! Printing configurations as source-like expressions.
//!
//! The expression under evaluation is placed back into its context by
//! walking the stack from the top: pending arguments, updates and partially
//! evaluated primitives are folded in, and the walk stops at the first frame
//! belonging to a matching. Frames below that point are summarized as a
//! nesting depth.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::machine::{Config, Control, Frame, Heap};
use crate::prim::PrimOp;
use crate::program::Program;
use crate::syntax::{Expr, Matching, Name, Pattern};

/// Printable expression tree.
#[derive(Clone, Debug, PartialEq)]
enum Doc {
    Atom(String),
    /// Negative literal; needs parentheses as an operand.
    Neg(String),
    /// Operator name such as `+` or `:`.
    Op(String),
    App(Box<Doc>, Vec<Doc>),
    List(Vec<Doc>),
    Tuple(Vec<Doc>),
    /// Right section `(op e)`.
    Section(String, Box<Doc>),
    /// Already laid out, not atomic.
    Text(String),
}

impl Doc {
    fn apply(self, args: Vec<Doc>) -> Doc {
        if args.is_empty() {
            return self;
        }
        match self {
            Doc::App(h, mut xs) => {
                xs.extend(args);
                Doc::App(h, xs)
            }
            h => Doc::App(Box::new(h), args),
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            Doc::Atom(_) | Doc::Op(_) | Doc::List(_) | Doc::Tuple(_) | Doc::Section(..) => true,
            Doc::App(h, xs) => xs.is_empty() && h.is_atomic(),
            Doc::Neg(_) | Doc::Text(_) => false,
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Doc::Atom(s) | Doc::Neg(s) | Doc::Text(s) => out.push_str(s),
            Doc::Op(o) => {
                let _ = write!(out, "({o})");
            }
            Doc::App(h, xs) => match (&**h, xs.as_slice()) {
                (Doc::Op(o), [l, r]) => {
                    l.operand(out);
                    let _ = write!(out, " {o} ");
                    r.operand(out);
                }
                _ => {
                    h.operand(out);
                    for x in xs {
                        out.push(' ');
                        x.operand(out);
                    }
                }
            },
            Doc::List(xs) => {
                out.push('[');
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    x.write(out);
                }
                out.push(']');
            }
            Doc::Tuple(xs) => {
                out.push('(');
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    x.write(out);
                }
                out.push(')');
            }
            Doc::Section(o, x) => {
                let _ = write!(out, "({o} ");
                x.operand(out);
                out.push(')');
            }
        }
    }

    fn operand(&self, out: &mut String) {
        if self.is_atomic() {
            self.write(out);
        } else {
            out.push('(');
            self.write(out);
            out.push(')');
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        self.write(&mut s);
        s
    }
}

/// A configuration as displayed in a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    /// Number of enclosing matchings hidden from view.
    pub depth: usize,
}

impl Rendered {
    /// The text preceded by `dots_per_level` dots per hidden level.
    pub fn with_dots(&self, dots_per_level: usize) -> String {
        if self.depth == 0 || dots_per_level == 0 {
            self.text.clone()
        } else {
            format!("{} {}", ".".repeat(self.depth * dots_per_level), self.text)
        }
    }
}

struct Printer<'a> {
    program: &'a Program,
    heap: &'a Heap,
    /// Documents standing for locations under evaluation.
    inprogress: HashMap<Name, Doc>,
    /// Locations and local bindings on the current path, for cycles.
    visiting: Vec<Name>,
    /// Local bindings of `let`s being printed, innermost last.
    locals: Vec<(Name, Expr)>,
}

fn char_literal(c: char) -> String {
    let mut s = String::from("'");
    match c {
        '\'' => s.push_str("\\'"),
        _ => s.extend(c.escape_default()),
    }
    s.push('\'');
    s
}

fn string_literal(cs: &[char]) -> String {
    let mut s = String::from("\"");
    for &c in cs {
        match c {
            '\'' => s.push('\''),
            _ => s.extend(c.escape_default()),
        }
    }
    s.push('"');
    s
}

impl<'a> Printer<'a> {
    fn new(program: &'a Program, heap: &'a Heap) -> Self {
        Printer { program, heap, inprogress: HashMap::new(), visiting: Vec::new(), locals: Vec::new() }
    }

    fn name(&self, n: &Name) -> Doc {
        if n.is_operator() {
            Doc::Op(n.base().to_string())
        } else {
            Doc::Atom(n.base().to_string())
        }
    }

    fn var(&mut self, n: &Name) -> Doc {
        if self.visiting.contains(n) {
            return self.name(n);
        }
        if let Some(i) = self.locals.iter().rposition(|(m, _)| m == n) {
            let e = self.locals[i].1.clone();
            self.visiting.push(n.clone());
            let d = self.expr(&e);
            self.visiting.pop();
            return d;
        }
        if self.program.is_global(n) {
            return self.name(n);
        }
        if let Some(d) = self.inprogress.get(n) {
            return d.clone();
        }
        match self.heap.get(n) {
            Some(e) => {
                self.visiting.push(n.clone());
                let d = match e {
                    Expr::Con(c, xs) => self.heap_con(c, xs).unwrap_or_else(|| self.con(c, xs)),
                    e => self.expr(e),
                };
                self.visiting.pop();
                d
            }
            None => self.name(n),
        }
    }

    /// A list cell whose whole spine is in the heap prints as a literal.
    fn heap_con(&mut self, c: &Name, xs: &[Expr]) -> Option<Doc> {
        if c.as_str() != ":" {
            return None;
        }
        let mut items = vec![xs[0].clone()];
        let mut seen = self.visiting.clone();
        let mut tail = xs[1].clone();
        loop {
            let Expr::Var(l) = &tail else { return None };
            if seen.contains(l) || self.inprogress.contains_key(l) || self.program.is_global(l) {
                return None;
            }
            if self.locals.iter().any(|(m, _)| m == l) {
                return None;
            }
            match self.heap.get(l) {
                Some(Expr::Con(d, ys)) if d.as_str() == ":" => {
                    seen.push(l.clone());
                    items.push(ys[0].clone());
                    tail = ys[1].clone();
                }
                Some(Expr::Con(d, _)) if d.as_str() == "[]" => break,
                _ => return None,
            }
        }
        let chars: Option<Vec<char>> = items
            .iter()
            .map(|x| match x {
                Expr::Char(c) => Some(*c),
                Expr::Var(l) => match self.heap.get(l) {
                    Some(Expr::Char(c)) if !self.inprogress.contains_key(l) => Some(*c),
                    _ => None,
                },
                _ => None,
            })
            .collect();
        if let Some(cs) = chars {
            return Some(Doc::Atom(string_literal(&cs)));
        }
        Some(Doc::List(items.iter().map(|x| self.expr(x)).collect()))
    }

    fn con(&mut self, c: &Name, xs: &[Expr]) -> Doc {
        let args: Vec<Doc> = xs.iter().map(|x| self.expr(x)).collect();
        if c.base().starts_with("(,") {
            return Doc::Tuple(args);
        }
        self.name(c).apply(args)
    }

    fn expr(&mut self, e: &Expr) -> Doc {
        match e {
            Expr::Var(n) => self.var(n),
            Expr::Int(n) if n.sign() == num_bigint::Sign::Minus => Doc::Neg(n.to_string()),
            Expr::Int(n) => Doc::Atom(n.to_string()),
            Expr::Char(c) => Doc::Atom(char_literal(*c)),
            Expr::App(..) => {
                let (head, args) = e.spine();
                let h = self.expr(head);
                let args = args.into_iter().map(|a| self.expr(a)).collect();
                h.apply(args)
            }
            Expr::Con(c, xs) => self.con(c, xs),
            Expr::Prim(op, xs) => {
                let args = xs.iter().map(|x| self.expr(x)).collect();
                self.prim_head(*op).apply(args)
            }
            Expr::Lam(m) => self.lambda(m),
        }
    }

    fn prim_head(&self, op: PrimOp) -> Doc {
        if op.is_infix() {
            Doc::Op(op.symbol().to_string())
        } else {
            Doc::Atom(op.symbol().to_string())
        }
    }

    fn lambda(&mut self, m: &Arc<Matching>) -> Doc {
        let mut args = Vec::new();
        let mut cur = m;
        while let Matching::Arg(e, inner) = &**cur {
            if self.program.global_of(cur).is_some() {
                break;
            }
            args.push(e);
            cur = inner;
        }
        args.reverse();
        let base = self.matching_head(cur);
        let args = args.into_iter().map(|a| self.expr(a)).collect();
        base.apply(args)
    }

    fn matching_head(&mut self, m: &Arc<Matching>) -> Doc {
        if let Some(g) = self.program.global_of(m) {
            return self.name(g);
        }
        match &**m {
            Matching::Where(body, binds) => {
                if let Matching::Return(e, None) = &**body {
                    let mark = self.locals.len();
                    self.locals.extend(binds.0.iter().cloned());
                    let d = self.expr(e);
                    self.locals.truncate(mark);
                    return d;
                }
                Doc::Text("<function>".into())
            }
            Matching::Return(e, _) => self.expr(e),
            Matching::Pat(..) => self.abstraction(m),
            Matching::Alt(..) => self.case_alts(m),
            _ => Doc::Text("<function>".into()),
        }
    }

    /// `\p1 p2 -> e`, or a right section for `\x -> x op e`.
    fn abstraction(&mut self, m: &Arc<Matching>) -> Doc {
        let mut pats = Vec::new();
        let mut cur = m;
        while let Matching::Pat(p, inner) = &**cur {
            pats.push(p.clone());
            cur = inner;
        }
        let Matching::Return(body, _) = &**cur else { return Doc::Text("<function>".into()) };
        let mut body: &Expr = body;
        let mark = self.locals.len();
        while let Expr::Lam(lm) = body {
            let Matching::Where(inner, binds) = &**lm else { break };
            let Matching::Return(e, None) = &**inner else { break };
            self.locals.extend(binds.0.iter().cloned());
            body = e;
        }
        let d = self.abstraction_body(&pats, body);
        self.locals.truncate(mark);
        d
    }

    fn abstraction_body(&mut self, pats: &[Pattern], body: &Expr) -> Doc {
        if let ([Pattern::Var(x)], Expr::App(..)) = (pats, body) {
            let (head, args) = body.spine();
            if let (Expr::Var(op), [Expr::Var(y), rhs]) = (head, args.as_slice()) {
                if y == x && x.is_generated() && op.is_operator() {
                    let r = self.expr(rhs);
                    return Doc::Section(op.base().to_string(), Box::new(r));
                }
            }
        }
        let mut s = String::from("\\");
        for (i, p) in pats.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&pattern_text(p, true));
        }
        s.push_str(" -> ");
        s.push_str(&self.expr(body).text());
        Doc::Text(s)
    }

    fn case_alts(&mut self, m: &Arc<Matching>) -> Doc {
        let mut alts = Vec::new();
        let mut cur = m;
        loop {
            match &**cur {
                Matching::Alt(a, b) => {
                    alts.push(a.clone());
                    cur = b;
                }
                _ => {
                    alts.push(cur.clone());
                    break;
                }
            }
        }
        let mut s = String::from("\\case {");
        for (i, a) in alts.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            match &**a {
                Matching::Pat(p, body) => match &**body {
                    Matching::Return(e, _) => {
                        let _ = write!(s, " {} -> {}", pattern_text(p, false), self.expr(e).text());
                    }
                    _ => {
                        let _ = write!(s, " {} -> ...", pattern_text(p, false));
                    }
                },
                _ => s.push_str(" ..."),
            }
        }
        s.push_str(" }");
        Doc::Text(s)
    }

    /// Pending arguments applied to the matching under evaluation.
    fn matching_control(&mut self, args: &[Name], m: &Arc<Matching>) -> Doc {
        let head = self.matching_head(m);
        let args = args.iter().rev().map(|y| self.var(y)).collect();
        head.apply(args)
    }
}

fn pattern_text(p: &Pattern, atomic: bool) -> String {
    match p {
        Pattern::Var(x) => x.base().to_string(),
        Pattern::Bang(x) => format!("!{}", x.base()),
        Pattern::Wild => "_".into(),
        Pattern::Int(n) => n.to_string(),
        Pattern::Char(c) => char_literal(*c),
        Pattern::Con(c, ps) if ps.is_empty() => c.base().to_string(),
        Pattern::Con(c, ps) if c.base().starts_with("(,") => {
            let inner: Vec<String> = ps.iter().map(|q| pattern_text(q, false)).collect();
            format!("({})", inner.join(","))
        }
        Pattern::Con(c, ps) => {
            let s = if c.is_operator() && ps.len() == 2 {
                format!("{}{}{}", pattern_text(&ps[0], true), c.base(), pattern_text(&ps[1], true))
            } else {
                let mut s = c.base().to_string();
                for q in ps {
                    s.push(' ');
                    s.push_str(&pattern_text(q, true));
                }
                s
            };
            if atomic {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

/// Prints a configuration in context.
pub fn render_config(program: &Program, config: &Config) -> Rendered {
    let mut p = Printer::new(program, &config.heap);
    let mut doc = match &config.control {
        Control::Eval(e) => p.expr(e),
        Control::Match(args, m) => p.matching_control(args, m),
    };
    for (i, frame) in config.stack.iter().enumerate().rev() {
        match frame {
            Frame::Arg(y) => {
                let a = p.var(y);
                doc = doc.apply(vec![a]);
            }
            Frame::Update(l) => {
                p.inprogress.insert(l.clone(), doc.clone());
            }
            Frame::Prim(op, done, pending) => {
                let mut args: Vec<Doc> = done.iter().map(|v| p.expr(v)).collect();
                args.push(doc);
                args.extend(pending.iter().rev().map(|y| p.var(y)));
                doc = p.prim_head(*op).apply(args);
            }
            Frame::Force(root) => {
                doc = p.var(root);
            }
            Frame::EndMatch(_) | Frame::Alt(..) | Frame::Pat(..) | Frame::Bang(..) => {
                let depth = config.stack[..=i].iter().filter(|f| matches!(f, Frame::EndMatch(_))).count();
                return Rendered { text: doc.text(), depth };
            }
        }
    }
    Rendered { text: doc.text(), depth: 0 }
}

/// Prints the contents of a heap location.
pub fn render_location(program: &Program, heap: &Heap, l: &Name) -> String {
    Printer::new(program, heap).var(l).text()
}

/// Prints an expression, resolving its free locations in `heap`.
pub fn render_expr(program: &Program, heap: &Heap, e: &Expr) -> String {
    Printer::new(program, heap).expr(e).text()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog() -> Program {
        Program::load("").unwrap()
    }

    #[test]
    fn list_literal_from_heap() {
        let p = prog();
        let ep = p.entry("[1,2,3]").unwrap();
        assert_eq!(render_location(&p, &ep.heap, &ep.root), "[1, 2, 3]");
    }

    #[test]
    fn cons_with_thunk_tail_is_infix() {
        let p = prog();
        let ep = p.entry("1 : map negate [2, 4]").unwrap();
        assert_eq!(render_location(&p, &ep.heap, &ep.root), "1 : (map negate [2, 4])");
    }

    #[test]
    fn operators_and_sections() {
        let p = prog();
        let ep = p.entry("foldl (*) (1 * 2) [3]").unwrap();
        assert_eq!(render_location(&p, &ep.heap, &ep.root), "foldl (*) (1 * 2) [3]");
        let ep = p.entry("(map (+ 1) [3], (3, 6))").unwrap();
        assert_eq!(render_location(&p, &ep.heap, &ep.root), "(map (+ 1) [3], (3, 6))");
    }

    #[test]
    fn strings_and_chars() {
        let p = prog();
        let ep = p.entry("(\"hi\", 'x')").unwrap();
        assert_eq!(render_location(&p, &ep.heap, &ep.root), "(\"hi\", 'x')");
    }

    #[test]
    fn nested_infix_parenthesized() {
        let p = prog();
        let ep = p.entry("((1 * 2) * 3) * 4").unwrap();
        assert_eq!(render_location(&p, &ep.heap, &ep.root), "((1 * 2) * 3) * 4");
        let ep = p.entry("negate (-3)").unwrap();
        assert_eq!(render_location(&p, &ep.heap, &ep.root), "negate (-3)");
    }

    #[test]
    fn dots() {
        let r = Rendered { text: "False".into(), depth: 1 };
        assert_eq!(r.with_dots(4), ".... False");
        assert_eq!(Rendered { text: "1".into(), depth: 0 }.with_dots(4), "1");
    }
}
