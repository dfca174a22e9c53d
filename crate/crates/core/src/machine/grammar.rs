//! Balanced machine traces.
//!
//! Evaluating an expression to a value (and a matching to a result) takes
//! the machine through a sequence of rules that nests like brackets: every
//! frame pushed is popped by the corresponding rule. The grammar has two
//! nonterminals, [`Nonterminal::Expr`] for expression evaluation and
//! [`Nonterminal::Matching`] for matching evaluation:
//!
//! ```text
//! E ::= App1 E App2 E | Sat M Return1B E | Var E Update
//!     | PrimStart E (PrimNext E)* PrimReduce E
//!     | ForceEnter E (ForceStep E)* ForceDone E | ε
//! M ::= Alt1 M Alt2 M | Alt1 M Return2 | Cons1 E Cons2 M | Cons1 E Fail
//!     | Bang1 E Bang2 M | Arg M | Bind M | Return1A M | Return1C M
//!     | Where M | ε
//! ```
//!
//! Every alternative starts with its own opening rule and no opening rule
//! can follow a complete phrase, so one token of lookahead decides each
//! choice.

use super::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Nonterminal {
    Expr,
    Matching,
}

/// Whether the whole sequence derives from `nt`.
pub fn derives(nt: Nonterminal, rules: &[Rule]) -> bool {
    let mut p = Parser { rules, pos: 0 };
    let ok = match nt {
        Nonterminal::Expr => p.expr(),
        Nonterminal::Matching => p.matching(),
    };
    ok && p.pos == rules.len()
}

pub fn is_balanced(rules: &[Rule]) -> bool {
    derives(Nonterminal::Expr, rules)
}

struct Parser<'a> {
    rules: &'a [Rule],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Rule> {
        self.rules.get(self.pos).copied()
    }

    fn eat(&mut self, r: Rule) -> bool {
        if self.peek() == Some(r) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> bool {
        let Some(r) = self.peek() else { return true };
        match r {
            Rule::App1 => {
                self.pos += 1;
                self.expr() && self.eat(Rule::App2) && self.expr()
            }
            Rule::Sat => {
                self.pos += 1;
                self.matching() && self.eat(Rule::Return1B) && self.expr()
            }
            Rule::Var => {
                self.pos += 1;
                self.expr() && self.eat(Rule::Update)
            }
            Rule::PrimStart => {
                self.pos += 1;
                self.repeated(Rule::PrimNext, Rule::PrimReduce)
            }
            Rule::ForceEnter => {
                self.pos += 1;
                self.repeated(Rule::ForceStep, Rule::ForceDone)
            }
            _ => true,
        }
    }

    /// `E (again E)* last E`
    fn repeated(&mut self, again: Rule, last: Rule) -> bool {
        if !self.expr() {
            return false;
        }
        while self.eat(again) {
            if !self.expr() {
                return false;
            }
        }
        self.eat(last) && self.expr()
    }

    fn matching(&mut self) -> bool {
        let Some(r) = self.peek() else { return true };
        match r {
            Rule::Alt1 => {
                self.pos += 1;
                if !self.matching() {
                    return false;
                }
                if self.eat(Rule::Alt2) {
                    self.matching()
                } else {
                    self.eat(Rule::Return2)
                }
            }
            Rule::Cons1 => {
                self.pos += 1;
                if !self.expr() {
                    return false;
                }
                if self.eat(Rule::Cons2) {
                    self.matching()
                } else {
                    self.eat(Rule::Fail)
                }
            }
            Rule::Bang1 => {
                self.pos += 1;
                self.expr() && self.eat(Rule::Bang2) && self.matching()
            }
            Rule::Arg | Rule::Bind | Rule::Return1A | Rule::Return1C | Rule::Where => {
                self.pos += 1;
                self.matching()
            }
            _ => true,
        }
    }
}
