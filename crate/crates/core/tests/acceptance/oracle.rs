//! Brute-force check of the balanced-trace parser against the languages
//! generated directly from the grammar productions.

use std::collections::HashSet;

use haskelite_core::machine::grammar::{derives, Nonterminal};
use haskelite_core::machine::Rule;

#[derive(Clone, Copy)]
enum Sym {
    T(Rule),
    N(usize),
}

const E: usize = 0;
const M: usize = 1;
/// `(PrimNext E)*`
const PRIM_REST: usize = 2;
/// `(ForceStep E)*`
const FORCE_REST: usize = 3;

fn productions() -> Vec<(usize, Vec<Sym>)> {
    use Rule::*;
    use Sym::{N, T};
    vec![
        (E, vec![T(App1), N(E), T(App2), N(E)]),
        (E, vec![T(Sat), N(M), T(Return1B), N(E)]),
        (E, vec![T(Var), N(E), T(Update)]),
        (E, vec![T(PrimStart), N(E), N(PRIM_REST), T(PrimReduce), N(E)]),
        (E, vec![T(ForceEnter), N(E), N(FORCE_REST), T(ForceDone), N(E)]),
        (E, vec![]),
        (PRIM_REST, vec![]),
        (PRIM_REST, vec![T(PrimNext), N(E), N(PRIM_REST)]),
        (FORCE_REST, vec![]),
        (FORCE_REST, vec![T(ForceStep), N(E), N(FORCE_REST)]),
        (M, vec![T(Alt1), N(M), T(Alt2), N(M)]),
        (M, vec![T(Alt1), N(M), T(Return2)]),
        (M, vec![T(Cons1), N(E), T(Cons2), N(M)]),
        (M, vec![T(Cons1), N(E), T(Fail)]),
        (M, vec![T(Bang1), N(E), T(Bang2), N(M)]),
        (M, vec![T(Arg), N(M)]),
        (M, vec![T(Bind), N(M)]),
        (M, vec![T(Return1A), N(M)]),
        (M, vec![T(Return1C), N(M)]),
        (M, vec![T(Where), N(M)]),
        (M, vec![]),
    ]
}

/// Every string of at most `max` rules derivable from each nonterminal.
fn languages(max: usize) -> Vec<HashSet<Vec<Rule>>> {
    let prods = productions();
    let mut langs: Vec<HashSet<Vec<Rule>>> = vec![HashSet::new(); 4];
    loop {
        let mut changed = false;
        for (lhs, rhs) in &prods {
            let mut partial: Vec<Vec<Rule>> = vec![Vec::new()];
            for sym in rhs {
                let mut next = Vec::new();
                for p in &partial {
                    match sym {
                        Sym::T(r) if p.len() < max => {
                            let mut q = p.clone();
                            q.push(*r);
                            next.push(q);
                        }
                        Sym::T(_) => {}
                        Sym::N(n) => {
                            for s in &langs[*n] {
                                if p.len() + s.len() <= max {
                                    let mut q = p.clone();
                                    q.extend_from_slice(s);
                                    next.push(q);
                                }
                            }
                        }
                    }
                }
                partial = next;
            }
            for w in partial {
                changed |= langs[*lhs].insert(w);
            }
        }
        if !changed {
            return langs;
        }
    }
}

const ALPHABET: usize = Rule::ALL.len();

fn offset(len: usize) -> usize {
    (0..len).map(|k| ALPHABET.pow(k as u32)).sum()
}

fn index(w: &[Rule]) -> usize {
    let digits = w.iter().fold(0, |acc, r| acc * ALPHABET + Rule::ALL.iter().position(|x| x == r).unwrap());
    offset(w.len()) + digits
}

pub type Disagreement = (Nonterminal, Vec<Rule>);

/// Checks the parser on every rule string up to `max` long. Returns the
/// number of strings, how many each nonterminal derives, and the
/// disagreements found.
pub fn brute_force(max: usize) -> (usize, [usize; 2], Vec<Disagreement>) {
    let langs = languages(max);
    let total = offset(max + 1);
    let mut member = [vec![false; total], vec![false; total]];
    for (k, nt) in [E, M].into_iter().enumerate() {
        for w in &langs[nt] {
            member[k][index(w)] = true;
        }
    }
    let mut bad = Vec::new();
    let mut buf = [Rule::App1; 8];
    let mut code = 0;
    for len in 0..=max {
        let mut digits = [0usize; 8];
        for d in buf.iter_mut().take(len) {
            *d = Rule::ALL[0];
        }
        loop {
            let w = &buf[..len];
            for (k, nt) in [Nonterminal::Expr, Nonterminal::Matching].into_iter().enumerate() {
                if derives(nt, w) != member[k][code] && bad.len() < 20 {
                    bad.push((nt, w.to_vec()));
                }
            }
            code += 1;
            // Odometer increment, least significant digit last.
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < ALPHABET {
                    buf[i] = Rule::ALL[digits[i]];
                    break;
                }
                digits[i] = 0;
                buf[i] = Rule::ALL[0];
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if len == 0 || i == usize::MAX {
                break;
            }
        }
    }
    debug_assert_eq!(code, total);
    (total, [langs[E].len(), langs[M].len()], bad)
}
