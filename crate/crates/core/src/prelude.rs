//! Standard definitions available to every program.
//!
//! Most of the prelude is ordinary source code interpreted like user
//! programs, so its equations show up in traces. Primitive operations and
//! curried constructors are provided as builtin wrappers.

use crate::prim::PrimOp;
use crate::syntax::{Expr, Matching, Name, Pattern};
use crate::types::{prim_type, DataEnv, Scheme};

pub const SOURCE: &str = include_str!("prelude.hs");

/// A builtin global: its name, definition and type.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: Name,
    pub expr: Expr,
    pub scheme: Scheme,
}

/// Wrappers for the primitive operations.
pub fn primitives() -> Vec<Builtin> {
    PrimOp::ALL
        .into_iter()
        .map(|op| Builtin { name: Name::new(op.symbol()), expr: op.wrapper(), scheme: prim_type(op) })
        .collect()
}

/// `λ(x1 ▷ … ▷ xn ▷ ⌈c(x1, …, xn)⌉)` for a constructor of arity `n`.
pub fn constructor_wrapper(c: &str, arity: usize) -> Expr {
    let params: Vec<Name> = (1..=arity).map(|i| Name::new(&format!("x{i}"))).collect();
    let body = Expr::con(c, params.iter().cloned().map(Expr::Var).collect());
    Expr::lam(Matching::pats(params.into_iter().map(Pattern::Var).collect(), Matching::ret(body)))
}

/// Wrappers for every constructor taking arguments, in name order.
pub fn constructors(data: &DataEnv) -> Vec<Builtin> {
    let mut names: Vec<(&String, &usize)> = data.ctor_arity.iter().filter(|(_, n)| **n > 0).collect();
    names.sort();
    names
        .into_iter()
        .map(|(c, n)| Builtin { name: Name::new(c), expr: constructor_wrapper(c, *n), scheme: data.ctors[c].clone() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    #[test]
    fn prelude_parses() {
        parse_program(SOURCE).unwrap();
    }

    #[test]
    fn wrappers_cover_builtin_constructors() {
        let data = DataEnv::new();
        let names: Vec<String> = constructors(&data).iter().map(|b| b.name.to_string()).collect();
        assert!(names.contains(&":".to_string()));
        assert!(names.contains(&"(,)".to_string()));
        assert_eq!(primitives().len(), PrimOp::ALL.len());
    }
}
