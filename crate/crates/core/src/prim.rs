//! Built-in primitive operations on integers and characters, and structural
//! equality.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::RuntimeError;
use crate::syntax::{Bindings, Expr, Matching, Name, Pattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Negate,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Ord,
    Chr,
    /// Deep evaluation to normal form; handled by the evaluators directly.
    Force,
}

impl PrimOp {
    pub const ALL: [PrimOp; 15] = [
        PrimOp::Add,
        PrimOp::Sub,
        PrimOp::Mul,
        PrimOp::Div,
        PrimOp::Mod,
        PrimOp::Negate,
        PrimOp::Eq,
        PrimOp::Ne,
        PrimOp::Lt,
        PrimOp::Le,
        PrimOp::Gt,
        PrimOp::Ge,
        PrimOp::Ord,
        PrimOp::Chr,
        PrimOp::Force,
    ];

    /// The global name under which the operation is available to programs.
    pub fn symbol(self) -> &'static str {
        match self {
            PrimOp::Add => "+",
            PrimOp::Sub => "-",
            PrimOp::Mul => "*",
            PrimOp::Div => "div",
            PrimOp::Mod => "mod",
            PrimOp::Negate => "negate",
            PrimOp::Eq => "==",
            PrimOp::Ne => "/=",
            PrimOp::Lt => "<",
            PrimOp::Le => "<=",
            PrimOp::Gt => ">",
            PrimOp::Ge => ">=",
            PrimOp::Ord => "ord",
            PrimOp::Chr => "chr",
            PrimOp::Force => "force",
        }
    }

    pub fn from_symbol(s: &str) -> Option<PrimOp> {
        PrimOp::ALL.into_iter().find(|op| op.symbol() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            PrimOp::Negate | PrimOp::Ord | PrimOp::Chr | PrimOp::Force => 1,
            _ => 2,
        }
    }

    /// Written between its operands, like `3 + 4`.
    pub fn is_infix(self) -> bool {
        self.arity() == 2 && !matches!(self, PrimOp::Div | PrimOp::Mod)
    }

    /// The global wrapper `λ(a ▷ b ▷ ⌈op[a, b]⌉)`.
    pub fn wrapper(self) -> Expr {
        let params: Vec<Name> = ["a", "b"][..self.arity()].iter().map(|s| Name::new(s)).collect();
        let body = Expr::Prim(self, params.iter().cloned().map(Expr::Var).collect());
        Expr::lam(Matching::pats(params.into_iter().map(Pattern::Var).collect(), Matching::ret(body)))
    }
}

/// Textual justification for a primitive reduction, e.g. `3 <= 1 = False`.
pub fn justification(op: PrimOp, operands: &[String], result: &str) -> String {
    match (op.is_infix(), operands) {
        (true, [a, b]) => format!("{a} {} {b} = {result}", op.symbol()),
        (false, [a, b]) => format!("{a} `{}` {b} = {result}", op.symbol()),
        _ => format!("{} {} = {result}", op.symbol(), operands.join(" ")),
    }
}

fn boolean(b: bool) -> Expr {
    Expr::Con(Name::new(if b { "True" } else { "False" }), vec![])
}

fn int_operands(op: PrimOp, args: &[Expr]) -> Result<Vec<BigInt>, RuntimeError> {
    args.iter()
        .map(|a| match a {
            Expr::Int(n) => Ok(n.clone()),
            other => Err(RuntimeError::PrimitiveType { op: op.symbol(), operand: other.to_string() }),
        })
        .collect()
}

/// Reduces a primitive applied to values in weak head normal form.
///
/// The result is usually a value; comparing constructors yields an
/// expression that compares their fields one after another.
pub fn reduce(op: PrimOp, args: &[Expr]) -> Result<Expr, RuntimeError> {
    match op {
        PrimOp::Force => Err(RuntimeError::Stuck("force is not a reducible primitive".into())),
        PrimOp::Eq => equality(&args[0], &args[1]),
        PrimOp::Ne => Ok(negation(equality(&args[0], &args[1])?)),
        PrimOp::Ord => match &args[0] {
            Expr::Char(c) => Ok(Expr::Int(BigInt::from(*c as u32))),
            other => Err(RuntimeError::PrimitiveType { op: op.symbol(), operand: other.to_string() }),
        },
        PrimOp::Chr => {
            let n = int_operands(op, args)?.remove(0);
            n.to_u32()
                .and_then(char::from_u32)
                .map(Expr::Char)
                .ok_or_else(|| RuntimeError::Arithmetic(format!("chr {n} is out of range")))
        }
        PrimOp::Lt | PrimOp::Le | PrimOp::Gt | PrimOp::Ge => {
            let ord = compare(op, &args[0], &args[1])?;
            Ok(boolean(match op {
                PrimOp::Lt => ord.is_lt(),
                PrimOp::Le => ord.is_le(),
                PrimOp::Gt => ord.is_gt(),
                _ => ord.is_ge(),
            }))
        }
        PrimOp::Negate => Ok(Expr::Int(-int_operands(op, args)?.remove(0))),
        PrimOp::Add | PrimOp::Sub | PrimOp::Mul | PrimOp::Div | PrimOp::Mod => {
            let ns = int_operands(op, args)?;
            let (a, b) = (&ns[0], &ns[1]);
            let r = match op {
                PrimOp::Add => a + b,
                PrimOp::Sub => a - b,
                PrimOp::Mul => a * b,
                _ if b.is_zero() => return Err(RuntimeError::Arithmetic("divide by zero".into())),
                PrimOp::Div => a.div_floor(b),
                _ => a.mod_floor(b),
            };
            Ok(Expr::Int(r))
        }
    }
}

fn compare(op: PrimOp, a: &Expr, b: &Expr) -> Result<std::cmp::Ordering, RuntimeError> {
    match (a, b) {
        (Expr::Int(x), Expr::Int(y)) => Ok(x.cmp(y)),
        (Expr::Char(x), Expr::Char(y)) => Ok(x.cmp(y)),
        (Expr::Int(_), other) | (_, other) => {
            Err(RuntimeError::PrimitiveType { op: op.symbol(), operand: other.to_string() })
        }
    }
}

fn equality(a: &Expr, b: &Expr) -> Result<Expr, RuntimeError> {
    match (a, b) {
        (Expr::Int(x), Expr::Int(y)) => Ok(boolean(x == y)),
        (Expr::Char(x), Expr::Char(y)) => Ok(boolean(x == y)),
        (Expr::Con(c, xs), Expr::Con(d, ys)) => {
            if c != d || xs.len() != ys.len() {
                return Ok(boolean(false));
            }
            let pairs: Vec<(&Expr, &Expr)> = xs.iter().zip(ys).collect();
            Ok(fields_equal(&pairs))
        }
        (Expr::Lam(_), _) | (_, Expr::Lam(_)) => Err(RuntimeError::FunctionEquality),
        (x, _) => Err(RuntimeError::PrimitiveType { op: "==", operand: x.to_string() }),
    }
}

/// `x1 == y1 && (x2 == y2 && …)` spelled as a matching on each comparison.
fn fields_equal(pairs: &[(&Expr, &Expr)]) -> Expr {
    match pairs {
        [] => boolean(true),
        [(x, y)] => Expr::Prim(PrimOp::Eq, vec![(*x).clone(), (*y).clone()]),
        [(x, y), rest @ ..] => {
            let alts = Matching::alt(
                Matching::pat(Pattern::con("True", vec![]), Matching::ret(fields_equal(rest))),
                Matching::pat(Pattern::con("False", vec![]), Matching::ret(boolean(false))),
            );
            branch_on(Expr::Prim(PrimOp::Eq, vec![(*x).clone(), (*y).clone()]), alts)
        }
    }
}

fn negation(e: Expr) -> Expr {
    match e {
        Expr::Con(c, _) if c.as_str() == "True" => boolean(false),
        Expr::Con(c, _) if c.as_str() == "False" => boolean(true),
        e => {
            let alts = Matching::alt(
                Matching::pat(Pattern::con("True", vec![]), Matching::ret(boolean(false))),
                Matching::pat(Pattern::con("False", vec![]), Matching::ret(boolean(true))),
            );
            branch_on(e, alts)
        }
    }
}

/// `λ((t ◁ alts) where {t = scrutinee})`, already in normalized form.
fn branch_on(scrutinee: Expr, alts: Matching) -> Expr {
    let t = Name::new("t");
    let m = Matching::arg(Expr::Var(t.clone()), alts);
    Expr::lam(Matching::Where(Arc::new(m), Bindings(vec![(t, scrutinee)])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::is_normalized;

    #[test]
    fn arithmetic_floors() {
        let r = reduce(PrimOp::Div, &[Expr::int(-7), Expr::int(2)]).unwrap();
        assert_eq!(r, Expr::int(-4));
        let r = reduce(PrimOp::Mod, &[Expr::int(-7), Expr::int(2)]).unwrap();
        assert_eq!(r, Expr::int(1));
        assert!(reduce(PrimOp::Div, &[Expr::int(1), Expr::int(0)]).is_err());
    }

    #[test]
    fn comparison_yields_bool() {
        let r = reduce(PrimOp::Le, &[Expr::int(3), Expr::int(1)]).unwrap();
        assert_eq!(r, boolean(false));
        let r = reduce(PrimOp::Lt, &[Expr::Char('a'), Expr::Char('b')]).unwrap();
        assert_eq!(r, boolean(true));
    }

    #[test]
    fn constructor_equality_is_structural() {
        let a = Expr::con(":", vec![Expr::var("x"), Expr::var("xs")]);
        let b = Expr::con("[]", vec![]);
        assert_eq!(reduce(PrimOp::Eq, &[a.clone(), b.clone()]).unwrap(), boolean(false));
        assert_eq!(reduce(PrimOp::Ne, &[a.clone(), b]).unwrap(), boolean(true));
        let r = reduce(PrimOp::Eq, &[a.clone(), a]).unwrap();
        assert!(matches!(r, Expr::Lam(_)));
        assert!(is_normalized(&r));
    }

    #[test]
    fn justification_text() {
        assert_eq!(justification(PrimOp::Le, &["3".into(), "1".into()], "False"), "3 <= 1 = False");
        assert_eq!(justification(PrimOp::Mod, &["7".into(), "2".into()], "1"), "7 `mod` 2 = 1");
        assert_eq!(justification(PrimOp::Negate, &["3".into()], "-3"), "negate 3 = -3");
    }
}
