//! Recursive-descent parser over the laid-out token stream.

use super::ast::*;
use super::lexer::{layout, tokenize, Keyword, Tok, Token};
use crate::error::{Pos, SyntaxError};

type PResult<T> = Result<T, SyntaxError>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Assoc {
    Left,
    Right,
    None,
}

fn fixity(op: &str) -> (u8, Assoc) {
    match op {
        "." => (9, Assoc::Right),
        "!!" => (9, Assoc::Left),
        "*" | "/" | "div" | "mod" | "quot" | "rem" => (7, Assoc::Left),
        "+" | "-" => (6, Assoc::Left),
        ":" | "++" => (5, Assoc::Right),
        "==" | "/=" | "<" | "<=" | ">" | ">=" | "elem" | "notElem" => (4, Assoc::None),
        "&&" => (3, Assoc::Right),
        "||" => (2, Assoc::Right),
        "$" | "seq" | "$!" => (0, Assoc::Right),
        _ => (9, Assoc::Left),
    }
}

/// Collapses runs of whitespace to single spaces.
pub fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    i: usize,
    last_end: usize,
}

pub fn parse_program(src: &str) -> PResult<Vec<Decl>> {
    let toks = layout(tokenize(src)?, true);
    let mut p = Parser { src, toks, i: 0, last_end: 0 };
    let decls = p.block(|p| p.decl())?;
    p.expect(&Tok::Eof)?;
    Ok(decls)
}

pub fn parse_expression(src: &str) -> PResult<SExpr> {
    let toks = layout(tokenize(src)?, false);
    let mut p = Parser { src, toks, i: 0, last_end: 0 };
    let e = p.expr()?;
    p.expect(&Tok::Eof)?;
    Ok(e)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn start(&self) -> usize {
        self.toks[self.i].start
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if !matches!(t.tok, Tok::VLBrace | Tok::VSemi | Tok::VRBrace | Tok::Eof) {
            self.last_end = t.end;
        }
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn text_from(&self, start: usize) -> String {
        squash(&self.src[start..self.last_end.max(start)])
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(SyntaxError {
            pos: self.pos(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(&t.describe())
        }
    }

    fn block<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let close = match self.peek() {
            Tok::LBrace => Tok::RBrace,
            Tok::VLBrace => Tok::VRBrace,
            _ => return self.error("a block"),
        };
        self.bump();
        let mut items = Vec::new();
        loop {
            while matches!(self.peek(), Tok::Semi | Tok::VSemi) {
                self.bump();
            }
            if self.eat(&close) {
                return Ok(items);
            }
            items.push(item(self)?);
            if !matches!(self.peek(), Tok::Semi | Tok::VSemi) && *self.peek() != close {
                return self.error("end of declaration");
            }
        }
    }

    // -- declarations -----------------------------------------------------

    fn decl(&mut self) -> PResult<Decl> {
        let pos = self.pos();
        match self.peek() {
            Tok::Kw(Keyword::Data) => self.data_decl(),
            Tok::Kw(Keyword::Type) => {
                self.bump();
                let name = self.con_id()?;
                let mut params = Vec::new();
                while let Tok::VarId(v) = self.peek() {
                    params.push(v.clone());
                    self.bump();
                }
                self.expect(&Tok::Equals)?;
                let t = self.type_()?;
                Ok(Decl::TypeSynonym(name, params, t, pos))
            }
            _ if self.at_signature() => {
                let mut names = vec![self.var_or_op_name()?];
                while self.eat(&Tok::Comma) {
                    names.push(self.var_or_op_name()?);
                }
                self.expect(&Tok::DColon)?;
                let t = self.type_()?;
                Ok(Decl::Signature(names, t, pos))
            }
            _ => self.clause().map(Decl::Clause),
        }
    }

    fn at_signature(&self) -> bool {
        let after = match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Tok::VarId(_), t, _) => t,
            (Tok::LParen, Tok::VarSym(_) | Tok::ConSym(_), Tok::RParen) => self.peek_at(3),
            _ => return false,
        };
        matches!(after, Tok::DColon | Tok::Comma)
    }

    fn var_or_op_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::VarId(v) => {
                self.bump();
                Ok(v)
            }
            Tok::LParen => {
                self.bump();
                let op = match self.bump().tok {
                    Tok::VarSym(s) | Tok::ConSym(s) => s,
                    _ => return self.error("an operator"),
                };
                self.expect(&Tok::RParen)?;
                Ok(op)
            }
            _ => self.error("a variable"),
        }
    }

    fn con_id(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::ConId(c) => {
                self.bump();
                Ok(c)
            }
            _ => self.error("a constructor name"),
        }
    }

    fn data_decl(&mut self) -> PResult<Decl> {
        let pos = self.pos();
        self.bump();
        let name = self.con_id()?;
        let mut params = Vec::new();
        while let Tok::VarId(v) = self.peek() {
            params.push(v.clone());
            self.bump();
        }
        self.expect(&Tok::Equals)?;
        let mut constructors = Vec::new();
        loop {
            let c = self.con_id()?;
            let mut fields = Vec::new();
            while self.at_atype() {
                fields.push(self.atype()?);
            }
            constructors.push((c, fields));
            if !self.eat(&Tok::Bar) {
                break;
            }
        }
        if self.eat(&Tok::Kw(Keyword::Deriving)) {
            if self.eat(&Tok::LParen) {
                while !self.eat(&Tok::RParen) {
                    if *self.peek() == Tok::Eof {
                        return self.error("`)`");
                    }
                    self.bump();
                }
            } else {
                self.con_id()?;
            }
        }
        Ok(Decl::Data(DataDecl { name, params, constructors, pos }))
    }

    fn clause(&mut self) -> PResult<Clause> {
        let pos = self.pos();
        let start = self.start();
        let (name, pats) = self.lhs()?;
        let head_text = self.text_from(start);
        let rhs = self.rhs(&Tok::Equals)?;
        let wheres = self.wheres()?;
        Ok(Clause { name, pats, rhs, wheres, head_text, pos })
    }

    fn lhs(&mut self) -> PResult<(String, Vec<SPat>)> {
        if *self.peek() == Tok::LParen && matches!(self.peek_at(1), Tok::VarSym(_)) && *self.peek_at(2) == Tok::RParen {
            let name = self.var_or_op_name()?;
            let mut pats = Vec::new();
            while self.at_apat() {
                pats.push(self.apat()?);
            }
            return Ok((name, pats));
        }
        let pos = self.pos();
        let mut seq = Vec::new();
        while self.at_apat() {
            seq.push(self.apat()?);
        }
        if let Some(op) = self.peek_varop() {
            self.skip_op();
            let left = match (seq.len(), seq.first()) {
                (1, _) => seq.pop().expect("one"),
                (n, Some(SPat::Con(c, args))) if n > 1 && args.is_empty() => SPat::Con(c.clone(), seq.split_off(1)),
                _ => return Err(SyntaxError { pos, message: "malformed left operand of an operator definition".into() }),
            };
            let right = self.pat()?;
            return Ok((op, vec![left, right]));
        }
        match seq.first() {
            Some(SPat::Var(name)) => {
                let name = name.clone();
                Ok((name, seq.split_off(1)))
            }
            Some(_) => Err(SyntaxError { pos, message: "pattern bindings are not supported; define a function or variable".into() }),
            None => self.error("a declaration"),
        }
    }

    /// A variable operator (not a constructor operator) at the cursor.
    fn peek_varop(&self) -> Option<String> {
        match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Tok::VarSym(s), _, _) if !self.at_bang() => Some(s.clone()),
            (Tok::Backtick, Tok::VarId(s), Tok::Backtick) => Some(s.clone()),
            _ => None,
        }
    }

    fn skip_op(&mut self) {
        if *self.peek() == Tok::Backtick {
            self.bump();
            self.bump();
        }
        self.bump();
    }

    fn rhs(&mut self, sep: &Tok) -> PResult<Rhs> {
        if *self.peek() == Tok::Bar {
            let mut gs = Vec::new();
            while self.eat(&Tok::Bar) {
                let gstart = self.start();
                let guard = self.expr()?;
                let guard_text = self.text_from(gstart);
                self.expect(sep)?;
                let bstart = self.start();
                let body = self.expr()?;
                let body_text = self.text_from(bstart);
                gs.push(Guarded { guard, guard_text, body, body_text });
            }
            Ok(Rhs::Guarded(gs))
        } else {
            self.expect(sep)?;
            let start = self.start();
            let e = self.expr()?;
            Ok(Rhs::Plain(e, self.text_from(start)))
        }
    }

    fn wheres(&mut self) -> PResult<Vec<Decl>> {
        if self.eat(&Tok::Kw(Keyword::Where)) {
            self.block(|p| p.decl())
        } else {
            Ok(Vec::new())
        }
    }

    // -- types ------------------------------------------------------------

    fn type_(&mut self) -> PResult<SType> {
        let t = self.btype()?;
        if self.eat(&Tok::Arrow) {
            Ok(SType::Fun(Box::new(t), Box::new(self.type_()?)))
        } else {
            Ok(t)
        }
    }

    fn btype(&mut self) -> PResult<SType> {
        let head = self.atype()?;
        let mut args = Vec::new();
        while self.at_atype() {
            args.push(self.atype()?);
        }
        match head {
            _ if args.is_empty() => Ok(head),
            SType::Con(c, mut a) => {
                a.extend(args);
                Ok(SType::Con(c, a))
            }
            _ => self.error("a type constructor before type arguments"),
        }
    }

    fn at_atype(&self) -> bool {
        matches!(self.peek(), Tok::ConId(_) | Tok::VarId(_) | Tok::LParen | Tok::LBracket)
    }

    fn atype(&mut self) -> PResult<SType> {
        match self.peek().clone() {
            Tok::ConId(c) => {
                self.bump();
                Ok(SType::Con(c, vec![]))
            }
            Tok::VarId(v) => {
                self.bump();
                Ok(SType::Var(v))
            }
            Tok::LBracket => {
                self.bump();
                let t = self.type_()?;
                self.expect(&Tok::RBracket)?;
                Ok(SType::Con("[]".into(), vec![t]))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(SType::Con("()".into(), vec![]));
                }
                let mut ts = vec![self.type_()?];
                while self.eat(&Tok::Comma) {
                    ts.push(self.type_()?);
                }
                self.expect(&Tok::RParen)?;
                if ts.len() == 1 {
                    Ok(ts.pop().expect("one"))
                } else {
                    Ok(SType::Con(tuple_name(ts.len()), ts))
                }
            }
            _ => self.error("a type"),
        }
    }

    // -- patterns ---------------------------------------------------------

    fn at_bang(&self) -> bool {
        matches!(self.peek(), Tok::VarSym(s) if s == "!")
            && matches!(self.peek_at(1), Tok::VarId(_) | Tok::LParen | Tok::Underscore)
            && !self.toks[(self.i + 1).min(self.toks.len() - 1)].space_before
    }

    fn at_apat(&self) -> bool {
        self.at_bang()
            || matches!(
                self.peek(),
                Tok::VarId(_) | Tok::ConId(_) | Tok::Underscore | Tok::Int(_) | Tok::Char(_) | Tok::Str(_) | Tok::LParen | Tok::LBracket
            )
    }

    pub(crate) fn pat(&mut self) -> PResult<SPat> {
        let left = self.lpat()?;
        if let Tok::ConSym(op) = self.peek().clone() {
            self.bump();
            let right = self.pat()?;
            return Ok(SPat::Con(op, vec![left, right]));
        }
        Ok(left)
    }

    fn lpat(&mut self) -> PResult<SPat> {
        match self.peek().clone() {
            Tok::VarSym(s) if s == "-" => {
                self.bump();
                match self.bump().tok {
                    Tok::Int(n) => Ok(SPat::Int(-n)),
                    _ => self.error("an integer literal"),
                }
            }
            Tok::ConId(c) => {
                self.bump();
                let mut args = Vec::new();
                while self.at_apat() {
                    args.push(self.apat()?);
                }
                Ok(SPat::Con(c, args))
            }
            _ => self.apat(),
        }
    }

    fn apat(&mut self) -> PResult<SPat> {
        if self.at_bang() {
            let pos = self.pos();
            self.bump();
            return match self.apat()? {
                SPat::Var(v) => Ok(SPat::Bang(v)),
                _ => Err(SyntaxError { pos, message: "bang patterns are only supported on variables".into() }),
            };
        }
        match self.peek().clone() {
            Tok::VarId(v) => {
                self.bump();
                if self.eat(&Tok::At) {
                    Ok(SPat::As(v, Box::new(self.apat()?)))
                } else {
                    Ok(SPat::Var(v))
                }
            }
            Tok::ConId(c) => {
                self.bump();
                Ok(SPat::Con(c, vec![]))
            }
            Tok::Underscore => {
                self.bump();
                Ok(SPat::Wild)
            }
            Tok::Int(n) => {
                self.bump();
                Ok(SPat::Int(n))
            }
            Tok::Char(c) => {
                self.bump();
                Ok(SPat::Char(c))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(SPat::Str(s))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(SPat::Con("()".into(), vec![]));
                }
                let mut ps = vec![self.pat()?];
                while self.eat(&Tok::Comma) {
                    ps.push(self.pat()?);
                }
                self.expect(&Tok::RParen)?;
                if ps.len() == 1 {
                    Ok(ps.pop().expect("one"))
                } else {
                    Ok(SPat::Con(tuple_name(ps.len()), ps))
                }
            }
            Tok::LBracket => {
                self.bump();
                let mut ps = Vec::new();
                if !self.eat(&Tok::RBracket) {
                    ps.push(self.pat()?);
                    while self.eat(&Tok::Comma) {
                        ps.push(self.pat()?);
                    }
                    self.expect(&Tok::RBracket)?;
                }
                Ok(ps.into_iter().rev().fold(SPat::Con("[]".into(), vec![]), |acc, p| SPat::Con(":".into(), vec![p, acc])))
            }
            _ => self.error("a pattern"),
        }
    }

    // -- expressions ------------------------------------------------------

    pub(crate) fn expr(&mut self) -> PResult<SExpr> {
        let e = self.infix(0)?;
        if self.eat(&Tok::DColon) {
            let t = self.type_()?;
            return Ok(SExpr::Typed(Box::new(e), t));
        }
        Ok(e)
    }

    /// Operator at the cursor with its expression node and fixity.
    fn peek_op(&self) -> Option<(SExpr, String, usize)> {
        match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Tok::VarSym(s), _, _) => Some((SExpr::Var(s.clone()), s.clone(), 1)),
            (Tok::ConSym(s), _, _) => Some((SExpr::Con(s.clone()), s.clone(), 1)),
            (Tok::Backtick, Tok::VarId(s), Tok::Backtick) => Some((SExpr::Var(s.clone()), s.clone(), 3)),
            (Tok::Backtick, Tok::ConId(s), Tok::Backtick) => Some((SExpr::Con(s.clone()), s.clone(), 3)),
            _ => None,
        }
    }

    fn infix(&mut self, min: u8) -> PResult<SExpr> {
        let mut lhs = if matches!(self.peek(), Tok::VarSym(s) if s == "-") {
            self.bump();
            let operand = self.infix(7)?;
            match operand {
                SExpr::Int(n) => SExpr::Int(-n),
                e => SExpr::Neg(Box::new(e)),
            }
        } else {
            self.lexp()?
        };
        while let Some((node, name, width)) = self.peek_op() {
            let (prec, assoc) = fixity(&name);
            if prec < min || *self.peek_at(width) == Tok::RParen {
                break;
            }
            for _ in 0..width {
                self.bump();
            }
            let next = if assoc == Assoc::Right { prec } else { prec + 1 };
            let rhs = self.infix(next)?;
            lhs = SExpr::app(SExpr::app(node, lhs), rhs);
            if assoc == Assoc::None {
                if let Some((_, n2, _)) = self.peek_op() {
                    if fixity(&n2) == (prec, Assoc::None) {
                        return self.error("parentheses around a non-associative comparison");
                    }
                }
            }
        }
        Ok(lhs)
    }

    fn lexp(&mut self) -> PResult<SExpr> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let mut pats = vec![self.apat()?];
                while self.at_apat() {
                    pats.push(self.apat()?);
                }
                self.expect(&Tok::Arrow)?;
                let body = self.expr()?;
                Ok(SExpr::Lambda(pats, Box::new(body)))
            }
            Tok::Kw(Keyword::Let) => {
                self.bump();
                let decls = self.block(|p| p.decl())?;
                self.expect(&Tok::Kw(Keyword::In))?;
                let body = self.expr()?;
                Ok(SExpr::Let(decls, Box::new(body)))
            }
            Tok::Kw(Keyword::If) => {
                self.bump();
                let c = self.expr()?;
                while self.eat(&Tok::VSemi) {}
                self.expect(&Tok::Kw(Keyword::Then))?;
                let t = self.expr()?;
                while self.eat(&Tok::VSemi) {}
                self.expect(&Tok::Kw(Keyword::Else))?;
                let e = self.expr()?;
                Ok(SExpr::If(Box::new(c), Box::new(t), Box::new(e)))
            }
            Tok::Kw(Keyword::Case) => {
                self.bump();
                let scrut = self.expr()?;
                self.expect(&Tok::Kw(Keyword::Of))?;
                let alts = self.block(|p| {
                    let pat = p.pat()?;
                    let rhs = p.rhs(&Tok::Arrow)?;
                    let wheres = p.wheres()?;
                    Ok(CaseAlt { pat, rhs, wheres })
                })?;
                Ok(SExpr::Case(Box::new(scrut), alts))
            }
            _ => self.fexp(),
        }
    }

    fn at_aexp(&self) -> bool {
        matches!(
            self.peek(),
            Tok::VarId(_) | Tok::ConId(_) | Tok::Int(_) | Tok::Char(_) | Tok::Str(_) | Tok::LParen | Tok::LBracket
        )
    }

    fn fexp(&mut self) -> PResult<SExpr> {
        let mut e = self.aexp()?;
        while self.at_aexp() {
            e = SExpr::app(e, self.aexp()?);
        }
        Ok(e)
    }

    fn aexp(&mut self) -> PResult<SExpr> {
        match self.peek().clone() {
            Tok::VarId(v) => {
                self.bump();
                Ok(SExpr::Var(v))
            }
            Tok::ConId(c) => {
                self.bump();
                Ok(SExpr::Con(c))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(SExpr::Int(n))
            }
            Tok::Char(c) => {
                self.bump();
                Ok(SExpr::Char(c))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(SExpr::Str(s))
            }
            Tok::LBracket => {
                self.bump();
                if self.eat(&Tok::RBracket) {
                    return Ok(SExpr::List(vec![]));
                }
                let first = self.expr()?;
                if self.eat(&Tok::DotDot) {
                    let to = if *self.peek() == Tok::RBracket { None } else { Some(Box::new(self.expr()?)) };
                    self.expect(&Tok::RBracket)?;
                    return Ok(SExpr::EnumFrom(Box::new(first), to));
                }
                let mut es = vec![first];
                while self.eat(&Tok::Comma) {
                    es.push(self.expr()?);
                }
                self.expect(&Tok::RBracket)?;
                Ok(SExpr::List(es))
            }
            Tok::LParen => self.paren(),
            _ => self.error("an expression"),
        }
    }

    fn paren(&mut self) -> PResult<SExpr> {
        self.bump();
        if self.eat(&Tok::RParen) {
            return Ok(SExpr::Con("()".into()));
        }
        if *self.peek() == Tok::Comma {
            let mut n = 1;
            while self.eat(&Tok::Comma) {
                n += 1;
            }
            self.expect(&Tok::RParen)?;
            return Ok(SExpr::Con(tuple_name(n)));
        }
        if let Some((node, name, width)) = self.peek_op() {
            if *self.peek_at(width) == Tok::RParen {
                for _ in 0..=width {
                    self.bump();
                }
                return Ok(node);
            }
            if name != "-" {
                for _ in 0..width {
                    self.bump();
                }
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                return Ok(SExpr::RightSection(Box::new(node), Box::new(e)));
            }
        }
        let first = self.expr()?;
        if let Some((node, _, width)) = self.peek_op() {
            if *self.peek_at(width) == Tok::RParen {
                for _ in 0..=width {
                    self.bump();
                }
                return Ok(SExpr::LeftSection(Box::new(first), Box::new(node)));
            }
        }
        let mut es = vec![first];
        while self.eat(&Tok::Comma) {
            es.push(self.expr()?);
        }
        self.expect(&Tok::RParen)?;
        if es.len() == 1 {
            Ok(es.pop().expect("one"))
        } else {
            Ok(SExpr::Tuple(es))
        }
    }
}

pub fn tuple_name(n: usize) -> String {
    format!("({})", ",".repeat(n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> SExpr {
        SExpr::Var(s.into())
    }

    fn op(o: &str, a: SExpr, b: SExpr) -> SExpr {
        SExpr::app(SExpr::app(v(o), a), b)
    }

    #[test]
    fn precedence() {
        let e = parse_expression("1 + 2 * 3").unwrap();
        assert_eq!(e, op("+", SExpr::Int(1.into()), op("*", SExpr::Int(2.into()), SExpr::Int(3.into()))));
        let e = parse_expression("a ++ b ++ c").unwrap();
        assert_eq!(e, op("++", v("a"), op("++", v("b"), v("c"))));
        let e = parse_expression("f x `div` 2").unwrap();
        assert_eq!(e, op("div", SExpr::app(v("f"), v("x")), SExpr::Int(2.into())));
    }

    #[test]
    fn sections_and_tuples() {
        assert_eq!(parse_expression("(+)").unwrap(), v("+"));
        assert_eq!(parse_expression("(1+)").unwrap(), SExpr::LeftSection(Box::new(SExpr::Int(1.into())), Box::new(v("+"))));
        assert_eq!(parse_expression("(*2)").unwrap(), SExpr::RightSection(Box::new(v("*")), Box::new(SExpr::Int(2.into()))));
        assert_eq!(parse_expression("(-1)").unwrap(), SExpr::Int((-1).into()));
        assert_eq!(parse_expression("(a, b)").unwrap(), SExpr::Tuple(vec![v("a"), v("b")]));
        assert_eq!(parse_expression("(,)").unwrap(), SExpr::Con("(,)".into()));
    }

    #[test]
    fn guarded_clause_texts() {
        let src = "insert x [] = [x]\ninsert x (y:ys) | x<=y = x:y:ys\n                | otherwise = y : insert x ys\n";
        let ds = parse_program(src).unwrap();
        assert_eq!(ds.len(), 2);
        let Decl::Clause(c) = &ds[1] else { panic!() };
        assert_eq!(c.head_text, "insert x (y:ys)");
        let Rhs::Guarded(gs) = &c.rhs else { panic!() };
        assert_eq!(gs[0].guard_text, "x<=y");
        assert_eq!(gs[0].body_text, "x:y:ys");
        assert_eq!(gs[1].body_text, "y : insert x ys");
    }

    #[test]
    fn bang_and_operator_definitions() {
        let ds = parse_program("foldl' f !z (x:xs) = foldl' f (f z x) xs\n(x:xs) ++ ys = x : (xs ++ ys)\n").unwrap();
        let Decl::Clause(c) = &ds[0] else { panic!() };
        assert_eq!(c.pats[1], SPat::Bang("z".into()));
        let Decl::Clause(c) = &ds[1] else { panic!() };
        assert_eq!(c.name, "++");
        assert_eq!(c.pats.len(), 2);
    }

    #[test]
    fn where_and_data() {
        let src = "data T a = L | N (T a) a (T a) deriving Show\nf x = y + z\n  where y = x\n        z = 1\n";
        let ds = parse_program(src).unwrap();
        let Decl::Data(d) = &ds[0] else { panic!() };
        assert_eq!(d.constructors[1].1.len(), 3);
        let Decl::Clause(c) = &ds[1] else { panic!() };
        assert_eq!(c.wheres.len(), 2);
    }

    #[test]
    fn error_has_position() {
        let err = parse_program("f x = (x +\n").unwrap_err();
        assert_eq!(err.pos.line, 2);
        let err = parse_expression("1 +").unwrap_err();
        assert!(err.message.contains("expected"), "{}", err.message);
    }

    #[test]
    fn let_case_if() {
        parse_expression("let x = 1; y = 2 in x + y").unwrap();
        parse_expression("case xs of { [] -> 0; (y:_) -> y }").unwrap();
        parse_expression("if a then b else c").unwrap();
        parse_program("f xs = case xs of\n  [] -> 0\n  (y:_) -> y\n").unwrap();
    }
}
