//! Tokenizer and indentation layout.

use num_bigint::BigInt;

use crate::error::{Pos, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    VarId(String),
    ConId(String),
    VarSym(String),
    ConSym(String),
    Int(BigInt),
    Char(char),
    Str(String),
    Kw(Keyword),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    LBrace,
    RBrace,
    Backtick,
    Equals,
    Bar,
    Arrow,
    Backslash,
    At,
    DColon,
    DotDot,
    Underscore,
    /// Braces and semicolons inserted by the layout rule.
    VLBrace,
    VSemi,
    VRBrace,
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    Let,
    In,
    Where,
    Case,
    Of,
    If,
    Then,
    Else,
    Data,
    Type,
    Deriving,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::VarId(s) | Tok::ConId(s) | Tok::VarSym(s) | Tok::ConSym(s) => format!("`{s}`"),
            Tok::Int(n) => format!("literal {n}"),
            Tok::Char(c) => format!("literal {c:?}"),
            Tok::Str(s) => format!("literal {s:?}"),
            Tok::Kw(k) => format!("keyword `{}`", format!("{k:?}").to_lowercase()),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Backtick => "`` ` ``".into(),
            Tok::Equals => "`=`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::At => "`@`".into(),
            Tok::DColon => "`::`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Underscore => "`_`".into(),
            Tok::VLBrace => "start of block".into(),
            Tok::VSemi => "new declaration".into(),
            Tok::VRBrace => "end of block".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte range in the source.
    pub start: usize,
    pub end: usize,
    pub space_before: bool,
}

fn keyword(s: &str) -> Option<Keyword> {
    Some(match s {
        "let" => Keyword::Let,
        "in" => Keyword::In,
        "where" => Keyword::Where,
        "case" => Keyword::Case,
        "of" => Keyword::Of,
        "if" => Keyword::If,
        "then" => Keyword::Then,
        "else" => Keyword::Else,
        "data" => Keyword::Data,
        "type" => Keyword::Type,
        "deriving" => Keyword::Deriving,
        _ => return None,
    })
}

fn is_symbol_char(c: char) -> bool {
    "!#$%&*+./<=>?@\\^|-~:".contains(c)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct Lexer<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.i).map(|&(o, _)| o).unwrap_or(self.src.len())
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_at(0)?;
        self.i += 1;
        match c {
            '\n' => {
                self.line += 1;
                self.col = 1;
            }
            '\t' => self.col = ((self.col - 1) / 8 + 1) * 8 + 1,
            _ => self.col += 1,
        }
        Some(c)
    }

    fn err(&self, pos: Pos, message: impl Into<String>) -> SyntaxError {
        SyntaxError { pos, message: message.into() }
    }

    /// Skips whitespace and comments; reports whether anything was skipped.
    fn skip_trivia(&mut self) -> Result<bool, SyntaxError> {
        let mut skipped = false;
        loop {
            match self.peek_at(0) {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('-') if self.peek_at(1) == Some('-') => {
                    let mut k = 2;
                    while self.peek_at(k) == Some('-') {
                        k += 1;
                    }
                    if self.peek_at(k).is_some_and(is_symbol_char) {
                        return Ok(skipped);
                    }
                    while self.peek_at(0).is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                Some('{') if self.peek_at(1) == Some('-') => {
                    let start = self.pos();
                    self.bump();
                    self.bump();
                    let mut depth = 1;
                    while depth > 0 {
                        match (self.peek_at(0), self.peek_at(1)) {
                            (None, _) => return Err(self.err(start, "unterminated block comment")),
                            (Some('-'), Some('}')) => {
                                depth -= 1;
                                self.bump();
                                self.bump();
                            }
                            (Some('{'), Some('-')) => {
                                depth += 1;
                                self.bump();
                                self.bump();
                            }
                            _ => {
                                self.bump();
                            }
                        }
                    }
                }
                _ => return Ok(skipped),
            }
            skipped = true;
        }
    }

    fn escape(&mut self, quote_pos: Pos) -> Result<char, SyntaxError> {
        let c = self.bump().ok_or_else(|| self.err(quote_pos, "unterminated literal"))?;
        Ok(match c {
            'n' => '\n',
            't' => '\t',
            'r' => '\r',
            '0' => '\0',
            '\\' => '\\',
            '\'' => '\'',
            '"' => '"',
            other => return Err(self.err(quote_pos, format!("unknown escape sequence \\{other}"))),
        })
    }

    fn token(&mut self) -> Result<Option<(Tok, Pos, usize)>, SyntaxError> {
        let pos = self.pos();
        let start = self.offset();
        let Some(c) = self.peek_at(0) else { return Ok(None) };
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(d) = self.peek_at(0).filter(|d| d.is_ascii_digit()) {
                s.push(d);
                self.bump();
            }
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(d) = self.peek_at(0).filter(|&d| is_ident_char(d)) {
                s.push(d);
                self.bump();
            }
            if s == "_" {
                Tok::Underscore
            } else if let Some(k) = keyword(&s) {
                Tok::Kw(k)
            } else if c.is_uppercase() {
                Tok::ConId(s)
            } else {
                Tok::VarId(s)
            }
        } else if c == '\'' {
            self.bump();
            let ch = match self.bump() {
                Some('\\') => self.escape(pos)?,
                Some(ch) if ch != '\'' && ch != '\n' => ch,
                _ => return Err(self.err(pos, "malformed character literal")),
            };
            if self.bump() != Some('\'') {
                return Err(self.err(pos, "unterminated character literal"));
            }
            Tok::Char(ch)
        } else if c == '"' {
            self.bump();
            let mut s = String::new();
            loop {
                match self.bump() {
                    Some('"') => break,
                    Some('\\') => s.push(self.escape(pos)?),
                    Some('\n') | None => return Err(self.err(pos, "unterminated string literal")),
                    Some(ch) => s.push(ch),
                }
            }
            Tok::Str(s)
        } else if is_symbol_char(c) {
            let mut s = String::new();
            while let Some(d) = self.peek_at(0).filter(|&d| is_symbol_char(d)) {
                s.push(d);
                self.bump();
            }
            match s.as_str() {
                "=" => Tok::Equals,
                "|" => Tok::Bar,
                "->" => Tok::Arrow,
                "\\" => Tok::Backslash,
                "@" => Tok::At,
                "::" => Tok::DColon,
                ".." => Tok::DotDot,
                _ if s.starts_with(':') => Tok::ConSym(s),
                _ => Tok::VarSym(s),
            }
        } else {
            self.bump();
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '`' => Tok::Backtick,
                other => return Err(self.err(pos, format!("unexpected character {other:?}"))),
            }
        };
        Ok(Some((tok, pos, start)))
    }
}

/// Splits source text into tokens, without layout processing.
pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut lx = Lexer { src, chars: src.char_indices().collect(), i: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        let space = lx.skip_trivia()? || lx.i == 0;
        match lx.token()? {
            Some((tok, pos, start)) => out.push(Token { tok, pos, start, end: lx.offset(), space_before: space }),
            None => {
                let pos = lx.pos();
                out.push(Token { tok: Tok::Eof, pos, start: src.len(), end: src.len(), space_before: true });
                return Ok(out);
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Context {
    Explicit,
    Implicit { column: usize, depth: usize, is_let: bool },
}

fn virtual_token(tok: Tok, at: &Token) -> Token {
    Token { tok, pos: at.pos, start: at.start, end: at.start, space_before: true }
}

/// Inserts the braces and semicolons implied by indentation.
///
/// Blocks open after `where`, `let` and `of` (and at the top of a module)
/// unless an explicit `{` follows. A line starting at a block's column
/// begins a new item; a line starting left of it closes the block. `in`,
/// closing brackets and commas also close blocks opened inside them.
pub fn layout(tokens: Vec<Token>, top_level: bool) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len() * 2);
    let mut stack: Vec<Context> = Vec::new();
    let mut depth = 0usize;
    let mut expect_block: Option<bool> = if top_level { Some(false) } else { None };
    let mut last_line = 0usize;

    for t in tokens {
        let first_on_line = t.pos.line != last_line;
        last_line = t.pos.line;

        if t.tok == Tok::Eof {
            if expect_block.is_some() {
                out.push(virtual_token(Tok::VLBrace, &t));
                out.push(virtual_token(Tok::VRBrace, &t));
            }
            while let Some(ctx) = stack.pop() {
                if let Context::Implicit { .. } = ctx {
                    out.push(virtual_token(Tok::VRBrace, &t));
                }
            }
            out.push(t);
            break;
        }

        let mut opened_here = false;
        if let Some(is_let) = expect_block.take() {
            if t.tok == Tok::LBrace {
                stack.push(Context::Explicit);
                out.push(t);
                continue;
            }
            let enclosing = stack.iter().rev().find_map(|c| match c {
                Context::Implicit { column, .. } => Some(*column),
                Context::Explicit => None,
            });
            if enclosing.is_none_or(|c| t.pos.column > c) || (top_level && stack.is_empty()) {
                out.push(virtual_token(Tok::VLBrace, &t));
                stack.push(Context::Implicit { column: t.pos.column, depth, is_let });
                opened_here = true;
            } else {
                out.push(virtual_token(Tok::VLBrace, &t));
                out.push(virtual_token(Tok::VRBrace, &t));
            }
        }

        if first_on_line && !opened_here {
            while let Some(Context::Implicit { column, .. }) = stack.last() {
                if t.pos.column < *column {
                    out.push(virtual_token(Tok::VRBrace, &t));
                    stack.pop();
                } else {
                    if t.pos.column == *column {
                        out.push(virtual_token(Tok::VSemi, &t));
                    }
                    break;
                }
            }
        }

        match &t.tok {
            Tok::Kw(Keyword::In) => {
                if let Some(Context::Implicit { is_let: true, .. }) = stack.last() {
                    out.push(virtual_token(Tok::VRBrace, &t));
                    stack.pop();
                }
            }
            Tok::RParen | Tok::RBracket | Tok::Comma => {
                while let Some(Context::Implicit { depth: d, .. }) = stack.last() {
                    if depth == 0 || *d < depth {
                        break;
                    }
                    out.push(virtual_token(Tok::VRBrace, &t));
                    stack.pop();
                }
            }
            Tok::RBrace => {
                while let Some(Context::Implicit { .. }) = stack.last() {
                    out.push(virtual_token(Tok::VRBrace, &t));
                    stack.pop();
                }
                stack.pop();
            }
            _ => {}
        }

        match &t.tok {
            Tok::LParen | Tok::LBracket => depth += 1,
            Tok::RParen | Tok::RBracket => depth = depth.saturating_sub(1),
            Tok::Kw(Keyword::Where) | Tok::Kw(Keyword::Of) => expect_block = Some(false),
            Tok::Kw(Keyword::Let) => expect_block = Some(true),
            _ => {}
        }
        out.push(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        layout(tokenize(src).unwrap(), true).into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn symbols_and_comments() {
        let toks = tokenize("x <= y -- c\n {- n {- e -} -} x:xs").unwrap();
        let t: Vec<Tok> = toks.into_iter().map(|t| t.tok).collect();
        assert_eq!(
            t,
            vec![
                Tok::VarId("x".into()),
                Tok::VarSym("<=".into()),
                Tok::VarId("y".into()),
                Tok::VarId("x".into()),
                Tok::ConSym(":".into()),
                Tok::VarId("xs".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn where_block_layout() {
        let t = kinds("f x = y\n  where y = x\n        z = 1\ng = 2");
        let semis = t.iter().filter(|t| **t == Tok::VSemi).count();
        let opens = t.iter().filter(|t| **t == Tok::VLBrace).count();
        let closes = t.iter().filter(|t| **t == Tok::VRBrace).count();
        assert_eq!((semis, opens, closes), (2, 2, 2));
    }

    #[test]
    fn let_closed_by_in() {
        let t = layout(tokenize("let x = 1 in x").unwrap(), false);
        let k: Vec<Tok> = t.into_iter().map(|t| t.tok).collect();
        assert_eq!(k[1], Tok::VLBrace);
        assert_eq!(k[5], Tok::VRBrace);
        assert_eq!(k[6], Tok::Kw(Keyword::In));
    }

    #[test]
    fn positions_are_one_based() {
        let toks = tokenize("a\n  b").unwrap();
        assert_eq!(toks[1].pos, Pos { line: 2, column: 3 });
    }
}
