//! Source language: lexing, layout, parsing and translation to the core
//! calculus.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod translate;

pub use parser::{parse_expression, parse_program};
