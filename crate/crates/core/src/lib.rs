//! Tracing interpreter for a lazy Haskell subset.
//!
//! Source programs are translated into a small pattern-matching calculus
//! whose terms are evaluated either by a recursive big-step evaluator or by
//! an abstract machine. The machine's transitions are grouped into
//! textbook-style trace entries by [`trace`].

pub mod bigstep;
pub mod error;
pub mod frontend;
pub mod machine;
pub mod prelude;
pub mod prim;
pub mod program;
pub mod render;
pub mod session;
pub mod syntax;
pub mod trace;
pub mod types;

pub use error::{Diagnostic, Error, RuntimeError};
pub use program::{EntryPoint, Program};
pub use syntax::{Bindings, Expr, Matching, Name, NameSupply, Pattern};
pub use trace::{TraceEntry, TraceOptions, TraceStatus, Tracer};
