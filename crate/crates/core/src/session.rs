//! Interactive stepping of one expression against one program.

use std::sync::Arc;

use crate::error::Error;
use crate::program::Program;
use crate::trace::{TraceEntry, TraceOptions, TraceStatus, Tracer};

pub struct Session {
    tracer: Tracer,
}

impl Session {
    /// Loads, checks and prepares `expr` for stepping.
    pub fn create(program: &str, expr: &str, options: TraceOptions) -> Result<Session, Error> {
        let p = Arc::new(Program::load(program)?);
        let ep = p.entry(expr)?;
        Ok(Session { tracer: Tracer::new(p, &ep, options) })
    }

    pub fn initial(&self) -> &TraceEntry {
        &self.tracer.entries()[0]
    }

    /// Up to `n` further entries; none once the trace has ended.
    pub fn step(&mut self, n: usize) -> Vec<TraceEntry> {
        self.tracer.step_entries(n).to_vec()
    }

    pub fn force(&mut self) {
        self.tracer.force();
    }

    pub fn entries(&self) -> &[TraceEntry] {
        self.tracer.entries()
    }

    pub fn status(&self) -> &TraceStatus {
        self.tracer.status()
    }

    pub fn steps(&self) -> u64 {
        self.tracer.config().steps
    }

    pub fn fuel_remaining(&self) -> u64 {
        self.tracer.options().fuel.saturating_sub(self.steps())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stepping_in_chunks_equals_full_run() {
        let prog = "insert x [] = [x]\ninsert x (y:ys) | x<=y = x:y:ys\n                | otherwise = y:insert x ys\n";
        let mut s = Session::create(prog, "insert 3 [1,2,4]", TraceOptions::default()).unwrap();
        let mut all = vec![s.initial().clone()];
        loop {
            let got = s.step(2);
            if got.is_empty() {
                break;
            }
            all.extend(got);
        }
        assert_eq!(all, s.entries());
        assert_eq!(s.status().label(), "done");
        assert!(s.step(5).is_empty());
    }

    #[test]
    fn errors_are_reported() {
        assert!(Session::create("f x = x + 'c'\n", "f 1", TraceOptions::default()).is_err());
        assert!(Session::create("", "", TraceOptions::default()).is_err());
    }
}
