//! The two infinite counterexamples, the rank gadget, and seeded instance generators.

mod ex1;
mod ex2;
mod gadget;
mod generate;

pub use ex1::*;
pub use ex2::*;
pub use gadget::*;
pub use generate::*;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::ballspace::Witness;
use crate::Result;

/// One checked claim of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: String,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of a verifier: clauses in order, plus any certificates produced on the way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub clauses: Vec<Clause>,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), clauses: Vec::new(), witnesses: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    /// Records the outcome of `check`; an error becomes a failed clause with its message.
    pub fn check(&mut self, id: &str, claim: &str, check: impl FnOnce() -> Result<String>) {
        let (passed, detail) = match check() {
            Ok(d) => (true, d),
            Err(e) => (false, format!("{e}")),
        };
        self.clauses.push(Clause { id: id.into(), claim: claim.into(), passed, detail });
    }
}

pub(crate) fn fail(clause: &str, msg: String) -> crate::Error {
    crate::Error::Certificate { clause: clause.into(), msg }
}
