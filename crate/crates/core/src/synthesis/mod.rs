//! Realizability checking and strategy construction.
//!
//! Synthesis is a black box behind [`SynthesisBackend`]. The crate ships a
//! small exact backend ([`Builtin`]) that searches for finite-state machines
//! of bounded size, and an adapter for external tools ([`External`]) that
//! speaks the JSON format of [`json`].

mod builtin;
mod external;
pub mod json;
mod machine;
mod verify;

use crate::automata::AutomataError;
use crate::ltl::{ContextError, SpecContext};

pub use builtin::{synthesize_builtin, BuiltinOptions};
pub use external::synthesize_external;
pub(crate) use machine::{positions, remap};
pub use machine::{Counterstrategy, Strategy, MAX_MACHINE_PROPS};
pub use verify::{verify, verify_counterstrategy};

/// Outcome of a synthesis call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthesisResult {
    Realizable(Strategy),
    Unrealizable(Counterstrategy),
    /// The backend gave up; the string says why.
    Unknown(String),
}

impl SynthesisResult {
    pub fn verdict(&self) -> Verdict {
        match self {
            SynthesisResult::Realizable(_) => Verdict::Realizable,
            SynthesisResult::Unrealizable(_) => Verdict::Unrealizable,
            SynthesisResult::Unknown(_) => Verdict::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Realizable,
    Unrealizable,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Realizable => "REALIZABLE",
            Verdict::Unrealizable => "UNREALIZABLE",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("proposition `{0}` is not a variable of the machine")]
    UnknownProp(String),
    #[error("invalid machine: {0}")]
    Machine(String),
    #[error("product exploration exceeded {0} states")]
    SearchLimit(usize),
    #[error("synthesis tool failed: {0}")]
    Process(String),
    #[error("malformed tool output: {0}")]
    Format(String),
    #[error("returned machine does not verify: {0}")]
    Verification(String),
}

/// Something that decides realizability of a specification.
pub trait SynthesisBackend: Sync {
    fn synthesize(&self, ctx: &SpecContext) -> Result<SynthesisResult, SynthesisError>;
}

/// The bounded-search backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct Builtin(pub BuiltinOptions);

impl SynthesisBackend for Builtin {
    fn synthesize(&self, ctx: &SpecContext) -> Result<SynthesisResult, SynthesisError> {
        synthesize_builtin(ctx, &self.0)
    }
}

/// An external tool invoked as `<command> <spec file>`.
#[derive(Debug, Clone)]
pub struct External {
    pub command: String,
}

impl SynthesisBackend for External {
    fn synthesize(&self, ctx: &SpecContext) -> Result<SynthesisResult, SynthesisError> {
        synthesize_external(ctx, &self.command)
    }
}

#[cfg(test)]
mod tests;
