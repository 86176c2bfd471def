//! Splitting specifications into independent subspecifications.
//!
//! Three routes are offered: exact decomposition of Büchi automata
//! ([`decompose_nba`]), the classical LTL decomposition along the output
//! dependency graph ([`decompose_ltl`]), and LTL decomposition with
//! assumption dropping ([`decompose_ltl_optimized`],
//! [`decompose_ltl_conjuncts`], [`decompose_guarded`]).

mod graph;
mod ltl;
pub mod manifest;
mod nba;

use std::fmt;
use std::str::FromStr;

use crate::automata::AutomataError;
use crate::ltl::SpecContext;

pub use graph::{build_dependency_graph, connected_components, DependencyGraph};
pub use ltl::{
    decompose_guarded, decompose_ltl, decompose_ltl_conjuncts, decompose_ltl_optimized, decomposition_critical_props,
    GuardedPart, ImplicationCheck,
};
pub use manifest::{Manifest, ManifestError, ManifestPart};
pub use nba::{decompose_nba, decompose_nba_with, find_split};

/// One synthesis subtask of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspecification {
    /// The subformula with the inputs and outputs occurring in it.
    pub ctx: SpecContext,
    /// Sorted indices of the source conjuncts this subspecification draws
    /// from; what they index is documented by each decomposition function.
    pub origin: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("specification is not in strict assume-guarantee form")]
    NotAssumeGuarantee,
    #[error("specification contains no implication")]
    NoImplication,
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// Which decomposition algorithm to run on an LTL specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Dependency-graph decomposition without assumption dropping.
    Ltl,
    /// Dependency-graph decomposition followed by assumption dropping.
    #[default]
    LtlOpt,
    /// Exact decomposition of the specification's Büchi automaton.
    Nba,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ltl => "ltl",
            Mode::LtlOpt => "ltl-opt",
            Mode::Nba => "nba",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ltl" => Ok(Mode::Ltl),
            "ltl-opt" => Ok(Mode::LtlOpt),
            "nba" => Ok(Mode::Nba),
            other => Err(format!("unknown mode `{other}` (expected ltl, ltl-opt or nba)")),
        }
    }
}

/// Decomposes an LTL specification with [`Mode::Ltl`] or [`Mode::LtlOpt`],
/// dropping assumptions without a realizability check. `Mode::Nba` is
/// treated like `Mode::Ltl`; automata go through [`decompose_nba`].
pub fn decompose_spec(ctx: &SpecContext, mode: Mode) -> Vec<Subspecification> {
    match mode {
        Mode::Ltl | Mode::Nba => decompose_ltl(ctx),
        Mode::LtlOpt => {
            let mut always = |_: &SpecContext, _: &crate::ltl::AgStructure| {
                Ok::<_, std::convert::Infallible>(ImplicationCheck::<()>::Droppable)
            };
            decompose_guarded(ctx, &mut always)
                .unwrap_or_else(|e| match e {})
                .into_iter()
                .map(|p| p.spec)
                .collect()
        }
    }
}
