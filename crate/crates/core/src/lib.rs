//! Specification decomposition and modular synthesis for reactive systems.
//!
//! Specifications are LTL formulas over declared inputs and outputs, or
//! nondeterministic Büchi automata. The crate splits them into
//! subspecifications over disjoint outputs, synthesizes each part and
//! composes the results into a strategy for the whole specification.

pub mod automata;
pub mod decomposition;
pub mod ltl;
pub mod modular;
pub mod synthesis;
