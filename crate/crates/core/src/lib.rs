//! Computational Bass-Serre theory over decidable group backends.
//!
//! The crate is organized along the pipeline it implements:
//!
//! - [`base_groups`]: the word problem, subgroup membership with witnesses,
//!   coset transversals, element orders and injectivity checks for finite,
//!   finitely generated abelian, free and graph-of-groups backends.
//! - [`graph_of_groups`]: the decorated-graph data model, Britton normal
//!   forms for fundamental-group words, the edit operations (collapse,
//!   substitute, reduce, one-edge splittings) and fingerprint oracles that
//!   certify edits preserve the fundamental group.
//! - [`tree_action`]: elliptic/hyperbolic classification of elements and
//!   subgroups on Bass-Serre trees, pair types of splittings, invariant-line
//!   cores and quotient cores of subgroup actions.
//! - [`core_complex`]: square complexes of groups, the finite core of the
//!   diagonal action on a product of two trees, Van Kampen cutting, square
//!   pruning and enclosing-group extraction with base 2-orbifolds.
//! - [`jsj_engine`]: orchestration over a finite catalog of splittings:
//!   classification matrices, catalog-relative minimality, refinement to
//!   minimal splittings, enclosing decompositions and the refinement loop
//!   with accessibility guards.
//!
//! Everything is deterministic: orderings derive from declaration order,
//! and identical inputs produce identical outputs. Oracles are budgeted and
//! fail loudly (`OracleTruncation`, `BudgetExhausted`, `CapExceeded`)
//! rather than guessing.

pub mod base_groups;
pub mod brute;
pub mod config;
pub mod core_complex;
pub mod error;
pub mod graph_of_groups;
pub mod jsj_engine;
pub mod tree_action;

pub use config::{Budgets, EngineConfig};
pub use error::{Error, Result};
