//! Workbench for automatic (FA-presentable) abelian groups.
//!
//! * [`automaton`]: synchronous multi-tape automata with padding, Boolean
//!   operations, projection, minimization and exact word counting.
//! * [`presentation`]: automatic presentations of `Z`, `⊕Z/pZ`, `Z(p^∞)`,
//!   `Z[1/n]` and finite direct sums, with exact codecs.
//! * [`logic`]: first-order formulas (with `∃^∞` and modular counting
//!   quantifiers) compiled to automata.
//! * [`growth`]: the level sets `A_n = D^{≤l0+nr}` and exact audits of their
//!   doubling, divisibility and norm-jump behaviour.
//! * [`addcomb`]: p-adic norms, progressions, brute-force covering ratios and
//!   lattice-point audits.

pub mod addcomb;
pub mod automaton;
pub mod corpus;
pub mod growth;
pub mod logic;
pub mod presentation;
mod error;
pub mod report;

pub use automaton::{Alphabet, Automaton, CountTable, Letter, ProductKind, Sym};
pub use presentation::{GroupElement, GroupSpec, Presentation};
pub use error::{Error, Result};
