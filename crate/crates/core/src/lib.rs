//! Computation with double cosets `CfC` of finitely generated subgroups of
//! finite-rank free groups.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`word`]: freely reduced words, free reduction and cancellation
//!   accounting (the `cn` function);
//! - [`graph`]: folded subgroup graphs (Stallings automata) with membership,
//!   geodesic spanning trees, Schreier transversals, products and conjugates;
//! - [`nielsen`]: Nielsen bases read off a geodesic tree, the piece alphabet
//!   of surviving subwords, and admissible factorizations;
//! - [`automaton`]: finite-state machinery over the group alphabet —
//!   determinization, minimization, reduced-word acceptors, saturation
//!   (Benois) reduction, bounded-cancellation concatenation, cones, and the
//!   double-coset acceptor;
//! - [`coset`]: everything about `CfC` — stabilizers, coset equations,
//!   essential-coset enumeration, relative transversals, unique normal forms
//!   and cancellation-bound verification;
//! - [`oracle`]: deliberately naive brute-force references used by tests and
//!   verification reports.

pub mod automaton;
pub mod coset;
pub mod graph;
pub mod nielsen;
pub mod oracle;
pub mod word;

pub use graph::{SpanningTree, SubgroupGraph};
pub use word::{cn, Alphabet, Letter, Word};
