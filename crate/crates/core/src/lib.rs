//! Lattices of equivalence relations on finite sets.
//!
//! Partitions of `{0,…,n-1}` with their meet, join, refinement order and
//! relational composition; executable checks of the generalized Dedekind rule
//! and of permutability closure; sublattices and their intervals; and
//! certificates for the transposition isomorphism between
//! `⟦θ, η ∨ θ⟧_L` and the `θ`-permuting part of `⟦η ∧ θ, η⟧_L`.

pub mod cli;
pub mod error;
pub mod laws;
pub mod lattice;
pub mod partition;
pub mod relation;
pub mod suites;
pub mod transposition;

pub use error::{Error, Result, Violation};
pub use lattice::{certify_iso, IntervalSlice, IsoCertificate, IsoChecks, SubLattice};
pub use partition::{enumerate_partitions, enumerate_partitions_capped, Partition, DEFAULT_MAX_N};
pub use relation::BinaryRelation;
pub use transposition::{
    classical_transposition_check, phi, psi, search_necessity_witness, verify_transposition,
    NecessityWitness, SearchOutcome, TranspositionCertificate,
};
