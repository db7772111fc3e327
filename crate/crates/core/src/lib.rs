//! Constant-weight codes built from uniquely decomposable lattice elements.
//!
//! - [`gf_poly`]: prime fields and polynomials, irreducibility, hex codec.
//! - [`ideal_lattice`]: constituent pools, compose/decompose.
//! - [`finite_lattice`]: explicit finite lattices and decomposition checks.
//! - [`cwcode`]: codes, distances, decoding, puncturing, rate.
//! - [`bounds`]: sphere, Singleton-type and Johnson bounds.
//! - [`clique_search`]: compatibility graphs and maximum cliques.
//! - [`saf_sim`]: store-and-forward transmission over random DAGs.

pub mod bounds;
pub mod clique_search;
pub mod cwcode;
pub mod finite_lattice;
pub mod gf_poly;
pub mod ideal_lattice;
pub mod saf_sim;
