//! Exact computational tools for toric Landau–Ginzburg models.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`laurent`]: sparse Laurent polynomials over the rationals, with a parser
//!   and canonical printer.
//! - [`polytope`]: exact lattice polytopes (hulls, faces, Minkowski sums,
//!   polygon decompositions, lattice equivalence).
//! - [`period`]: period sequences, i.e. constant terms of powers.
//! - [`mutation`]: cluster-type and toric changes of variables.
//! - [`constructions`]: Hori–Vafa models, Markov triples, the mutation chain
//!   of P² and the catalog of worked examples.
//! - [`degeneration`]: the cone-slicing polytope mutation and its
//!   polynomial counterpart.
//! - [`minkowski`]: face restrictions, edge binomials and Minkowski
//!   presentations.
//!
//! All arithmetic is exact. With the `parallel` feature (on by default) the
//! data-parallel inner loops run on rayon; [`Execution`] selects the path at
//! run time so both can be compared.

pub mod constructions;
pub mod degeneration;
mod exec;
pub mod laurent;
pub mod linalg;
pub mod minkowski;
pub mod mutation;
pub mod period;
pub mod polytope;

pub use exec::Execution;
pub use laurent::{ExponentVector, LaurentError, LaurentPoly, Rational, Term};
pub use polytope::{Face, LatticePolytope, PolytopeError, RationalPolytope};

