//! Solving and analysing 3-CNF problems through functional descriptors:
//! triangular families of GF(2) polynomials whose sequential image is the
//! solution set.
//!
//! - [`anf`]: polynomials in algebraic normal form.
//! - [`tmatrix`]: ternary (0/1/neutral) matrices of assignments.
//! - [`descriptor`]: descriptors, their merge, and clause-by-clause solving.
//! - [`preprocess`]: variable relabeling, polarity flips and trajectory permutation.
//! - [`randmodel`]: the exact-uniform random model, its generator and formulas.
//! - [`dimacs`], [`oracle`]: file format and brute-force reference answers.

pub mod anf;
pub mod cnf;
pub mod descriptor;
pub mod dimacs;
pub mod oracle;
pub mod preprocess;
pub mod randmodel;
pub mod tmatrix;

pub use anf::AnfPoly;
pub use cnf::{Clause, Lit, Problem};
pub use descriptor::{Descriptor, DescriptorVector};
pub use tmatrix::TernaryMatrix;
