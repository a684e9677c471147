//! Exact tools for conjugacy width in `SL_n` over commutative rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`] – the four supported rings, exact elements, ideals, Bezout.
//! * [`matrix`] – square matrices, elementary matrices, commutators,
//!   congruence levels and the affine block embeddings.
//! * [`elemgen`] – factorisation of `SL_n` matrices into elementary ones.
//! * [`widthred`] – the staged reduction of a non-central congruence matrix
//!   to a non-trivial elementary matrix in a prescribed position, with a
//!   replayable trace whose word length is certified.
//! * [`norms`] – conjugation-invariant norms, their combinators and an
//!   axiom-checking harness.
//! * [`census`] – brute-force enumeration of finite `SL_n`, breadth-first
//!   width minima, sum-set growth and the five-term sum identity.

pub mod census;
pub mod elemgen;
pub mod exec;
pub mod matrix;
pub mod norms;
pub mod ring;
pub mod widthred;

pub use exec::Execution;
pub use matrix::SqMatrix;
pub use ring::{Ideal, RingElement, RingSpec};
