//! Exact evaluation of sl_n web and link invariants.
//!
//! Diagrams are written as ladders: words in divided powers of quantum sl_m
//! generators acting on `Λ_q^N(C^n ⊗ C^m)`. Crossings are smoothed by rescaled
//! quantum Weyl group elements, and annular diagrams use an evaluation
//! representation of the affine algebra.

#![no_std]

extern crate alloc;

pub mod affine;
pub mod braiding;
pub mod coeffring;
mod error;
pub mod ladder;
pub mod moyreduce;
pub mod repcore;
pub mod weights;

pub use coeffring::{qbinom, qfact, qint, Exp, GaussInt, Generator, RingElem};
pub use error::Error;
pub use weights::{GlSequence, Object};
