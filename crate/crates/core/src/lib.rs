//! Exact arithmetic toolkit for Erdős matrices.
//!
//! An Erdős matrix is a bistochastic matrix whose squared Frobenius norm
//! equals its maxtrace, the largest diagonal sum taken along any permutation.
//! This crate provides the pieces needed to find all of them up to row and
//! column permutations and transposition:
//!
//! - [`exactnum`]: rational scalars and dense matrices with exact elimination.
//! - [`skeleton`]: zero/nonzero patterns, their partial order, canonical
//!   forms and total-support testing.
//! - [`perms`]: permutations, inner permutations of a pattern and Birkhoff
//!   decompositions.
//! - [`erdos`]: maxtrace, the per-skeleton candidate construction and
//!   verification of records.
//! - [`rcds`]: the `u_i + v_j` decomposition of restricted common diagonal
//!   sum matrices and the outer-permutation criterion.
//! - [`families`]: closed-form constructions of known RCDS families.
//! - [`enumerate`]: the sequential building blocks of the skeleton sweep.
//!
//! The crate is `no_std` and only needs `alloc`. IO, parallel drivers and
//! file formats live in the companion `erdos` crate.

#![no_std]

extern crate alloc;

pub mod enumerate;
pub mod erdos;
mod error;
pub mod exactnum;
pub mod families;
pub mod perms;
pub mod rcds;
pub mod skeleton;

pub use error::Error;
pub use exactnum::{RatMatrix, RatVector, Rational};
pub use perms::Permutation;
pub use skeleton::{CanonicalKey, Skeleton};

pub type Result<T, E = Error> = core::result::Result<T, E>;
