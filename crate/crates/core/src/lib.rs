//! Exact-arithmetic realization of the one-mode polynomial Heisenberg group
//! `Heis(1,n)`, its current algebra over step functions, the partition-indexed
//! inductive system of localized Weyl *-algebras, and Fock state evaluation.

pub mod algebra;
pub mod error;
pub mod fock;
pub mod group;
pub mod json;
pub mod lie;
pub mod oscillator;
pub mod poly;
pub mod regions;
pub mod scalar;

pub use error::{Error, Result};
