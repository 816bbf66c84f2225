//! Exact computation with self-similar groups and semigroups given by finite
//! automata.

pub mod abelian;
pub mod catalog;
pub mod cli;
pub mod contraction;
pub mod error;
pub mod group;
pub mod invsemi;
pub mod mealy;
pub mod perm;
pub mod schreier;
pub mod spectra;
pub mod words;

pub use error::{Error, Result};
