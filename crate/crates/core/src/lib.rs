//! Exact computation of Johnson and Morita homomorphisms on the nilpotent
//! truncations of a surface group, with free nilpotent Lie algebra homology
//! and the extended Hochschild–Serre differential.

pub mod bar;
pub mod ce;
pub mod cli;
pub mod config;
pub mod error;
pub mod hall;
pub mod homs;
pub mod linalg;
pub mod malcev;
pub mod rational;
pub mod tensor;
pub mod word;

pub use error::{Error, Result};
