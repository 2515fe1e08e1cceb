//! Rank analysis of ACI-matrices (matrices of affine entries in which no
//! indeterminate occurs in two columns) and their WST-decomposition.

pub mod aci_core;
pub mod cli;
pub mod constant_rank;
pub mod decomposition;
pub mod document;
pub mod error;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rank_engine;
pub mod report;
pub mod scalars;

pub use error::{Error, Result};
