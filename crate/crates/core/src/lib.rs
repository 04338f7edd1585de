//! Exact standardization of étale algebras over local and global bases,
//! with certificates that can be re-checked independently.

pub mod base_ring;
pub mod cli;
pub mod error;
pub mod flatness;
pub mod global;
pub mod finite_algebra;
pub mod poly;
pub mod presentation;
pub mod residual;
pub mod ring;
pub mod standardize;

pub use error::{AlgebraError, ParseError, Result};
