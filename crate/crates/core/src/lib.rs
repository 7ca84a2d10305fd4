//! Exact-arithmetic toolkit for private index coding.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod bounds;
pub mod catalogue;
pub mod cli;
pub mod coloring;
pub mod error;
pub mod feasibility;
pub mod gf;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod verifier;
pub mod weak;

pub use error::{Error, Result};
