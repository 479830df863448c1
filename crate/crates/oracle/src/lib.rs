//! Brute-force reference implementations and instance generators.
//!
//! Each oracle works from definitions (sets of opens, explicit fibers,
//! set-theoretic models) and never calls the routine it is checked against.

pub mod cardinals;
pub mod cells;
pub mod embed;
pub mod lex;
pub mod orders;
pub mod topology;
