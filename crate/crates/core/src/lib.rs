//! Exact, finite models of big-interval constructions.

pub mod cardinal;
pub mod error;
pub mod rational;

pub use error::ParseError;
pub use rational::Rational;
pub mod bigmaps;
pub mod embedding;
pub mod finspace;
pub mod lexint;
pub mod orders;
pub mod quotient;
