//! Exact-integer search for Euler bricks and perfect-cuboid candidates with an
//! odd edge, built on the difference-of-squares representations
//! `n = t(e² − f²)` of that edge.
//!
//! - [`arith`]: gcd, integer square root, factorization, divisors, two-square splits
//! - [`pythag`]: representations of odd `n` and the Pythagorean triples they give
//! - [`bricks`]: brick witnesses, construction, classification, verification
//! - [`cuboids`]: perfect-cuboid witnesses over three representations
//! - [`biquad`]: the three sums-of-fourth-powers families
//! - [`search`], [`record`], [`checkpoint`], [`report`]: the range-scan driver

pub mod arith;
pub mod biquad;
pub mod bricks;
pub mod checkpoint;
pub mod cuboids;
pub mod error;
pub mod pythag;
pub mod record;
pub mod report;
pub mod search;

pub use error::{ClassifyError, Error, Result};
