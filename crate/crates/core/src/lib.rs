//! Heights of rational points on algebraic stacks over Q.
//!
//! The crate computes heights exactly, as rational combinations of `log p`,
//! on classifying stacks `B mu_n`, weighted projective stacks, stacky
//! projective lines rooted at rational points, and degree-two points of the
//! projective line seen as points of its symmetric square. A counting module
//! enumerates points of bounded height for several of these families and fits
//! growth exponents to the counts.
//!
//! Modules, bottom-up:
//!
//! - [`arith`]: factorization, valuations, power-free parts, discriminants.
//! - [`adelic`]: [`ExactHeight`] and the section-based height engine.
//! - [`wps`]: weighted projective stacks and their moduli readings.
//! - [`classifying`]: `B mu_n`, quadratic fields, Malle exponents.
//! - [`football`]: rooted projective lines, `edd`, tangential heights.
//! - [`sympow`]: quadratic points as points of `Sym^2 P^1`.
//! - [`counting`]: sieves, counting functions, exponent fits, searches.
//! - [`check`]: cross-validation suites exercised by the CLI.

pub mod adelic;
pub mod arith;
pub mod check;
pub mod classifying;
pub mod counting;
pub mod error;
pub mod football;
pub mod sympow;
pub mod wps;

pub use adelic::{combine, height_from_sections, ExactHeight, FactoredRational, HeightBreakdown};
pub use arith::FactoredInt;
pub use error::{Error, Result};
