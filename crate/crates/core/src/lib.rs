//! Certified evaluation of the devil's staircase `Δ`, which sends a slope
//! `α` to the β-number whose expansion of 1 is read off the Christoffel or
//! Sturmian word of slope `α`, together with the continued-fraction tools
//! used to study its derivative.

pub mod analysis;
pub mod beta;
pub mod diophantine;
mod dyadic;
pub mod enclosure;
mod error;
pub mod interval;
mod ser;
pub mod staircase;
pub mod words;

pub use enclosure::Enclosure;
pub use error::{Error, Result};
