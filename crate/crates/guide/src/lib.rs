//! The devils-staircase book. Each chapter is compiled here so that its
//! code blocks run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/beta.md")]
pub mod beta {}

#[doc = include_str!("../../../book/src/staircase.md")]
pub mod staircase {}

#[doc = include_str!("../../../book/src/diophantine.md")]
pub mod diophantine {}

#[doc = include_str!("../../../book/src/probes.md")]
pub mod probes {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
