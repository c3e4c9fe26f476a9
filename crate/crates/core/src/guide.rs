//! The user guide, compiled.
//!
//! Each submodule's documentation is one chapter of the book in `book/`,
//! included verbatim. Rustdoc runs every code block in those chapters as a
//! doc-test, which is the mechanism keeping the guide and the library in
//! step: a chapter that stops compiling fails `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/tables.md")]
pub mod tables {}

#[doc = include_str!("../../../book/src/significance.md")]
pub mod significance {}

#[doc = include_str!("../../../book/src/paradox.md")]
pub mod paradox_chapter {}

#[doc = include_str!("../../../book/src/decomposition.md")]
pub mod decomposition {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod command_line {}
