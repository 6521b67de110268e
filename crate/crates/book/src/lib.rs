//! The guide in `book/` is plain mdbook, which cannot build samples that
//! depend on workspace crates. Each chapter is pulled in here as the docs of
//! an empty module instead, so `cargo test --doc` compiles and runs every
//! sample against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/simulator.md")]
pub mod simulator {}
#[doc = include_str!("../../../book/src/bell-operators.md")]
pub mod bell_operators {}
#[doc = include_str!("../../../book/src/training.md")]
pub mod training {}
#[doc = include_str!("../../../book/src/depth.md")]
pub mod depth {}
#[doc = include_str!("../../../book/src/measurement.md")]
pub mod measurement {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
