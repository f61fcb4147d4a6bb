//! Compiles the guide's code blocks as doc-tests so the book cannot drift
//! from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/squares-and-twins.md")]
pub mod squares_and_twins {}
#[doc = include_str!("../../../book/src/pair-relations.md")]
pub mod pair_relations {}
#[doc = include_str!("../../../book/src/skeletons.md")]
pub mod skeletons {}
#[doc = include_str!("../../../book/src/feasibility.md")]
pub mod feasibility {}
#[doc = include_str!("../../../book/src/solving.md")]
pub mod solving {}
#[doc = include_str!("../../../book/src/clique.md")]
pub mod clique {}
#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}
#[doc = include_str!("../../../book/src/generators.md")]
pub mod generators {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
