//! Kernelization toolkit for packing problems.
//!
//! Four kernelizers ([`kernel`]) shrink instances of hyperedge, star,
//! three-edge-path and weighted-path packing while provably preserving the
//! answer; exact solvers ([`oracle`]) referee them; coordination gadgets
//! ([`gadget`]) and OR-compositions ([`compose`]) make the matching
//! lower-bound constructions executable; and a deterministic random-testing
//! harness ([`harness`]) replays any of it against the oracles at scale.
//!
//! The mdbook guide under `book/` walks through all of this; its examples
//! compile and run as doc-tests of this crate.

pub mod compose;
pub mod gadget;
pub mod graph;
pub mod harness;
pub mod io;
pub mod kernel;
pub mod matching;
pub mod oracle;
pub mod trace;

// Every fenced Rust example in the guide runs under `cargo test --doc`,
// one module per chapter so a failure names its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/set-matching.md")]
    mod set_matching {}
    #[doc = include_str!("../../../book/src/stars.md")]
    mod stars {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/weighted-paths.md")]
    mod weighted_paths {}
    #[doc = include_str!("../../../book/src/gadgets.md")]
    mod gadgets {}
    #[doc = include_str!("../../../book/src/compositions.md")]
    mod compositions {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
