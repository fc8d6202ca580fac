//! The book's chapters, included as documented modules so every code
//! snippet in the guide compiles and runs under `cargo test --doc`.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/choi.md")]
pub mod choi {}

#[doc = include_str!("../../../book/src/measure.md")]
pub mod measure {}

#[doc = include_str!("../../../book/src/zoo.md")]
pub mod zoo {}

#[doc = include_str!("../../../book/src/decompositions.md")]
pub mod decompositions {}

#[doc = include_str!("../../../book/src/mitigation.md")]
pub mod mitigation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
