#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/data.md")]
pub mod data {}

#[doc = include_str!("../../../book/src/horizons.md")]
pub mod horizons {}

#[doc = include_str!("../../../book/src/distributions.md")]
pub mod distributions {}

#[doc = include_str!("../../../book/src/complexity.md")]
pub mod complexity {}

#[doc = include_str!("../../../book/src/infoflow.md")]
pub mod infoflow {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
