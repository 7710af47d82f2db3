//! The guide's chapters, compiled so their snippets run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}
#[doc = include_str!("../../../book/src/estimators.md")]
pub mod estimators {}
#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}
#[doc = include_str!("../../../book/src/ball.md")]
pub mod ball {}
#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
