//! Runs the code listings of the guide in `book/` as doctests.

#[doc = include_str!("../../../README.md")]
pub mod readme {}
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/k-logistic.md")]
pub mod k_logistic {}
#[doc = include_str!("../../../book/src/precision.md")]
pub mod precision {}
#[doc = include_str!("../../../book/src/cipher.md")]
pub mod cipher {}
#[doc = include_str!("../../../book/src/generator.md")]
pub mod generator {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
